use std::fmt;

/// One problem found while validating a configuration or parameter record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldIssue {
    pub path: String,
    pub message: String,
}

impl FieldIssue {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for FieldIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation failed:\n{}", render_issues(.0))]
    Validation(Vec<FieldIssue>),

    #[error("type error: {0}")]
    Type(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported parameter {field}: {message}")]
    UnsupportedParameter { field: String, message: String },

    #[error("bracketing error: {0}")]
    Bracketing(String),

    #[error("convergence error: {0} (raise the truncation guard or fix n_max explicitly)")]
    Convergence(String),

    #[error("step-size failure: norm drift {drift:.3e} exceeds {limit:.1e} at dt = {dt:.4e} (halve dt and retry)")]
    StepSize { drift: f64, limit: f64, dt: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

fn render_issues(issues: &[FieldIssue]) -> String {
    issues.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n")
}

impl Error {
    /// Process exit status used by the `simulate` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Validation(_)
            | Error::Type(_)
            | Error::Range(_)
            | Error::UnsupportedParameter { .. }
            | Error::Parse(_) => 2,
            Error::Convergence(_) | Error::StepSize { .. } | Error::Bracketing(_) => 3,
            Error::Io { .. } => 4,
            Error::Contract(_) => 1,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn unsupported(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::UnsupportedParameter { field: field.into(), message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_cli_contract() {
        assert_eq!(Error::Validation(vec![]).exit_code(), 2);
        assert_eq!(Error::Parse("x".into()).exit_code(), 2);
        assert_eq!(Error::Convergence("x".into()).exit_code(), 3);
        assert_eq!(Error::StepSize { drift: 1.0, limit: 1e-5, dt: 0.1 }.exit_code(), 3);
        let io = Error::io("out.csv", std::io::Error::other("disk full"));
        assert_eq!(io.exit_code(), 4);
    }

    #[test]
    fn validation_message_lists_every_field() {
        let e = Error::Validation(vec![
            FieldIssue::new("system.J", "must be > 0"),
            FieldIssue::new("sweep.points", "must be >= 2"),
        ]);
        let text = e.to_string();
        assert!(text.contains("system.J: must be > 0"));
        assert!(text.contains("sweep.points"));
    }
}
