use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldIssue, Result};

/// How the Gaussian envelope is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeNorm {
    /// A exp(-(t-t0)^2 / 2 tau^2) / (tau * sqrt(2) * pi)
    #[default]
    Literal,
    /// A exp(-(t-t0)^2 / 2 tau^2) / (tau * sqrt(2 pi)), unit-area Gaussian times A.
    SqrtTwoPi,
    /// A exp(-(t-t0)^2 / 2 tau^2), A is the peak field.
    Peak,
}

/// Carrier frequency: a number, or the mean of group means of relative
/// level energies, e.g. `mid:3,4` or `mid:3,4;5`.
#[derive(Debug, Clone, PartialEq)]
pub enum DriveFrequency {
    Fixed(f64),
    Midpoint(Vec<Vec<usize>>),
}

impl DriveFrequency {
    /// Resolve against relative levels w_i0.
    pub fn resolve(&self, relative_levels: &[f64]) -> Result<f64> {
        match self {
            DriveFrequency::Fixed(w) => Ok(*w),
            DriveFrequency::Midpoint(groups) => {
                let mut total = 0.0;
                for g in groups {
                    let mut s = 0.0;
                    for &i in g {
                        s += relative_levels.get(i).copied().ok_or_else(|| {
                            Error::Range(format!(
                                "midpoint level {i} but only {} levels available",
                                relative_levels.len()
                            ))
                        })?;
                    }
                    total += s / g.len() as f64;
                }
                Ok(total / groups.len() as f64)
            }
        }
    }

    pub fn max_level(&self) -> Option<usize> {
        match self {
            DriveFrequency::Fixed(_) => None,
            DriveFrequency::Midpoint(g) => g.iter().flatten().copied().max(),
        }
    }
}

impl FromStr for DriveFrequency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("mid:") {
            let groups = rest
                .split(';')
                .map(|g| {
                    g.split(',')
                        .map(|i| {
                            i.trim()
                                .parse::<usize>()
                                .map_err(|_| Error::Parse(format!("bad level index '{i}' in '{s}'")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if groups.is_empty() || groups.iter().any(|g| g.is_empty()) {
                return Err(Error::Parse(format!("empty level group in '{s}'")));
            }
            Ok(DriveFrequency::Midpoint(groups))
        } else {
            s.parse::<f64>()
                .map(DriveFrequency::Fixed)
                .map_err(|_| Error::Parse(format!("'{s}' is neither a number nor mid:i,j[;k..]")))
        }
    }
}

impl fmt::Display for DriveFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DriveFrequency::Fixed(w) => write!(f, "{w}"),
            DriveFrequency::Midpoint(groups) => {
                let g: Vec<String> =
                    groups.iter().map(|g| g.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")).collect();
                write!(f, "mid:{}", g.join(";"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    pub amplitude: f64,
    pub omega_d: DriveFrequency,
    pub t0: f64,
    pub tau: f64,
    pub norm: EnvelopeNorm,
}

impl PulseSpec {
    pub fn new(amplitude: f64, omega_d: f64, t0: f64, tau: f64) -> Self {
        Self { amplitude, omega_d: DriveFrequency::Fixed(omega_d), t0, tau, norm: EnvelopeNorm::default() }
    }

    pub fn with_norm(mut self, norm: EnvelopeNorm) -> Self {
        self.norm = norm;
        self
    }

    pub fn issues(&self, prefix: &str) -> Vec<FieldIssue> {
        let mut out = Vec::new();
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            out.push(FieldIssue::new(format!("{prefix}.tau"), format!("must be > 0, got {}", self.tau)));
        }
        if !(self.amplitude >= 0.0) || !self.amplitude.is_finite() {
            out.push(FieldIssue::new(format!("{prefix}.amplitude"), format!("must be >= 0, got {}", self.amplitude)));
        }
        if !self.t0.is_finite() {
            out.push(FieldIssue::new(format!("{prefix}.t0"), "must be finite"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let issues = self.issues("pulse");
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(issues))
        }
    }

    /// Envelope value at t = t0.
    pub fn peak(&self) -> f64 {
        match self.norm {
            EnvelopeNorm::Literal => self.amplitude / (self.tau * 2f64.sqrt() * PI),
            EnvelopeNorm::SqrtTwoPi => self.amplitude / (self.tau * (2.0 * PI).sqrt()),
            EnvelopeNorm::Peak => self.amplitude,
        }
    }

    pub fn envelope(&self, t: f64) -> f64 {
        let x = (t - self.t0) / self.tau;
        self.peak() * (-0.5 * x * x).exp()
    }

    /// Integral of the envelope over all time.
    pub fn area(&self) -> f64 {
        self.peak() * self.tau * (2.0 * PI).sqrt()
    }

    pub fn carrier(&self) -> Result<f64> {
        match self.omega_d {
            DriveFrequency::Fixed(w) => Ok(w),
            DriveFrequency::Midpoint(_) => Err(Error::Config(format!(
                "drive frequency '{}' must be resolved against the spectrum first",
                self.omega_d
            ))),
        }
    }

    /// E(t) cos(omega_d t)
    pub fn field(&self, t: f64) -> Result<f64> {
        Ok(self.envelope(t) * (self.carrier()? * t).cos())
    }

    pub fn resolved(&self, relative_levels: &[f64]) -> Result<Self> {
        let w = self.omega_d.resolve(relative_levels)?;
        Ok(Self { omega_d: DriveFrequency::Fixed(w), ..self.clone() })
    }

    /// Width that makes a peak-normalised pulse rotate a transition with
    /// matrix element `m` by `theta` (area * m = theta).
    pub fn area_tau(amplitude: f64, m: f64, theta: f64, norm: EnvelopeNorm) -> Option<f64> {
        // Only the peak reading lets tau set the area; the other readings are tau-independent.
        match norm {
            EnvelopeNorm::Peak if amplitude > 0.0 && m > 0.0 => Some(theta / (amplitude * (2.0 * PI).sqrt() * m)),
            _ => None,
        }
    }
}
