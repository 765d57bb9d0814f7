use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Total dimension above which `make_space` refuses to build a space.
pub const DEFAULT_DIM_GUARD: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    Cavity,
    Qubit,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ModeSpec {
    pub kind: ModeKind,
    pub dim: usize,
    pub label: String,
}

impl ModeSpec {
    pub fn new(kind: ModeKind, dim: usize, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if dim < 2 {
            return Err(Error::Config(format!("mode '{label}' has dim {dim}, need at least 2")));
        }
        if kind == ModeKind::Qubit && dim != 2 {
            return Err(Error::Config(format!("qubit mode '{label}' must have dim 2, got {dim}")));
        }
        Ok(Self { kind, dim, label })
    }

    /// Fock ladder holding 0..=n_max photons.
    pub fn cavity(label: impl Into<String>, n_max: usize) -> Result<Self> {
        Self::new(ModeKind::Cavity, n_max + 1, label)
    }

    pub fn qubit(label: impl Into<String>) -> Self {
        Self { kind: ModeKind::Qubit, dim: 2, label: label.into() }
    }

    pub fn n_max(&self) -> usize {
        self.dim - 1
    }
}

/// Ordered tensor product of modes. Mode 0 is the leftmost (slowest-varying) factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    modes: Vec<ModeSpec>,
    strides: Vec<usize>,
    total_dim: usize,
}

pub fn make_space(modes: Vec<ModeSpec>) -> Result<Arc<HilbertSpace>> {
    HilbertSpace::with_guard(modes, DEFAULT_DIM_GUARD)
}

impl HilbertSpace {
    pub fn with_guard(modes: Vec<ModeSpec>, guard: usize) -> Result<Arc<Self>> {
        if modes.is_empty() {
            return Err(Error::Config("a Hilbert space needs at least one mode".into()));
        }
        let mut total: usize = 1;
        for m in &modes {
            if m.dim < 2 || (m.kind == ModeKind::Qubit && m.dim != 2) {
                return Err(Error::Config(format!("invalid mode '{}' of dim {}", m.label, m.dim)));
            }
            total = total
                .checked_mul(m.dim)
                .filter(|&t| t <= guard)
                .ok_or_else(|| Error::Config(format!("total dimension exceeds the guard of {guard}")))?;
        }
        let mut strides = vec![1usize; modes.len()];
        for k in (0..modes.len() - 1).rev() {
            strides[k] = strides[k + 1] * modes[k + 1].dim;
        }
        Ok(Arc::new(Self { modes, strides, total_dim: total }))
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn mode(&self, index: usize) -> Result<&ModeSpec> {
        self.modes.get(index).ok_or_else(|| Error::Range(format!("mode {index} of a {}-mode space", self.modes.len())))
    }

    pub fn stride(&self, index: usize) -> usize {
        self.strides[index]
    }

    pub fn mode_by_label(&self, label: &str) -> Option<usize> {
        self.modes.iter().position(|m| m.label == label)
    }

    pub fn cavity_modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.modes.iter().enumerate().filter(|(_, m)| m.kind == ModeKind::Cavity).map(|(i, _)| i)
    }

    pub fn qubit_modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.modes.iter().enumerate().filter(|(_, m)| m.kind == ModeKind::Qubit).map(|(i, _)| i)
    }

    /// Flat index of an occupation list (qubits: 0 = g, 1 = e).
    pub fn index_of(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.modes.len() {
            return Err(Error::Range(format!(
                "label has {} entries, space has {} modes",
                occupations.len(),
                self.modes.len()
            )));
        }
        let mut idx = 0;
        for (k, (&n, m)) in occupations.iter().zip(&self.modes).enumerate() {
            if n >= m.dim {
                return Err(Error::Range(format!(
                    "occupation {n} of mode '{}' exceeds its truncation (max {})",
                    m.label,
                    m.dim - 1
                )));
            }
            idx += n * self.strides[k];
        }
        Ok(idx)
    }

    pub fn occupations(&self, index: usize) -> Vec<usize> {
        self.modes.iter().zip(&self.strides).map(|(m, &s)| (index / s) % m.dim).collect()
    }

    /// Parse a label such as `1,0,g,e`. Cavity entries are integers, qubit
    /// entries are `g`/`e` (or `0`/`1`).
    pub fn parse_label(&self, text: &str) -> Result<Vec<usize>> {
        let parts: Vec<&str> =
            text.trim().trim_start_matches('|').trim_end_matches('>').split(',').map(str::trim).collect();
        if parts.len() != self.modes.len() {
            return Err(Error::Range(format!(
                "label '{text}' has {} entries, expected {} ({})",
                parts.len(),
                self.modes.len(),
                self.mode_names()
            )));
        }
        parts
            .iter()
            .zip(&self.modes)
            .map(|(p, m)| {
                let v = match (m.kind, *p) {
                    (ModeKind::Qubit, "g") => 0,
                    (ModeKind::Qubit, "e") => 1,
                    _ => p
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad entry '{p}' for mode '{}' in '{text}'", m.label)))?,
                };
                if v >= m.dim {
                    return Err(Error::Range(format!(
                        "occupation {v} of mode '{}' exceeds its truncation (max {})",
                        m.label,
                        m.dim - 1
                    )));
                }
                Ok(v)
            })
            .collect()
    }

    pub fn format_occupations(&self, occupations: &[usize]) -> String {
        occupations
            .iter()
            .zip(&self.modes)
            .map(|(&n, m)| match m.kind {
                ModeKind::Qubit => (if n == 0 { "g" } else { "e" }).to_string(),
                ModeKind::Cavity => format!("{n}_{}", m.label),
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn format_index(&self, index: usize) -> String {
        self.format_occupations(&self.occupations(index))
    }

    fn mode_names(&self) -> String {
        self.modes.iter().map(|m| m.label.as_str()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.modes.iter().map(|m| format!("{}[{}]", m.label, m.dim)).collect();
        write!(f, "{} (dim {})", dims.join(" x "), self.total_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cavity(n_max: usize) -> Arc<HilbertSpace> {
        make_space(vec![
            ModeSpec::cavity("c1", n_max).unwrap(),
            ModeSpec::cavity("c2", n_max).unwrap(),
            ModeSpec::qubit("q1"),
            ModeSpec::qubit("q2"),
        ])
        .unwrap()
    }

    #[test]
    fn dimensions_are_products() {
        let s = make_space(vec![ModeSpec::cavity("a", 2).unwrap(), ModeSpec::qubit("q")]).unwrap();
        assert_eq!(s.total_dim(), 6);
        assert_eq!(two_cavity(6).total_dim(), 196);
        let three = make_space(vec![
            ModeSpec::cavity("c1", 6).unwrap(),
            ModeSpec::cavity("c2", 6).unwrap(),
            ModeSpec::cavity("c3", 6).unwrap(),
            ModeSpec::qubit("q1"),
            ModeSpec::qubit("q2"),
        ])
        .unwrap();
        assert_eq!(three.total_dim(), 1372);
    }

    #[test]
    fn guard_and_bad_modes_are_rejected() {
        let modes = vec![ModeSpec::cavity("a", 199).unwrap(), ModeSpec::cavity("b", 199).unwrap()];
        assert!(matches!(make_space(modes), Err(Error::Config(_))));
        assert!(make_space(vec![]).is_err());
        assert!(ModeSpec::new(ModeKind::Qubit, 3, "q").is_err());
        assert!(ModeSpec::new(ModeKind::Cavity, 1, "c").is_err());
    }

    #[test]
    fn leftmost_mode_varies_slowest() {
        let s = two_cavity(2);
        assert_eq!(s.index_of(&[0, 0, 0, 1]).unwrap(), 1);
        assert_eq!(s.index_of(&[0, 0, 1, 0]).unwrap(), 2);
        assert_eq!(s.index_of(&[0, 1, 0, 0]).unwrap(), 4);
        assert_eq!(s.index_of(&[1, 0, 0, 0]).unwrap(), 12);
        for i in 0..s.total_dim() {
            assert_eq!(s.index_of(&s.occupations(i)).unwrap(), i);
        }
    }

    #[test]
    fn labels_round_trip() {
        let s = two_cavity(3);
        let occ = s.parse_label("1,0,g,e").unwrap();
        assert_eq!(occ, vec![1, 0, 0, 1]);
        assert_eq!(s.format_occupations(&occ), "1_c1,0_c2,g,e");
        assert!(matches!(s.parse_label("4,0,g,g"), Err(Error::Range(_))));
        assert!(matches!(s.parse_label("1,0,g"), Err(Error::Range(_))));
        assert!(matches!(s.parse_label("x,0,g,g"), Err(Error::Parse(_))));
    }
}
