use std::fmt;
use std::sync::Arc;

use faer::c64;

use super::operator::{matvec, Operator};
use super::space::{HilbertSpace, ModeKind};
use crate::error::{Error, Result};

/// State vector bound to a Hilbert space.
#[derive(Clone, PartialEq)]
pub struct QuantumState {
    space: Arc<HilbertSpace>,
    amplitudes: Vec<c64>,
}

impl fmt::Debug for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuantumState")
            .field("space", &self.space.to_string())
            .field("norm", &self.norm())
            .finish_non_exhaustive()
    }
}

impl QuantumState {
    pub fn basis(space: &Arc<HilbertSpace>, index: usize) -> Result<Self> {
        let d = space.total_dim();
        if index >= d {
            return Err(Error::Range(format!("basis index {index} in a space of dim {d}")));
        }
        let mut amplitudes = vec![c64::new(0.0, 0.0); d];
        amplitudes[index] = c64::new(1.0, 0.0);
        Ok(Self { space: space.clone(), amplitudes })
    }

    pub fn from_occupations(space: &Arc<HilbertSpace>, occupations: &[usize]) -> Result<Self> {
        Self::basis(space, space.index_of(occupations)?)
    }

    /// Raw vector; no normalization applied.
    pub fn from_amplitudes(space: &Arc<HilbertSpace>, amplitudes: Vec<c64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::Type(format!(
                "{} amplitudes for a space of dim {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        Ok(Self { space: space.clone(), amplitudes })
    }

    pub fn normalized(space: &Arc<HilbertSpace>, amplitudes: Vec<c64>) -> Result<Self> {
        Self::from_amplitudes(space, amplitudes)?.normalize()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Contract("cannot normalize a zero or non-finite vector".into()));
        }
        for a in &mut self.amplitudes {
            *a /= n;
        }
        Ok(self)
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<c64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `sum_k c_k |psi_k>` without normalization.
    pub fn superpose(terms: &[(c64, &QuantumState)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Contract("empty superposition".into()))?.1;
        let mut out = vec![c64::new(0.0, 0.0); first.dim()];
        for (c, s) in terms {
            same_space(&first.space, &s.space)?;
            for (o, a) in out.iter_mut().zip(&s.amplitudes) {
                *o += *c * *a;
            }
        }
        Self::from_amplitudes(&first.space, out)
    }

    /// |<other|self>|^2
    pub fn probability_in(&self, other: &QuantumState) -> Result<f64> {
        Ok(overlap(other, self)?.norm_sqr())
    }
}

pub(crate) fn same_space(a: &Arc<HilbertSpace>, b: &Arc<HilbertSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::Type(format!("space mismatch: {a} vs {b}")))
    }
}

/// <a|b> with `a` conjugated.
pub fn overlap(a: &QuantumState, b: &QuantumState) -> Result<c64> {
    same_space(&a.space, &b.space)?;
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum())
}

/// <psi|O|psi>
pub fn expectation(state: &QuantumState, op: &Operator) -> Result<c64> {
    same_space(&state.space, op.space())?;
    let o_psi = matvec(op.matrix(), &state.amplitudes);
    Ok(state.amplitudes.iter().zip(&o_psi).map(|(x, y)| x.conj() * y).sum())
}

fn ladder_on_state(state: &QuantumState, mode: usize, raise: bool) -> Result<QuantumState> {
    let space = &state.space;
    let spec = space.mode(mode)?;
    if spec.kind != ModeKind::Cavity {
        return Err(Error::Type(format!("mode {mode} ('{}') is not a cavity", spec.label)));
    }
    let s = space.stride(mode);
    let dim = spec.dim;
    let mut out = vec![c64::new(0.0, 0.0); state.dim()];
    for (idx, &amp) in state.amplitudes.iter().enumerate() {
        if amp == c64::new(0.0, 0.0) {
            continue;
        }
        let n = (idx / s) % dim;
        if raise && n + 1 < dim {
            out[idx + s] += amp * ((n + 1) as f64).sqrt();
        } else if !raise && n > 0 {
            out[idx - s] += amp * (n as f64).sqrt();
        }
    }
    QuantumState::from_amplitudes(space, out)
}

/// a^dag applied to a state vector (the top Fock level maps to zero).
pub fn apply_creation(state: &QuantumState, mode: usize) -> Result<QuantumState> {
    ladder_on_state(state, mode, true)
}

pub fn apply_annihilation(state: &QuantumState, mode: usize) -> Result<QuantumState> {
    ladder_on_state(state, mode, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::operator::{annihilation, creation, number};
    use crate::fock::space::{make_space, ModeSpec};

    fn space() -> Arc<HilbertSpace> {
        make_space(vec![ModeSpec::cavity("a", 3).unwrap(), ModeSpec::qubit("q")]).unwrap()
    }

    #[test]
    fn number_expectations() {
        let s = space();
        let n = number(&s, 0).unwrap();
        let vac = QuantumState::from_occupations(&s, &[0, 0]).unwrap();
        let one = QuantumState::from_occupations(&s, &[1, 1]).unwrap();
        assert_eq!(expectation(&vac, &n).unwrap(), c64::new(0.0, 0.0));
        assert_eq!(expectation(&one, &n).unwrap(), c64::new(1.0, 0.0));
    }

    #[test]
    fn overlaps_and_superposition() {
        let s = space();
        let zero = QuantumState::basis(&s, 0).unwrap();
        let two = QuantumState::basis(&s, 2).unwrap();
        assert_eq!(overlap(&zero, &two).unwrap(), c64::new(0.0, 0.0));
        let h = c64::new(0.5f64.sqrt(), 0.0);
        let plus = QuantumState::superpose(&[(h, &zero), (h, &two)]).unwrap();
        assert!((overlap(&plus, &plus).unwrap().re - 1.0).abs() < 1e-15);
        assert!((plus.probability_in(&zero).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sparse_ladders_match_dense_operators() {
        let s = space();
        let amps: Vec<c64> = (0..8).map(|k| c64::new(k as f64 * 0.3 - 1.0, 0.1 * k as f64)).collect();
        let psi = QuantumState::from_amplitudes(&s, amps).unwrap();
        let dense_up = creation(&s, 0).unwrap().apply(&psi).unwrap();
        let dense_dn = annihilation(&s, 0).unwrap().apply(&psi).unwrap();
        let up = apply_creation(&psi, 0).unwrap();
        let dn = apply_annihilation(&psi, 0).unwrap();
        for i in 0..8 {
            assert!((up.amplitudes()[i] - dense_up.amplitudes()[i]).norm() < 1e-14);
            assert!((dn.amplitudes()[i] - dense_dn.amplitudes()[i]).norm() < 1e-14);
        }
        assert!(matches!(apply_creation(&psi, 1), Err(Error::Type(_))));
    }

    #[test]
    fn mismatched_spaces_are_type_errors() {
        let a = QuantumState::basis(&space(), 0).unwrap();
        let other = make_space(vec![ModeSpec::cavity("b", 3).unwrap(), ModeSpec::qubit("q")]).unwrap();
        let b = QuantumState::basis(&other, 0).unwrap();
        assert!(matches!(overlap(&a, &b), Err(Error::Type(_))));
        assert!(QuantumState::from_amplitudes(&other, vec![c64::new(0.0, 0.0); 3]).is_err());
        assert!(QuantumState::from_amplitudes(&other, vec![c64::new(0.0, 0.0); 8]).unwrap().normalize().is_err());
    }
}
