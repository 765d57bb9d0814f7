use std::sync::Arc;

use faer::c64;

use super::hamiltonian::{bare_space, supermode_order, supermode_space};
use super::params::SystemParams;
use super::supermode::supermode_transform;
use crate::error::{Error, Result};
use crate::fock::{apply_creation, HilbertSpace, ModeKind, QuantumState};

/// Computational basis vector for an occupation list in `space`.
pub fn bare_label_state(space: &Arc<HilbertSpace>, label: &[usize]) -> Result<QuantumState> {
    QuantumState::from_occupations(space, label)
}

/// Normal-mode Fock state expressed in the bare basis. `label` follows the
/// supermode space order: (A, S, q1, q2) or (S1, S2, A, q1, q2).
pub fn supermode_label_state(p: &SystemParams, label: &[usize]) -> Result<QuantumState> {
    let sm_space = supermode_space(p)?;
    // Validates lengths and per-mode ranges.
    sm_space.index_of(label)?;
    let n_photons: usize = sm_space.cavity_modes().map(|k| label[k]).sum();
    if n_photons > p.n_max {
        return Err(Error::Range(format!(
            "{n_photons} normal-mode photons do not fit a bare truncation of n_max = {}",
            p.n_max
        )));
    }
    let t = supermode_transform(p)?;
    let space = bare_space(p)?;
    let nc = p.n_cavities;
    let mut vacuum = vec![0usize; nc];
    vacuum.extend_from_slice(&label[nc..]);
    let mut psi = QuantumState::from_occupations(&space, &vacuum)?;
    for (k, name) in supermode_order(nc).iter().enumerate() {
        let row = &t.matrix[t.row(name).expect("transform row")];
        for _ in 0..label[k] {
            let mut next = vec![c64::new(0.0, 0.0); psi.dim()];
            for (n, &m) in row.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                let raised = apply_creation(&psi, n)?;
                for (o, a) in next.iter_mut().zip(raised.amplitudes()) {
                    *o += *a * m;
                }
            }
            psi = QuantumState::from_amplitudes(&space, next)?;
        }
    }
    psi.normalize()
}

/// Parse a label like `1,0,g,g` against a space's mode list.
pub fn parse_label(space: &HilbertSpace, text: &str) -> Result<Vec<usize>> {
    space.parse_label(text)
}

/// The states spanning the one-quantum model manifold of `space`: one photon
/// in any cavity mode with both qubits down, and the empty cavities with both
/// qubits up.
pub fn one_quantum_states(space: &Arc<HilbertSpace>) -> Result<Vec<QuantumState>> {
    let n = space.n_modes();
    let mut out = Vec::new();
    for k in space.cavity_modes() {
        let mut occ = vec![0usize; n];
        occ[k] = 1;
        out.push(QuantumState::from_occupations(space, &occ)?);
    }
    let mut ee = vec![0usize; n];
    for (k, m) in space.modes().iter().enumerate() {
        if m.kind == ModeKind::Qubit {
            ee[k] = 1;
        }
    }
    out.push(QuantumState::from_occupations(space, &ee)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::overlap;

    #[test]
    fn antisymmetric_photon_in_bare_basis() {
        let p = SystemParams::two_cavity().with_n_max(3);
        let psi = supermode_label_state(&p, &[1, 0, 0, 0]).unwrap();
        let s = psi.space().clone();
        let a10 = QuantumState::from_occupations(&s, &[1, 0, 0, 0]).unwrap();
        let a01 = QuantumState::from_occupations(&s, &[0, 1, 0, 0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((overlap(&a10, &psi).unwrap().re - h).abs() < 1e-15);
        assert!((overlap(&a01, &psi).unwrap().re + h).abs() < 1e-15);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_photon_normal_mode_state_is_normalized() {
        let p = SystemParams::three_cavity(0.3).with_n_max(3);
        let psi = supermode_label_state(&p, &[1, 0, 2, 1, 0]).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-14);
        assert!(matches!(supermode_label_state(&p, &[2, 2, 0, 0, 0]), Err(Error::Range(_))));
        assert!(matches!(supermode_label_state(&p, &[4, 0, 0, 0, 0]), Err(Error::Range(_))));
    }

    #[test]
    fn model_manifold_size() {
        let p = SystemParams::three_cavity(0.0).with_n_max(2);
        assert_eq!(one_quantum_states(&bare_space(&p).unwrap()).unwrap().len(), 4);
    }
}
