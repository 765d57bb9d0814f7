use faer::{c64, Mat};

use super::observables::{check_normalized, check_times, ObservableSpec, Series, Trajectory};
use crate::error::Result;
use crate::fock::{eig_hermitian, EigenDecomposition, Operator, QuantumState};

/// Time columns per dense reconstruction batch.
const CHUNK: usize = 128;

/// psi(t) = V exp(-i Lambda t) V^dag psi0 for a static Hamiltonian.
pub fn evolve_free(h: &Operator, psi0: &QuantumState, times: &[f64], obs: &[ObservableSpec]) -> Result<Trajectory> {
    let eig = eig_hermitian(h)?;
    evolve_free_eig(&eig, psi0, times, obs)
}

/// As [`evolve_free`], reusing an existing eigendecomposition.
pub fn evolve_free_eig(
    eig: &EigenDecomposition,
    psi0: &QuantumState,
    times: &[f64],
    obs: &[ObservableSpec],
) -> Result<Trajectory> {
    check_times(times)?;
    check_normalized(psi0)?;
    let c = eig.to_eigenbasis(psi0)?;
    let lam = eig.eigenvalues();
    let dim = eig.dim();
    let space = eig.space();

    // Projector k: <k|psi(t)> = sum_j w_kj exp(-i lambda_j t), w_kj = <k|E_j> c_j.
    let mut weights: Vec<Option<Vec<c64>>> = Vec::with_capacity(obs.len());
    let mut diagonals: Vec<Option<Vec<f64>>> = Vec::with_capacity(obs.len());
    for o in obs {
        let diag = o.diagonal(space)?;
        weights.push(match o {
            ObservableSpec::StateProjector { state, .. } => {
                let u = eig.to_eigenbasis(state)?;
                Some(u.iter().zip(&c).map(|(uj, cj)| uj.conj() * cj).collect())
            }
            _ => None,
        });
        diagonals.push(diag);
    }
    let need_full = diagonals.iter().any(Option::is_some);

    let mut values = vec![Vec::with_capacity(times.len()); obs.len()];
    let base_norm = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let mut norm_drift = (base_norm - 1.0).abs();

    let mut phase = vec![c64::new(0.0, 0.0); dim];
    for chunk in times.chunks(CHUNK) {
        let full = need_full.then(|| {
            let phi = Mat::<c64>::from_fn(dim, chunk.len(), |j, k| c[j] * c64::cis(-lam[j] * chunk[k]));
            eig.eigenvectors() * &phi
        });
        for (k, &t) in chunk.iter().enumerate() {
            for (p, &l) in phase.iter_mut().zip(lam) {
                *p = c64::cis(-l * t);
            }
            let psi_sq: Option<Vec<f64>> = full.as_ref().map(|m| m.col(k).iter().map(|a| a.norm_sqr()).collect());
            if let Some(sq) = &psi_sq {
                norm_drift = norm_drift.max((sq.iter().sum::<f64>().sqrt() - 1.0).abs());
            }
            for (i, out) in values.iter_mut().enumerate() {
                let v = if let Some(w) = &weights[i] {
                    w.iter().zip(&phase).map(|(a, b)| a * b).sum::<c64>().norm_sqr()
                } else {
                    let d = diagonals[i].as_ref().expect("diagonal observable");
                    psi_sq.as_ref().expect("full state").iter().zip(d).map(|(a, b)| a * b).sum()
                };
                out.push(v);
            }
        }
    }

    let t_last = *times.last().expect("non-empty");
    let final_coeffs: Vec<c64> = c.iter().zip(lam).map(|(cj, &l)| cj * c64::cis(-l * t_last)).collect();
    let final_state = eig.from_eigenbasis(&final_coeffs)?;
    Ok(Trajectory {
        times: times.to_vec(),
        series: obs
            .iter()
            .zip(values)
            .map(|(o, v)| Series { name: o.name().to_string(), values: v, probability: o.is_probability() })
            .collect(),
        final_state,
        norm_drift,
        dt: None,
        retained_levels: None,
    })
}

/// Joint-absorption time pi / (2 Omega_eff).
pub fn rabi_period(omega_eff: f64) -> Result<f64> {
    if !(omega_eff > 0.0) || !omega_eff.is_finite() {
        return Err(crate::Error::Config(format!("omega_eff must be positive, got {omega_eff}")));
    }
    Ok(std::f64::consts::PI / (2.0 * omega_eff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rabi_half_periods() {
        assert!((rabi_period(1.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((rabi_period(8e-3).unwrap() - 196.349540849).abs() < 1e-6);
        assert!((rabi_period(1e-3).unwrap() - 1570.796326795).abs() < 1e-6);
        assert!(rabi_period(0.0).is_err());
        assert!(rabi_period(-1.0).is_err());
    }
}
