use std::sync::Arc;

use faer::{c64, Mat, MatRef, Side};

use super::operator::Operator;
use super::space::HilbertSpace;
use super::state::{same_space, QuantumState};
use crate::error::{Error, Result};

/// Levels closer than this (relative to the spectral scale) count as degenerate
/// for eigenvector ordering.
const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct EigenDecomposition {
    space: Arc<HilbertSpace>,
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<c64>,
}

impl std::fmt::Debug for EigenDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EigenDecomposition")
            .field("space", &self.space.to_string())
            .field("lowest", &&self.eigenvalues[..self.eigenvalues.len().min(4)])
            .finish_non_exhaustive()
    }
}

impl EigenDecomposition {
    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are eigenvectors, in eigenvalue order.
    pub fn eigenvectors(&self) -> MatRef<'_, c64> {
        self.eigenvectors.as_ref()
    }

    pub fn eigenvector(&self, i: usize) -> Result<QuantumState> {
        if i >= self.dim() {
            return Err(Error::Range(format!("eigenvector {i} of {}", self.dim())));
        }
        let amps = self.eigenvectors.col(i).iter().copied().collect();
        QuantumState::from_amplitudes(&self.space, amps)
    }

    /// Energies relative to the ground level.
    pub fn relative_levels(&self, n: usize) -> Vec<f64> {
        let e0 = self.eigenvalues[0];
        self.eigenvalues.iter().take(n).map(|e| e - e0).collect()
    }

    /// Coefficients `V^dag psi`.
    pub fn to_eigenbasis(&self, psi: &QuantumState) -> Result<Vec<c64>> {
        same_space(&self.space, psi.space())?;
        let x = faer::Col::<c64>::from_fn(psi.dim(), |i| psi.amplitudes()[i]);
        let c = self.eigenvectors.adjoint() * &x;
        Ok(c.iter().copied().collect())
    }

    /// `V c`
    pub fn from_eigenbasis(&self, coeffs: &[c64]) -> Result<QuantumState> {
        if coeffs.len() != self.dim() {
            return Err(Error::Type(format!("{} coefficients for dim {}", coeffs.len(), self.dim())));
        }
        let c = faer::Col::<c64>::from_fn(coeffs.len(), |i| coeffs[i]);
        let v = &self.eigenvectors * &c;
        QuantumState::from_amplitudes(&self.space, v.iter().copied().collect())
    }

    /// max_i ||H v_i - lambda_i v_i|| / max|H|
    pub fn residual(&self, h: &Operator) -> f64 {
        let hv = h.matrix() * &self.eigenvectors;
        let d = self.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            let r: f64 =
                (0..d).map(|i| (hv[(i, j)] - self.eigenvectors[(i, j)] * self.eigenvalues[j]).norm_sqr()).sum();
            worst = worst.max(r.sqrt());
        }
        worst / h.max_abs().max(f64::MIN_POSITIVE)
    }
}

fn real_part(m: MatRef<'_, c64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

fn require_hermitian(op: &Operator) -> Result<()> {
    if !op.is_hermitian() {
        return Err(Error::Contract("eigendecomposition requires a Hermitian operator".into()));
    }
    Ok(())
}

/// Full Hermitian eigendecomposition. Eigenvalues ascend; each eigenvector's
/// largest-magnitude amplitude is made real positive, and exactly degenerate
/// levels are ordered by the index of that amplitude.
pub fn eig_hermitian(op: &Operator) -> Result<EigenDecomposition> {
    require_hermitian(op)?;
    let d = op.dim();
    let (values, mut vectors) = if op.is_real() {
        let evd = real_part(op.matrix())
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Convergence(format!("eigensolver failed: {e:?}")))?;
        let s = evd.S().column_vector();
        let values: Vec<f64> = (0..d).map(|i| s[i]).collect();
        let u = evd.U();
        (values, Mat::<c64>::from_fn(d, d, |i, j| c64::new(u[(i, j)], 0.0)))
    } else {
        let evd = op
            .matrix()
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Convergence(format!("eigensolver failed: {e:?}")))?;
        let s = evd.S().column_vector();
        let values: Vec<f64> = (0..d).map(|i| s[i].re).collect();
        (values, evd.U().to_owned())
    };

    let mut pivots = Vec::with_capacity(d);
    for j in 0..d {
        let col: Vec<c64> = vectors.col(j).iter().copied().collect();
        let (p, a) = pivot(&col);
        let phase = a.conj() / a.norm();
        for i in 0..d {
            vectors[(i, j)] *= phase;
        }
        pivots.push(p);
    }

    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut order: Vec<usize> = (0..d).collect();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && values[end] - values[end - 1] <= DEGENERACY_TOL * scale {
            end += 1;
        }
        order[start..end].sort_by_key(|&j| pivots[j]);
        start = end;
    }
    let eigenvectors = if order.iter().enumerate().all(|(i, &j)| i == j) {
        vectors
    } else {
        Mat::from_fn(d, d, |i, j| vectors[(i, order[j])])
    };

    Ok(EigenDecomposition { space: op.space().clone(), eigenvalues: values, eigenvectors })
}

/// Index and value of the first amplitude within a hair of the largest magnitude.
fn pivot(col: &[c64]) -> (usize, c64) {
    let max = col.iter().map(|a| a.norm()).fold(0.0f64, f64::max);
    col.iter().copied().enumerate().find(|(_, a)| a.norm() >= max * (1.0 - 1e-9)).unwrap_or((0, c64::new(1.0, 0.0)))
}

/// Eigenvalues only (ascending); cheaper than [`eig_hermitian`].
pub fn eigenvalues_hermitian(op: &Operator) -> Result<Vec<f64>> {
    require_hermitian(op)?;
    let vals = if op.is_real() {
        real_part(op.matrix()).self_adjoint_eigenvalues(Side::Lower)
    } else {
        op.matrix().self_adjoint_eigenvalues(Side::Lower)
    };
    vals.map_err(|e| Error::Convergence(format!("eigensolver failed: {e:?}")))
}
