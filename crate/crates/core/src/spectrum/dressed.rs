use std::sync::Arc;

use faer::{c64, Mat, Side};

use crate::error::{Error, Result};
use crate::fock::{overlap, EigenDecomposition, HilbertSpace, QuantumState};
use crate::model::one_quantum_states;

/// Smallest eigenvalue of the overlap matrix accepted before the dressed
/// frame is declared ill-conditioned.
const MIN_OVERLAP_EIGENVALUE: f64 = 1e-3;

/// Map from a small orthonormal set of product ("model") states onto the
/// dressed levels that carry them.
///
/// For each block of model states, the equally many eigenvectors with the
/// largest weight on the block are selected. The model states are projected
/// onto that span and orthonormalized symmetrically (Lowdin), giving the
/// dressed state closest to each model state.
#[derive(Debug, Clone)]
pub struct DressedFrame {
    space: Arc<HilbertSpace>,
    levels: Vec<Vec<usize>>,
    model: Vec<QuantumState>,
    dressed: Vec<QuantumState>,
    min_overlap: f64,
}

impl DressedFrame {
    pub fn new(eig: &EigenDecomposition, blocks: &[Vec<QuantumState>]) -> Result<Self> {
        let space = eig.space().clone();
        let model: Vec<QuantumState> = blocks.iter().flatten().cloned().collect();
        for (i, a) in model.iter().enumerate() {
            for (j, b) in model.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                if (overlap(a, b)? - c64::new(target, 0.0)).norm() > 1e-10 {
                    return Err(Error::Contract("model states must be orthonormal".into()));
                }
            }
        }

        let mut taken = vec![false; eig.dim()];
        let mut levels = Vec::with_capacity(blocks.len());
        let mut dressed = Vec::with_capacity(model.len());
        let mut min_overlap = f64::INFINITY;
        for block in blocks {
            let m = block.len();
            // proj[b][j] = <E_j|b>
            let proj: Vec<Vec<c64>> = block.iter().map(|b| eig.to_eigenbasis(b)).collect::<Result<_>>()?;
            let mut weights: Vec<(usize, f64)> = (0..eig.dim())
                .filter(|&j| !taken[j])
                .map(|j| (j, proj.iter().map(|row| row[j].norm_sqr()).sum()))
                .collect();
            weights.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
            let mut sel: Vec<usize> = weights.iter().take(m).map(|w| w.0).collect();
            if sel.len() < m {
                return Err(Error::Range("more model states than dressed levels".into()));
            }
            sel.sort_unstable();
            for &j in &sel {
                taken[j] = true;
            }

            let c = Mat::<c64>::from_fn(m, m, |r, col| proj[col][sel[r]]);
            let s = c.adjoint() * &c;
            let evd = s
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::Convergence(format!("overlap eigensolve failed: {e:?}")))?;
            let lam: Vec<f64> = (0..m).map(|i| evd.S().column_vector()[i].re).collect();
            let lmin = lam.iter().copied().fold(f64::INFINITY, f64::min);
            min_overlap = min_overlap.min(lmin);
            if lmin < MIN_OVERLAP_EIGENVALUE {
                return Err(Error::Convergence(format!(
                    "dressed frame is ill-conditioned: overlap eigenvalue {lmin:.3e} on levels {sel:?}"
                )));
            }
            let u = evd.U();
            let inv_sqrt =
                Mat::<c64>::from_fn(m, m, |i, j| (0..m).map(|k| u[(i, k)] * u[(j, k)].conj() / lam[k].sqrt()).sum());
            let coeff = &c * &inv_sqrt;
            for col in 0..m {
                let mut amps = vec![c64::new(0.0, 0.0); eig.dim()];
                for (r, &j) in sel.iter().enumerate() {
                    let w = coeff[(r, col)];
                    let v = eig.eigenvectors().col(j);
                    for (a, x) in amps.iter_mut().zip(v.iter()) {
                        *a += *x * w;
                    }
                }
                dressed.push(QuantumState::from_amplitudes(&space, amps)?);
            }
            levels.push(sel);
        }
        Ok(Self { space, levels, model, dressed, min_overlap })
    }

    /// Frame for the ground state and the one-quantum manifold (one photon
    /// with both qubits down, or empty cavities with both qubits up).
    pub fn one_quantum(eig: &EigenDecomposition) -> Result<Self> {
        let space = eig.space().clone();
        let vacuum = QuantumState::basis(&space, 0)?;
        Self::new(eig, &[vec![vacuum], one_quantum_states(&space)?])
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    /// Selected eigenlevel indices, per block.
    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn model_states(&self) -> &[QuantumState] {
        &self.model
    }

    pub fn dressed_states(&self) -> &[QuantumState] {
        &self.dressed
    }

    pub fn min_overlap_eigenvalue(&self) -> f64 {
        self.min_overlap
    }

    /// Dressed counterpart of a state lying in the span of the model states.
    pub fn dress(&self, psi: &QuantumState) -> Result<QuantumState> {
        let x: Vec<c64> = self.model.iter().map(|b| overlap(b, psi)).collect::<Result<_>>()?;
        let captured: f64 = x.iter().map(|c| c.norm_sqr()).sum();
        if (psi.norm_sqr() - captured).abs() > 1e-9 {
            return Err(Error::Contract(format!(
                "state has weight {:.3e} outside the model manifold",
                psi.norm_sqr() - captured
            )));
        }
        let terms: Vec<(c64, &QuantumState)> = x.iter().copied().zip(&self.dressed).collect();
        QuantumState::superpose(&terms)
    }
}
