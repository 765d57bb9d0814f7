use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{eig_hermitian, eigenvalues_hermitian, EigenDecomposition};
use crate::model::{build_hamiltonian, Basis, SystemParams};

/// Basis label carrying the largest weight in an eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominantLabel {
    pub label: String,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub basis: Basis,
    pub omega_q_grid: Vec<f64>,
    /// `relative_levels[point][level]` = w_i - w_0.
    pub relative_levels: Vec<Vec<f64>>,
    pub dominant_labels: Vec<Vec<DominantLabel>>,
}

impl SweepResult {
    pub fn n_levels(&self) -> usize {
        self.relative_levels.first().map_or(0, Vec::len)
    }

    /// One level across the whole grid.
    pub fn branch(&self, level: usize) -> Vec<f64> {
        self.relative_levels.iter().map(|row| row[level]).collect()
    }
}

pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let step = (max - min) / (points - 1) as f64;
    (0..points).map(|k| if k + 1 == points { max } else { min + step * k as f64 }).collect()
}

pub fn dominant_labels(eig: &EigenDecomposition, n_levels: usize) -> Vec<DominantLabel> {
    let v = eig.eigenvectors();
    (0..n_levels)
        .map(|j| {
            let (idx, w) = v.col(j).iter().map(|a| a.norm_sqr()).enumerate().fold((0, -1.0), |best, (i, w)| {
                if w > best.1 {
                    (i, w)
                } else {
                    best
                }
            });
            DominantLabel { label: eig.space().format_index(idx), weight: w }
        })
        .collect()
}

/// Diagonalize at every grid point (in parallel) and record the lowest
/// `n_levels` energies relative to the ground level, ordered by energy.
pub fn sweep_levels(p: &SystemParams, grid: &[f64], n_levels: usize, basis: Basis) -> Result<SweepResult> {
    sweep_levels_with(p, grid, n_levels, basis, true)
}

/// As [`sweep_levels`]; with `labels = false` only eigenvalues are computed
/// and `dominant_labels` rows are empty.
pub fn sweep_levels_with(
    p: &SystemParams,
    grid: &[f64],
    n_levels: usize,
    basis: Basis,
    labels: bool,
) -> Result<SweepResult> {
    p.validate()?;
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("sweep grid must be non-empty and strictly ascending".into()));
    }
    if n_levels < 2 {
        return Err(Error::Config(format!("n_levels must be >= 2, got {n_levels}")));
    }
    let rows: Vec<(Vec<f64>, Vec<DominantLabel>)> = grid
        .par_iter()
        .map(|&w| {
            let h = build_hamiltonian(&p.clone().with_qubit_frequency(w), basis)?;
            if n_levels > h.dim() {
                return Err(Error::Range(format!("{n_levels} levels requested, dim {}", h.dim())));
            }
            if !labels {
                let e = eigenvalues_hermitian(&h)?;
                return Ok((e.iter().take(n_levels).map(|x| x - e[0]).collect(), Vec::new()));
            }
            let eig = eig_hermitian(&h)?;
            Ok((eig.relative_levels(n_levels), dominant_labels(&eig, n_levels)))
        })
        .collect::<Result<_>>()?;
    let (relative_levels, dominant_labels) = rows.into_iter().unzip();
    Ok(SweepResult { basis, omega_q_grid: grid.to_vec(), relative_levels, dominant_labels })
}
