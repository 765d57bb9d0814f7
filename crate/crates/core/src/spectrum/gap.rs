use rayon::prelude::*;
use serde::Serialize;

use super::sweep::{dominant_labels, linspace, DominantLabel};
use crate::error::{Error, Result};
use crate::fock::{eig_hermitian, eigenvalues_hermitian};
use crate::model::{build_hamiltonian, Basis, SystemParams};

pub const DEFAULT_CROSSING_THRESHOLD: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSearch {
    pub basis: Basis,
    pub coarse_points: usize,
    /// Final bracket width on omega_q.
    pub tolerance: f64,
}

impl Default for GapSearch {
    fn default() -> Self {
        Self { basis: Basis::Supermode, coarse_points: 201, tolerance: 1e-6 }
    }
}

/// Dominant labels of the (lower, upper) levels at one edge of the bracket.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchLabels {
    pub omega_q: f64,
    pub lower: DominantLabel,
    pub upper: DominantLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvoidedCrossing {
    pub omega_q_star: f64,
    pub gap_min: f64,
    pub omega_eff: f64,
    pub level_pair: (usize, usize),
    pub branch_labels: [BranchLabels; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    Crossing,
    Avoided,
}

/// w_j - w_i at qubit frequency `omega_q`.
pub fn gap_at(p: &SystemParams, pair: (usize, usize), omega_q: f64, basis: Basis) -> Result<f64> {
    let h = build_hamiltonian(&p.clone().with_qubit_frequency(omega_q), basis)?;
    if pair.1 >= h.dim() {
        return Err(Error::Range(format!("level {} of dim {}", pair.1, h.dim())));
    }
    let e = eigenvalues_hermitian(&h)?;
    Ok(e[pair.1] - e[pair.0])
}

pub fn find_min_gap(p: &SystemParams, pair: (usize, usize), bracket: (f64, f64)) -> Result<AvoidedCrossing> {
    find_min_gap_with(p, pair, bracket, &GapSearch::default())
}

/// Coarse scan of the bracket, then golden-section refinement around the
/// single interior minimum of the gap between levels `pair`.
pub fn find_min_gap_with(
    p: &SystemParams,
    pair: (usize, usize),
    bracket: (f64, f64),
    search: &GapSearch,
) -> Result<AvoidedCrossing> {
    p.validate()?;
    let (lo, hi) = bracket;
    if !(pair.0 < pair.1) {
        return Err(Error::Config(format!("level pair {pair:?} must satisfy i < j")));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Bracketing(format!("empty bracket ({lo}, {hi})")));
    }
    if search.coarse_points < 3 {
        return Err(Error::Config("coarse scan needs at least 3 points".into()));
    }
    let grid = linspace(lo, hi, search.coarse_points);
    let gaps: Vec<f64> = grid.par_iter().map(|&w| gap_at(p, pair, w, search.basis)).collect::<Result<_>>()?;
    let minima: Vec<usize> = (1..grid.len() - 1).filter(|&k| gaps[k] < gaps[k - 1] && gaps[k] <= gaps[k + 1]).collect();
    let k = match minima.as_slice() {
        [k] => *k,
        [] => {
            return Err(Error::Bracketing(format!(
                "no interior minimum of the ({}, {}) gap in [{lo}, {hi}]",
                pair.0, pair.1
            )))
        }
        many => {
            let at: Vec<String> = many.iter().map(|&k| format!("{:.6}", grid[k])).collect();
            return Err(Error::Bracketing(format!(
                "{} local minima of the ({}, {}) gap in [{lo}, {hi}] near {}",
                many.len(),
                pair.0,
                pair.1,
                at.join(", ")
            )));
        }
    };
    let f = |w: f64| gap_at(p, pair, w, search.basis);
    let (w_star, gap) = golden_section(f, grid[k - 1], grid[k + 1], (grid[k], gaps[k]), search.tolerance)?;

    let labels_at = |w: f64| -> Result<BranchLabels> {
        let h = build_hamiltonian(&p.clone().with_qubit_frequency(w), search.basis)?;
        let eig = eig_hermitian(&h)?;
        let mut d = dominant_labels(&eig, pair.1 + 1);
        let upper = d.swap_remove(pair.1);
        let lower = d.swap_remove(pair.0);
        Ok(BranchLabels { omega_q: w, lower, upper })
    };
    let gap = gap.max(0.0);
    Ok(AvoidedCrossing {
        omega_q_star: w_star,
        gap_min: gap,
        omega_eff: gap / 2.0,
        level_pair: pair,
        branch_labels: [labels_at(lo)?, labels_at(hi)?],
    })
}

/// Minimize `f` on [a, b] to a bracket width of `tol`; `best` is a known
/// sample used if it beats every refined point.
pub(crate) fn golden_section(
    f: impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    best: (f64, f64),
    tol: f64,
) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = best;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    for cand in [(c, fc), (d, fd)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    Ok(best)
}

pub fn classify_crossing(
    p: &SystemParams,
    pair: (usize, usize),
    bracket: (f64, f64),
    threshold: f64,
) -> Result<CrossingKind> {
    classify_crossing_with(p, pair, bracket, threshold, &GapSearch::default())
}

pub fn classify_crossing_with(
    p: &SystemParams,
    pair: (usize, usize),
    bracket: (f64, f64),
    threshold: f64,
    search: &GapSearch,
) -> Result<CrossingKind> {
    let ac = find_min_gap_with(p, pair, bracket, search)?;
    Ok(if ac.gap_min < threshold { CrossingKind::Crossing } else { CrossingKind::Avoided })
}
