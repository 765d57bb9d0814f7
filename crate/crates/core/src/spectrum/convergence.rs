use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{eigenvalues_hermitian, DEFAULT_DIM_GUARD};
use crate::model::{build_hamiltonian, Basis, SystemParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_max: usize,
    pub eigenvalues: Vec<f64>,
    /// |lambda_i(n_max) - lambda_i(previous n_max)|, absent on the first row.
    pub drift: Option<Vec<f64>>,
}

impl ConvergenceRow {
    pub fn max_drift(&self) -> Option<f64> {
        self.drift.as_ref().map(|d| d.iter().copied().fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub basis: Basis,
    pub n_levels: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn last_drift(&self) -> Option<f64> {
        self.rows.last().and_then(ConvergenceRow::max_drift)
    }

    /// Drift series of one tracked level along the ladder.
    pub fn level_drift(&self, level: usize) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.drift.as_ref().map(|d| d[level])).collect()
    }
}

fn lowest(p: &SystemParams, n_max: usize, n_levels: usize, basis: Basis) -> Result<Vec<f64>> {
    let h = build_hamiltonian(&p.clone().with_n_max(n_max), basis)?;
    if n_levels > h.dim() {
        return Err(Error::Range(format!("{n_levels} levels requested at n_max {n_max} (dim {})", h.dim())));
    }
    let mut e = eigenvalues_hermitian(&h)?;
    e.truncate(n_levels);
    Ok(e)
}

/// Track the lowest `n_levels` eigenvalues along an ascending truncation ladder.
pub fn convergence_report(
    p: &SystemParams,
    ladder: &[usize],
    n_levels: usize,
    basis: Basis,
) -> Result<ConvergenceReport> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("truncation ladder must be non-empty and strictly ascending".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let eigenvalues = lowest(p, n, n_levels, basis)?;
        let drift =
            rows.last().map(|prev| prev.eigenvalues.iter().zip(&eigenvalues).map(|(a, b)| (a - b).abs()).collect());
        rows.push(ConvergenceRow { n_max: n, eigenvalues, drift });
    }
    Ok(ConvergenceReport { basis, n_levels, rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutoTruncation {
    pub tolerance: f64,
    pub start: usize,
    pub step: usize,
    /// Largest total dimension the search may reach.
    pub dim_guard: usize,
}

impl Default for AutoTruncation {
    fn default() -> Self {
        Self { tolerance: 1e-8, start: 4, step: 2, dim_guard: DEFAULT_DIM_GUARD }
    }
}

/// Raise n_max from `start` in steps of `step` until the tracked levels move
/// by less than `tolerance`; returns the first n_max meeting that bound.
pub fn converge_truncation(
    p: &SystemParams,
    n_levels: usize,
    basis: Basis,
    auto: &AutoTruncation,
) -> Result<(usize, ConvergenceReport)> {
    if auto.step == 0 || auto.start == 0 {
        return Err(Error::Config("auto truncation needs start >= 1 and step >= 1".into()));
    }
    let dim_of = |n: usize| (n + 1).checked_pow(p.n_cavities as u32).map(|d| d * 4);
    let mut report = ConvergenceReport { basis, n_levels, rows: Vec::new() };
    let mut n = auto.start;
    loop {
        if dim_of(n).map_or(true, |d| d > auto.dim_guard) {
            return Err(Error::Convergence(format!(
                "levels still drift by {:.3e} (> {:.1e}) when n_max = {} reaches the dimension guard {}",
                report.last_drift().unwrap_or(f64::NAN),
                auto.tolerance,
                n - auto.step,
                auto.dim_guard
            )));
        }
        let eigenvalues = lowest(p, n, n_levels, basis)?;
        let drift: Option<Vec<f64>> = report
            .rows
            .last()
            .map(|prev| prev.eigenvalues.iter().zip(&eigenvalues).map(|(a, b)| (a - b).abs()).collect());
        report.rows.push(ConvergenceRow { n_max: n, eigenvalues, drift });
        if report.last_drift().is_some_and(|d| d < auto.tolerance) {
            return Ok((n, report));
        }
        n += auto.step;
    }
}
