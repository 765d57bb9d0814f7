//! Level sweeps over the qubit frequency, avoided-crossing location and
//! effective coupling extraction, state identification and truncation checks.

mod convergence;
mod dressed;
mod gap;
mod sweep;

pub use convergence::{converge_truncation, convergence_report, AutoTruncation, ConvergenceReport, ConvergenceRow};
pub use dressed::DressedFrame;
pub use gap::{
    classify_crossing, classify_crossing_with, find_min_gap, find_min_gap_with, gap_at, AvoidedCrossing, BranchLabels,
    CrossingKind, GapSearch, DEFAULT_CROSSING_THRESHOLD,
};
pub use sweep::{dominant_labels, linspace, sweep_levels, sweep_levels_with, DominantLabel, SweepResult};

use crate::error::Result;
use crate::fock::QuantumState;

/// Candidates ranked by |<candidate|vec>|^2, largest first.
pub fn identify_state(vec: &QuantumState, candidates: &[(String, QuantumState)]) -> Result<Vec<(String, f64)>> {
    let mut out: Vec<(String, f64)> =
        candidates.iter().map(|(label, c)| Ok((label.clone(), vec.probability_in(c)?))).collect::<Result<_>>()?;
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(out)
}
