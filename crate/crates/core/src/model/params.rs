use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldIssue, Result};

pub const DEFAULT_N_MAX: usize = 6;

/// Physical parameters of a two- or three-cavity array with two qubits.
/// Frequencies and rates are in units of the end-cavity frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub n_cavities: usize,
    /// Frequency of the end cavities.
    pub omega_c: f64,
    /// Detuning of the central cavity (three-cavity arrays only).
    pub delta: f64,
    pub omega_q: [f64; 2],
    /// Nearest-neighbour hopping rate J.
    pub hopping: f64,
    /// Coupling magnitude |g|.
    pub g_abs: f64,
    /// Coupling phases, each 0 or pi.
    pub phases: [f64; 2],
    /// Mixing angle between transverse and longitudinal coupling.
    pub theta: f64,
    pub n_max: usize,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::two_cavity()
    }
}

impl SystemParams {
    pub fn two_cavity() -> Self {
        Self {
            n_cavities: 2,
            omega_c: 1.0,
            delta: 0.0,
            omega_q: [0.5, 0.5],
            hopping: 0.05,
            g_abs: 0.3,
            phases: [0.0, PI],
            theta: PI / 6.0,
            n_max: DEFAULT_N_MAX,
        }
    }

    pub fn three_cavity(delta: f64) -> Self {
        Self { n_cavities: 3, delta, ..Self::two_cavity() }
    }

    pub fn with_qubit_frequency(mut self, omega_q: f64) -> Self {
        self.omega_q = [omega_q, omega_q];
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn with_phases(mut self, phases: [f64; 2]) -> Self {
        self.phases = phases;
        self
    }

    pub fn with_coupling(mut self, g_abs: f64) -> Self {
        self.g_abs = g_abs;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    /// Bare cavity frequencies, left to right.
    pub fn cavity_frequencies(&self) -> Vec<f64> {
        match self.n_cavities {
            3 => vec![self.omega_c, self.omega_c + self.delta, self.omega_c],
            n => vec![self.omega_c; n],
        }
    }

    /// Bare cavity each qubit couples to (qubits sit in the end cavities).
    pub fn qubit_cavity(&self, qubit: usize) -> usize {
        if qubit == 0 {
            0
        } else {
            self.n_cavities - 1
        }
    }

    /// cos(phi_q), i.e. +1 or -1.
    pub fn coupling_sign(&self, qubit: usize) -> f64 {
        phase_sign(self.phases[qubit]).unwrap_or(f64::NAN)
    }

    /// Every problem with the record, with field paths relative to `prefix`.
    pub fn issues(&self, prefix: &str) -> Vec<FieldIssue> {
        let path = |f: &str| if prefix.is_empty() { f.to_string() } else { format!("{prefix}.{f}") };
        let mut out = Vec::new();
        if !(self.n_cavities == 2 || self.n_cavities == 3) {
            out.push(FieldIssue::new(path("n_cavities"), format!("must be 2 or 3, got {}", self.n_cavities)));
        }
        let finite = [
            ("omega_c", self.omega_c),
            ("delta", self.delta),
            ("omega_q[0]", self.omega_q[0]),
            ("omega_q[1]", self.omega_q[1]),
            ("J", self.hopping),
            ("g", self.g_abs),
            ("theta", self.theta),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                out.push(FieldIssue::new(path(name), "must be finite"));
            }
        }
        if self.omega_c <= 0.0 {
            out.push(FieldIssue::new(path("omega_c"), format!("must be > 0, got {}", self.omega_c)));
        }
        if self.hopping <= 0.0 {
            out.push(FieldIssue::new(path("J"), format!("must be > 0, got {}", self.hopping)));
        }
        if self.g_abs < 0.0 {
            out.push(FieldIssue::new(path("g"), format!("must be >= 0, got {}", self.g_abs)));
        }
        if self.omega_q.iter().any(|&w| w < 0.0) {
            out.push(FieldIssue::new(path("omega_q"), "qubit frequencies must be >= 0"));
        }
        if self.n_max < 1 {
            out.push(FieldIssue::new(path("n_max"), "must be >= 1"));
        }
        if self.n_cavities == 2 && self.delta != 0.0 {
            out.push(FieldIssue::new(path("delta"), "central detuning requires n_cavities = 3"));
        }
        for (k, &phi) in self.phases.iter().enumerate() {
            if phase_sign(phi).is_none() {
                out.push(FieldIssue::new(
                    path(&format!("phases[{k}]")),
                    format!("unsupported phase {phi}; only 0 and pi are allowed"),
                ));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let issues = self.issues("system");
        if let Some(bad_phase) = issues.iter().find(|i| i.path.contains("phases")) {
            return Err(Error::unsupported(bad_phase.path.clone(), bad_phase.message.clone()));
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(issues))
        }
    }
}

/// Accepts phases congruent to 0 or pi (within 1e-9, modulo 2 pi).
pub fn phase_sign(phi: f64) -> Option<f64> {
    if !phi.is_finite() {
        return None;
    }
    let r = phi.rem_euclid(2.0 * PI);
    let tol = 1e-9;
    if r < tol || (2.0 * PI - r) < tol {
        Some(1.0)
    } else if (r - PI).abs() < tol {
        Some(-1.0)
    } else {
        None
    }
}
