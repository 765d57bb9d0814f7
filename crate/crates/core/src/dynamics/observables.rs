use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{HilbertSpace, ModeKind, QuantumState};

/// Observable evaluated along a trajectory. Projector targets are already
/// resolved to states; label parsing happens in the scenario layer.
#[derive(Debug, Clone)]
pub enum ObservableSpec {
    /// |<k|psi>|^2
    StateProjector { name: String, state: QuantumState },
    /// Both qubits excited, any photon content.
    QubitJointExcited { name: String },
    /// <a^dag a> of one cavity mode.
    PhotonNumber { name: String, mode: usize },
}

impl ObservableSpec {
    pub fn projector(name: impl Into<String>, state: QuantumState) -> Self {
        Self::StateProjector { name: name.into(), state }
    }

    pub fn joint_excited(name: impl Into<String>) -> Self {
        Self::QubitJointExcited { name: name.into() }
    }

    pub fn photon_number(name: impl Into<String>, mode: usize) -> Self {
        Self::PhotonNumber { name: name.into(), mode }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::StateProjector { name, .. } | Self::QubitJointExcited { name } | Self::PhotonNumber { name, .. } => {
                name
            }
        }
    }

    pub fn is_probability(&self) -> bool {
        !matches!(self, Self::PhotonNumber { .. })
    }

    /// Weights `d_i` such that the observable is `sum_i d_i |psi_i|^2`, for
    /// operators diagonal in the product basis.
    pub(crate) fn diagonal(&self, space: &HilbertSpace) -> Result<Option<Vec<f64>>> {
        match self {
            Self::StateProjector { state, .. } => {
                crate::fock::overlap(state, state)?;
                Ok(None)
            }
            Self::QubitJointExcited { .. } => {
                let qubits: Vec<usize> = space.qubit_modes().collect();
                if qubits.is_empty() {
                    return Err(Error::Type("space has no qubits".into()));
                }
                Ok(Some(
                    (0..space.total_dim())
                        .map(|i| {
                            let occ = space.occupations(i);
                            if qubits.iter().all(|&q| occ[q] == 1) {
                                1.0
                            } else {
                                0.0
                            }
                        })
                        .collect(),
                ))
            }
            Self::PhotonNumber { mode, .. } => {
                let spec = space.mode(*mode)?;
                if spec.kind != ModeKind::Cavity {
                    return Err(Error::Type(format!("mode {mode} ('{}') is not a cavity", spec.label)));
                }
                let stride = space.stride(*mode);
                Ok(Some((0..space.total_dim()).map(|i| ((i / stride) % spec.dim) as f64).collect()))
            }
        }
    }
}

pub fn occupation_probability(psi: &QuantumState, spec: &ObservableSpec) -> Result<f64> {
    match spec {
        ObservableSpec::StateProjector { state, .. } => psi.probability_in(state),
        _ => {
            let d = spec.diagonal(psi.space())?.expect("diagonal observable");
            Ok(psi.amplitudes().iter().zip(&d).map(|(a, w)| a.norm_sqr() * w).sum())
        }
    }
}

/// One named output column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
    pub probability: bool,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub series: Vec<Series>,
    pub final_state: QuantumState,
    /// max_t | ||psi(t)|| - 1 |
    pub norm_drift: f64,
    /// Integration step, for driven runs.
    pub dt: Option<f64>,
    /// Number of eigenlevels in the stepped subspace, for driven runs.
    pub retained_levels: Option<usize>,
}

impl Trajectory {
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|s| s.name == name).map(|s| s.values.as_slice())
    }

    /// (time, value) at the maximum of a series.
    pub fn max_of(&self, name: &str) -> Option<(f64, f64)> {
        let v = self.get(name)?;
        let (k, m) = v.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (k, &x)| if x > b.1 { (k, x) } else { b });
        Some((self.times[k], m))
    }

    /// Value of a series at the sample nearest to `t`.
    pub fn at(&self, name: &str, t: f64) -> Option<f64> {
        let v = self.get(name)?;
        let k = self.times.iter().enumerate().min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))?.0;
        Some(v[k])
    }

    /// Trapezoidal time average of a series.
    pub fn time_average(&self, name: &str) -> Option<f64> {
        let v = self.get(name)?;
        let t = &self.times;
        if t.len() < 2 {
            return v.first().copied();
        }
        let area: f64 = (1..t.len()).map(|k| 0.5 * (v[k] + v[k - 1]) * (t[k] - t[k - 1])).sum();
        Some(area / (t[t.len() - 1] - t[0]))
    }
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Config("time grid is empty".into()));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config("time grid must be finite and non-decreasing".into()));
    }
    Ok(())
}

pub(crate) fn check_normalized(psi: &QuantumState) -> Result<()> {
    if (psi.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Contract(format!("initial state has norm {}", psi.norm())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_space, ModeSpec};

    #[test]
    fn diagonal_observables_on_product_states() {
        let s =
            make_space(vec![ModeSpec::cavity("c", 2).unwrap(), ModeSpec::qubit("q1"), ModeSpec::qubit("q2")]).unwrap();
        let ee = QuantumState::from_occupations(&s, &[0, 1, 1]).unwrap();
        let two = QuantumState::from_occupations(&s, &[2, 1, 0]).unwrap();
        let joint = ObservableSpec::joint_excited("p_ee");
        let n = ObservableSpec::photon_number("n", 0);
        assert_eq!(occupation_probability(&ee, &joint).unwrap(), 1.0);
        assert_eq!(occupation_probability(&two, &joint).unwrap(), 0.0);
        assert_eq!(occupation_probability(&two, &n).unwrap(), 2.0);
        assert!(occupation_probability(&two, &ObservableSpec::photon_number("x", 1)).is_err());
        assert!(!n.is_probability());
    }

    #[test]
    fn trajectory_helpers() {
        let s = make_space(vec![ModeSpec::qubit("q")]).unwrap();
        let t = Trajectory {
            times: vec![0.0, 1.0, 2.0],
            series: vec![Series { name: "p".into(), values: vec![0.0, 1.0, 0.0], probability: true }],
            final_state: QuantumState::basis(&s, 0).unwrap(),
            norm_drift: 0.0,
            dt: None,
            retained_levels: None,
        };
        assert_eq!(t.max_of("p"), Some((1.0, 1.0)));
        assert_eq!(t.time_average("p"), Some(0.5));
        assert_eq!(t.at("p", 0.9), Some(1.0));
        assert!(t.get("q").is_none());
    }
}
