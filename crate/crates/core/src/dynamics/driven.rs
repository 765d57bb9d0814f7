use std::f64::consts::PI;

use faer::{c64, Mat};

use super::observables::{check_normalized, check_times, ObservableSpec, Series, Trajectory};
use crate::error::{Error, Result};
use crate::fock::{eig_hermitian, EigenDecomposition, Operator, QuantumState};
use crate::model::{build_hamiltonian, drive_operator, Basis, PulseSpec, SystemParams};

/// Norm drift above which a run with an explicit step is rejected.
pub const STEP_FAILURE_DRIFT: f64 = 1e-5;
/// Norm drift targeted when the step is chosen automatically.
pub const TARGET_DRIFT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenOptions {
    /// Fixed integration step. When `None` the step is derived from the
    /// retained spectrum and halved until the norm drift meets `TARGET_DRIFT`.
    pub dt: Option<f64>,
    /// Only eigenlevels with w_i0 <= cutoff are coupled by the drive; the
    /// rest evolve freely.
    pub level_cutoff: Option<f64>,
    pub basis: Basis,
    /// The drive is integrated over t0 +- window * tau and treated as zero outside.
    pub window: f64,
}

impl Default for DrivenOptions {
    fn default() -> Self {
        Self { dt: None, level_cutoff: None, basis: Basis::Bare, window: 9.0 }
    }
}

/// Integrate i d/dt psi = [H + E(t) cos(w_d t) X_d] psi with `psi0` given at t = 0.
pub fn evolve_driven(
    p: &SystemParams,
    pulse: &PulseSpec,
    psi0: &QuantumState,
    times: &[f64],
    obs: &[ObservableSpec],
    opts: &DrivenOptions,
) -> Result<Trajectory> {
    let eig = eig_hermitian(&build_hamiltonian(p, opts.basis)?)?;
    let drive = drive_operator(p, opts.basis)?;
    evolve_driven_eig(&eig, &drive, pulse, psi0, times, obs, opts)
}

/// Drive matrix elements <E_i|X|E_j> among the given levels.
pub fn drive_matrix(eig: &EigenDecomposition, drive: &Operator, levels: &[usize]) -> Mat<c64> {
    let v = eig.eigenvectors();
    let vr = Mat::<c64>::from_fn(eig.dim(), levels.len(), |i, k| v[(i, levels[k])]);
    let xv = drive.matrix() * &vr;
    vr.adjoint() * &xv
}

pub fn evolve_driven_eig(
    eig: &EigenDecomposition,
    drive: &Operator,
    pulse: &PulseSpec,
    psi0: &QuantumState,
    times: &[f64],
    obs: &[ObservableSpec],
    opts: &DrivenOptions,
) -> Result<Trajectory> {
    pulse.validate()?;
    let omega_d = pulse.carrier()?;
    check_times(times)?;
    check_normalized(psi0)?;
    if times[0] < 0.0 {
        return Err(Error::Config("driven time grid starts at t = 0 or later".into()));
    }
    drive.check_space(eig.space())?;

    let lam = eig.eigenvalues();
    let retained: Vec<usize> = match opts.level_cutoff {
        Some(cut) => (0..eig.dim()).filter(|&j| lam[j] - lam[0] <= cut).collect(),
        None => (0..eig.dim()).collect(),
    };
    if retained.is_empty() {
        return Err(Error::Config("level cutoff leaves no retained levels".into()));
    }
    let d = drive_matrix(eig, drive, &retained);
    let mu: Vec<f64> = retained.iter().map(|&j| lam[j] - lam[0]).collect();
    let fastest = mu.iter().copied().fold(omega_d, f64::max).max(f64::MIN_POSITIVE);
    let auto = opts.dt.is_none();
    let mut dt = opts.dt.unwrap_or(2.0 * PI / (200.0 * fastest));
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!("integration step must be positive, got {dt}")));
    }

    let setup = Setup::new(eig, &retained, &d, &mu, psi0, obs)?;
    loop {
        let traj = setup.run(eig, pulse, omega_d, times, obs, dt, opts.window)?;
        if traj.norm_drift <= TARGET_DRIFT || (!auto && traj.norm_drift <= STEP_FAILURE_DRIFT) {
            return Ok(traj);
        }
        if !auto || dt < 1e-6 {
            return Err(Error::StepSize { drift: traj.norm_drift, limit: STEP_FAILURE_DRIFT, dt });
        }
        dt /= 2.0;
    }
}

struct Setup {
    retained: Vec<usize>,
    /// Row-major drive matrix over the retained levels.
    d: Vec<c64>,
    mu: Vec<f64>,
    c0: Vec<c64>,
    /// Projector weights <k|E_j>^* per observable.
    proj: Vec<Option<Vec<c64>>>,
    diag: Vec<Option<Vec<f64>>>,
}

impl Setup {
    fn new(
        eig: &EigenDecomposition,
        retained: &[usize],
        d: &Mat<c64>,
        mu: &[f64],
        psi0: &QuantumState,
        obs: &[ObservableSpec],
    ) -> Result<Self> {
        let r = retained.len();
        let mut proj = Vec::with_capacity(obs.len());
        let mut diag = Vec::with_capacity(obs.len());
        for o in obs {
            diag.push(o.diagonal(eig.space())?);
            proj.push(match o {
                ObservableSpec::StateProjector { state, .. } => {
                    Some(eig.to_eigenbasis(state)?.iter().map(|u| u.conj()).collect())
                }
                _ => None,
            });
        }
        Ok(Self {
            retained: retained.to_vec(),
            d: (0..r * r).map(|k| d[(k / r, k % r)]).collect(),
            mu: mu.to_vec(),
            c0: eig.to_eigenbasis(psi0)?,
            proj,
            diag,
        })
    }

    /// db/dt = -i f(t) e^{i mu t} D e^{-i mu t} b
    fn derivative(&self, pulse: &PulseSpec, omega_d: f64, t: f64, b: &[c64], tmp: &mut [c64], out: &mut [c64]) {
        let f = pulse.envelope(t) * (omega_d * t).cos();
        let r = b.len();
        if f == 0.0 {
            out.iter_mut().for_each(|o| *o = c64::new(0.0, 0.0));
            return;
        }
        for k in 0..r {
            tmp[k] = b[k] * c64::cis(-self.mu[k] * t);
        }
        for j in 0..r {
            let row = &self.d[j * r..(j + 1) * r];
            let y: c64 = row.iter().zip(tmp.iter()).map(|(a, x)| a * x).sum();
            out[j] = c64::new(0.0, -f) * c64::cis(self.mu[j] * t) * y;
        }
    }

    fn rk4(&self, pulse: &PulseSpec, omega_d: f64, t0: f64, t1: f64, dt: f64, b: &mut [c64]) {
        let n = ((t1 - t0) / dt).ceil().max(1.0) as usize;
        let h = (t1 - t0) / n as f64;
        let r = b.len();
        let z = c64::new(0.0, 0.0);
        let (mut k1, mut k2, mut k3, mut k4) = (vec![z; r], vec![z; r], vec![z; r], vec![z; r]);
        let (mut y, mut tmp) = (vec![z; r], vec![z; r]);
        for s in 0..n {
            let t = t0 + h * s as f64;
            self.derivative(pulse, omega_d, t, b, &mut tmp, &mut k1);
            for i in 0..r {
                y[i] = b[i] + k1[i] * (h / 2.0);
            }
            self.derivative(pulse, omega_d, t + h / 2.0, &y, &mut tmp, &mut k2);
            for i in 0..r {
                y[i] = b[i] + k2[i] * (h / 2.0);
            }
            self.derivative(pulse, omega_d, t + h / 2.0, &y, &mut tmp, &mut k3);
            for i in 0..r {
                y[i] = b[i] + k3[i] * h;
            }
            self.derivative(pulse, omega_d, t + h, &y, &mut tmp, &mut k4);
            for i in 0..r {
                b[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn run(
        &self,
        eig: &EigenDecomposition,
        pulse: &PulseSpec,
        omega_d: f64,
        times: &[f64],
        obs: &[ObservableSpec],
        dt: f64,
        window: f64,
    ) -> Result<Trajectory> {
        let lam = eig.eigenvalues();
        let (w_start, w_end) = (pulse.t0 - window * pulse.tau, pulse.t0 + window * pulse.tau);
        let mut b: Vec<c64> = self.retained.iter().map(|&j| self.c0[j]).collect();
        let mut t_cur = 0.0f64;
        let mut values = vec![Vec::with_capacity(times.len()); obs.len()];
        let mut norm_drift = 0.0f64;
        let need_full = self.diag.iter().any(Option::is_some);
        let mut a = self.c0.clone();

        for &t in times {
            let (s, e) = (t_cur.max(w_start), t.min(w_end));
            if e > s {
                self.rk4(pulse, omega_d, s, e, dt, &mut b);
            }
            t_cur = t;

            // Eigenbasis coefficients at time t.
            for (j, aj) in a.iter_mut().enumerate() {
                *aj = self.c0[j] * c64::cis(-lam[j] * t);
            }
            for (k, &j) in self.retained.iter().enumerate() {
                a[j] = b[k] * c64::cis(-lam[j] * t);
            }
            let norm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            norm_drift = norm_drift.max((norm - 1.0).abs());

            let psi_sq: Option<Vec<f64>> = if need_full {
                Some(eig.from_eigenbasis(&a)?.amplitudes().iter().map(|x| x.norm_sqr()).collect())
            } else {
                None
            };
            for (i, out) in values.iter_mut().enumerate() {
                let v = if let Some(u) = &self.proj[i] {
                    u.iter().zip(&a).map(|(x, y)| x * y).sum::<c64>().norm_sqr()
                } else {
                    let d = self.diag[i].as_ref().expect("diagonal observable");
                    psi_sq.as_ref().expect("full state").iter().zip(d).map(|(x, y)| x * y).sum()
                };
                out.push(v);
            }
        }
        Ok(Trajectory {
            times: times.to_vec(),
            series: obs
                .iter()
                .zip(values)
                .map(|(o, v)| Series { name: o.name().to_string(), values: v, probability: o.is_probability() })
                .collect(),
            final_state: eig.from_eigenbasis(&a)?,
            norm_drift,
            dt: Some(dt),
            retained_levels: Some(self.retained.len()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_free_eig;
    use crate::fock::{make_space, LocalOperator, ModeSpec, PauliAxis};

    fn two_level(omega: f64) -> (EigenDecomposition, Operator) {
        let s = make_space(vec![ModeSpec::qubit("q")]).unwrap();
        let mut h = Operator::zeros(&s);
        h.add_product(c64::new(omega, 0.0), &[(0, &LocalOperator::projector(2, 1).unwrap())]).unwrap();
        let x = Operator::embed(&s, 0, &LocalOperator::pauli(PauliAxis::X)).unwrap();
        (eig_hermitian(&h.mark_hermitian().unwrap()).unwrap(), x)
    }

    #[test]
    fn zero_amplitude_matches_free_evolution() {
        let (eig, x) = two_level(1.3);
        let s = eig.space().clone();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = QuantumState::from_amplitudes(&s, vec![c64::new(h, 0.0), c64::new(0.0, h)]).unwrap();
        let plus = QuantumState::from_amplitudes(&s, vec![c64::new(h, 0.0), c64::new(h, 0.0)]).unwrap();
        let obs = [ObservableSpec::projector("plus", plus)];
        let times: Vec<f64> = (0..50).map(|k| k as f64 * 0.37).collect();
        let pulse = PulseSpec::new(0.0, 1.3, 5.0, 1.0);
        let a = evolve_driven_eig(&eig, &x, &pulse, &psi, &times, &obs, &DrivenOptions::default()).unwrap();
        let b = evolve_free_eig(&eig, &psi, &times, &obs).unwrap();
        for (u, v) in a.series[0].values.iter().zip(&b.series[0].values) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn resonant_pi_pulse_inverts_a_two_level_system() {
        // Rotating-wave area rule: A_peak * sqrt(2 pi) tau * |x_01| / 2 = pi / 2.
        let (eig, x) = two_level(1.0);
        let s = eig.space().clone();
        let g = QuantumState::basis(&s, 0).unwrap();
        let e = QuantumState::basis(&s, 1).unwrap();
        let tau = 40.0;
        let amp = PI / ((2.0 * PI).sqrt() * tau);
        let pulse = PulseSpec::new(amp, 1.0, 8.0 * tau, tau).with_norm(crate::model::EnvelopeNorm::Peak);
        let obs = [ObservableSpec::projector("e", e)];
        let t = [0.0, 16.0 * tau];
        let traj = evolve_driven_eig(&eig, &x, &pulse, &g, &t, &obs, &DrivenOptions::default()).unwrap();
        assert!(traj.series[0].values[1] > 0.999, "{}", traj.series[0].values[1]);
        assert!(traj.norm_drift < 1e-6);
    }

    #[test]
    fn unresolved_carrier_is_rejected() {
        let (eig, x) = two_level(1.0);
        let g = QuantumState::basis(eig.space(), 0).unwrap();
        let mut pulse = PulseSpec::new(0.1, 1.0, 5.0, 1.0);
        pulse.omega_d = "mid:0,1".parse().unwrap();
        assert!(evolve_driven_eig(&eig, &x, &pulse, &g, &[0.0, 1.0], &[], &DrivenOptions::default()).is_err());
    }
}
