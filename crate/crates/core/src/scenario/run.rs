use std::f64::consts::PI;
use std::time::Instant;

use serde_json::{json, Value};

use super::config::{
    Duration, Frame, Mode, ObservableTarget, QubitFrequency, ScenarioConfig, TauSpec, Truncation, PULSE_END_WIDTHS,
    T0_WIDTHS,
};
use super::output::{Cell, Table};
use crate::dynamics::{
    drive_matrix, evolve_driven_eig, evolve_free_eig, rabi_period, DrivenOptions, ObservableSpec, Trajectory,
};
use crate::error::{Error, Result};
use crate::fock::{eig_hermitian, EigenDecomposition, QuantumState};
use crate::model::{
    bare_label_state, bare_space, build_hamiltonian, drive_operator, supermode_label_state, supermode_space,
    supermode_transform, Basis, PulseSpec, SystemParams,
};
use crate::spectrum::{
    converge_truncation, find_min_gap_with, linspace, sweep_levels_with, AutoTruncation, AvoidedCrossing, CrossingKind,
    DressedFrame, GapSearch,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Overrides `system.n_max` (including "auto").
    pub n_max: Option<usize>,
    /// Leave wall-clock time out of the metadata so reruns are byte-identical.
    pub deterministic: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    /// Per-row annotations that do not fit a numeric table (JSON output only).
    pub annotations: Option<Value>,
    pub metadata: Value,
}

/// Resolved values shared by every mode.
struct Resolved {
    params: SystemParams,
    anticrossing: Option<AvoidedCrossing>,
    meta: serde_json::Map<String, Value>,
}

pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<RunOutput> {
    let start = Instant::now();
    let mut r = resolve_system(cfg, opts)?;
    let (table, annotations) = match cfg.mode {
        Mode::SpectrumSweep => run_sweep(cfg, &mut r)?,
        Mode::GapSearch => (run_gaps(cfg, &mut r)?, None),
        Mode::FreeEvolution | Mode::DrivenEvolution => (run_dynamics(cfg, &mut r)?, None),
        Mode::SupermodeProfile => (run_profile(cfg, &r)?, None),
    };
    table.check_finite()?;

    let mut meta = serde_json::Map::new();
    meta.insert("scenario_id".into(), json!(cfg.scenario_id));
    meta.insert("description".into(), json!(cfg.description));
    meta.insert("mode".into(), json!(cfg.mode.as_str()));
    meta.insert("version".into(), json!(VERSION));
    meta.insert("columns".into(), json!(table.columns));
    meta.insert("rows".into(), json!(table.rows.len()));
    meta.insert("resolved".into(), Value::Object(r.meta));
    meta.insert("config".into(), serde_json::to_value(&cfg.echo).map_err(|e| Error::Contract(e.to_string()))?);
    if !opts.deterministic {
        meta.insert("wall_time_s".into(), json!(start.elapsed().as_secs_f64()));
    }
    Ok(RunOutput { table, annotations, metadata: Value::Object(meta) })
}

fn resolve_system(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<Resolved> {
    let mut p = cfg.params.clone();
    let mut meta = serde_json::Map::new();

    // Truncation first; the anticrossing directive is located at that truncation.
    match (opts.n_max, cfg.truncation) {
        (Some(n), _) => {
            p.n_max = n;
            meta.insert("n_max_source".into(), json!("override"));
        }
        (None, Truncation::Fixed(n)) => {
            p.n_max = n;
            meta.insert("n_max_source".into(), json!("config"));
        }
        (None, Truncation::Auto) => {
            let (probe, n_levels, basis) = match &cfg.omega_q {
                QubitFrequency::Fixed(w) => (w[0], 8, Basis::Supermode),
                QubitFrequency::Anticrossing { levels, bracket, basis, .. } => {
                    ((bracket.0 + bracket.1) / 2.0, levels.1 + 2, *basis)
                }
            };
            let n_levels = cfg.sweep.as_ref().map_or(n_levels, |s| s.n_levels.max(n_levels));
            let probe_params = p.clone().with_qubit_frequency(probe);
            let (n, report) = converge_truncation(&probe_params, n_levels, basis, &AutoTruncation::default())?;
            p.n_max = n;
            meta.insert("n_max_source".into(), json!("auto"));
            meta.insert("convergence".into(), json!({
                "omega_q": probe,
                "tolerance": AutoTruncation::default().tolerance,
                "ladder": report.rows.iter().map(|r| json!({"n_max": r.n_max, "max_drift": r.max_drift()})).collect::<Vec<_>>(),
            }));
        }
    }
    meta.insert("n_max".into(), json!(p.n_max));

    let mut anticrossing = None;
    if let QubitFrequency::Anticrossing { levels, bracket, points, basis } = &cfg.omega_q {
        let search = GapSearch { basis: *basis, coarse_points: *points, ..GapSearch::default() };
        let ac = find_min_gap_with(&p, *levels, *bracket, &search)?;
        p = p.with_qubit_frequency(ac.omega_q_star);
        meta.insert(
            "anticrossing".into(),
            json!({
                "level_pair": [ac.level_pair.0, ac.level_pair.1],
                "omega_q_star": ac.omega_q_star,
                "gap_min": ac.gap_min,
                "omega_eff": ac.omega_eff,
                "half_period": rabi_period(ac.omega_eff).ok(),
                "basis": basis,
            }),
        );
        anticrossing = Some(ac);
    } else if let QubitFrequency::Fixed(w) = cfg.omega_q {
        p.omega_q = w;
    }
    p.validate()?;
    meta.insert("system".into(), serde_json::to_value(&p).map_err(|e| Error::Contract(e.to_string()))?);
    Ok(Resolved { params: p, anticrossing, meta })
}

fn gap_record(name: &str, ac: &AvoidedCrossing, kind: CrossingKind, threshold: f64) -> Value {
    json!({
        "name": name,
        "level_pair": [ac.level_pair.0, ac.level_pair.1],
        "omega_q_star": ac.omega_q_star,
        "gap_min": ac.gap_min,
        "omega_eff": ac.omega_eff,
        "kind": kind,
        "threshold": threshold,
        "branch_labels": ac.branch_labels,
    })
}

fn gap_results(cfg: &ScenarioConfig, r: &Resolved) -> Result<Vec<(String, (f64, f64), AvoidedCrossing, CrossingKind)>> {
    cfg.gaps
        .iter()
        .map(|g| {
            let p = r.params.clone().with_phases(g.phases).with_theta(g.theta);
            let search = GapSearch { basis: g.basis, coarse_points: g.points, ..GapSearch::default() };
            let ac = find_min_gap_with(&p, g.levels, g.bracket, &search)?;
            let kind = if ac.gap_min < g.threshold { CrossingKind::Crossing } else { CrossingKind::Avoided };
            Ok((g.name.clone(), g.bracket, ac, kind))
        })
        .collect()
}

fn run_sweep(cfg: &ScenarioConfig, r: &mut Resolved) -> Result<(Table, Option<Value>)> {
    let s = cfg.sweep.as_ref().expect("validated sweep");
    let grid = linspace(s.min, s.max, s.points);
    let variants: Vec<(Option<String>, SystemParams)> = if s.variants.is_empty() {
        vec![(None, r.params.clone())]
    } else {
        s.variants
            .iter()
            .map(|(name, phases, theta)| (Some(name.clone()), r.params.clone().with_phases(*phases).with_theta(*theta)))
            .collect()
    };

    let mut columns = vec!["omega_q".to_string()];
    let mut results = Vec::with_capacity(variants.len());
    let mut labels = serde_json::Map::new();
    for (name, p) in &variants {
        let res = sweep_levels_with(p, &grid, s.n_levels, s.basis, s.labels)?;
        for i in 1..s.n_levels {
            columns.push(match name {
                Some(n) => format!("w{i}0_{n}"),
                None => format!("w{i}0"),
            });
        }
        if s.labels {
            labels.insert(
                name.clone().unwrap_or_else(|| "levels".into()),
                serde_json::to_value(&res.dominant_labels).map_err(|e| Error::Contract(e.to_string()))?,
            );
        }
        results.push(res);
    }
    let rows = grid
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let mut row = vec![Cell::Num(w)];
            for res in &results {
                row.extend(res.relative_levels[k][1..].iter().map(|&x| Cell::Num(x)));
            }
            row
        })
        .collect();

    let gaps = gap_results(cfg, r)?;
    r.meta.insert("sweep".into(), json!({
        "basis": s.basis,
        "points": s.points,
        "n_levels": s.n_levels,
        "variants": variants.iter().map(|(n, p)| json!({"name": n, "phases": p.phases, "theta": p.theta})).collect::<Vec<_>>(),
    }));
    r.meta.insert(
        "gaps".into(),
        Value::Array(gaps.iter().map(|(n, _, ac, k)| gap_record(n, ac, *k, threshold_of(cfg, n))).collect()),
    );
    let annotations = s.labels.then(|| json!({ "dominant_labels": labels }));
    Ok((Table { columns, rows }, annotations))
}

fn threshold_of(cfg: &ScenarioConfig, name: &str) -> f64 {
    cfg.gaps.iter().find(|g| g.name == name).map_or(f64::NAN, |g| g.threshold)
}

fn run_gaps(cfg: &ScenarioConfig, r: &mut Resolved) -> Result<Table> {
    let gaps = gap_results(cfg, r)?;
    let columns =
        ["name", "level_i", "level_j", "bracket_lo", "bracket_hi", "omega_q_star", "gap_min", "omega_eff", "kind"]
            .map(String::from)
            .to_vec();
    let rows = gaps
        .iter()
        .map(|(name, b, ac, kind)| {
            vec![
                Cell::Text(name.clone()),
                Cell::Int(ac.level_pair.0 as i64),
                Cell::Int(ac.level_pair.1 as i64),
                Cell::Num(b.0),
                Cell::Num(b.1),
                Cell::Num(ac.omega_q_star),
                Cell::Num(ac.gap_min),
                Cell::Num(ac.omega_eff),
                Cell::Text(match kind {
                    CrossingKind::Crossing => "crossing".into(),
                    CrossingKind::Avoided => "avoided".into(),
                }),
            ]
        })
        .collect();
    r.meta.insert(
        "gaps".into(),
        Value::Array(gaps.iter().map(|(n, _, ac, k)| gap_record(n, ac, *k, threshold_of(cfg, n))).collect()),
    );
    Ok(Table { columns, rows })
}

/// Labelled state in the bare basis, optionally replaced by its dressed counterpart.
fn prepare_state(
    p: &SystemParams,
    label: &str,
    basis: Basis,
    frame: Frame,
    dressed: Option<&DressedFrame>,
    path: &str,
) -> Result<QuantumState> {
    let bad = |e: Error| Error::Config(format!("{path}: {e}"));
    let psi = match basis {
        Basis::Bare => {
            let space = bare_space(p)?;
            let occ = space.parse_label(label).map_err(bad)?;
            bare_label_state(&space, &occ).map_err(bad)?
        }
        Basis::Supermode => {
            let occ = supermode_space(p)?.parse_label(label).map_err(bad)?;
            supermode_label_state(p, &occ).map_err(bad)?
        }
    };
    match frame {
        Frame::Bare => Ok(psi),
        Frame::Dressed => dressed.expect("dressed frame prepared").dress(&psi).map_err(bad),
    }
}

fn run_dynamics(cfg: &ScenarioConfig, r: &mut Resolved) -> Result<Table> {
    let p = &r.params;
    let init = cfg.init.as_ref().expect("validated init");
    let time = cfg.time.as_ref().expect("validated time");
    let eig = eig_hermitian(&build_hamiltonian(p, Basis::Bare)?)?;

    let wants_dressed = init.frame == Frame::Dressed
        || cfg
            .observables
            .iter()
            .any(|o| matches!(o.target, ObservableTarget::Projector { frame: Frame::Dressed, .. }));
    let dressed = if wants_dressed {
        let f = DressedFrame::one_quantum(&eig)?;
        r.meta.insert(
            "dressed_frame".into(),
            json!({
                "levels": f.levels(),
                "min_overlap_eigenvalue": f.min_overlap_eigenvalue(),
            }),
        );
        Some(f)
    } else {
        None
    };

    let psi0 = prepare_state(p, &init.label, init.basis, init.frame, dressed.as_ref(), "init.label")?;
    let space = eig.space().clone();
    let obs: Vec<ObservableSpec> = cfg
        .observables
        .iter()
        .enumerate()
        .map(|(k, o)| {
            Ok(match &o.target {
                ObservableTarget::Projector { label, basis, frame } => {
                    let path = format!("observables[{k}].label");
                    ObservableSpec::projector(
                        &o.name,
                        prepare_state(p, label, *basis, *frame, dressed.as_ref(), &path)?,
                    )
                }
                ObservableTarget::JointExcited => ObservableSpec::joint_excited(&o.name),
                ObservableTarget::PhotonNumber { mode } => {
                    let idx = space
                        .mode_by_label(mode)
                        .ok_or_else(|| Error::Config(format!("observables[{k}].mode: no mode '{mode}' in {space}")))?;
                    ObservableSpec::photon_number(&o.name, idx)
                }
            })
        })
        .collect::<Result<_>>()?;

    let half_period = r.anticrossing.as_ref().map(|ac| rabi_period(ac.omega_eff)).transpose()?;
    let span = |h: f64| -> Result<f64> {
        half_period
            .map(|t| h * t)
            .ok_or_else(|| Error::Config("time.half_periods needs a resolved anticrossing".into()))
    };

    let traj = if cfg.mode == Mode::FreeEvolution {
        let t_max = match time.duration {
            Duration::Absolute(t) => t,
            Duration::HalfPeriods(h) => span(h)?,
        };
        let times = linspace(0.0, t_max, time.samples);
        r.meta
            .insert("time".into(), json!({"t_max": t_max, "samples": time.samples, "sample_dt": times[1] - times[0]}));
        evolve_free_eig(&eig, &psi0, &times, &obs)?
    } else {
        run_driven(cfg, r, &eig, &psi0, &obs, &span)?
    };
    r.meta.insert("norm_drift".into(), json!(traj.norm_drift));
    Ok(trajectory_table(&traj))
}

fn run_driven(
    cfg: &ScenarioConfig,
    r: &mut Resolved,
    eig: &EigenDecomposition,
    psi0: &QuantumState,
    obs: &[ObservableSpec],
    span: &dyn Fn(f64) -> Result<f64>,
) -> Result<Trajectory> {
    let pc = cfg.pulse.as_ref().expect("validated pulse");
    let time = cfg.time.as_ref().expect("validated time");
    let drive = drive_operator(&r.params, Basis::Bare)?;
    let rel: Vec<f64> = eig.relative_levels(eig.dim());
    let omega_d = pc.omega_d.resolve(&rel).map_err(|e| Error::Config(format!("pulse.omega_d: {e}")))?;

    let (tau, tau_meta) = match &pc.tau {
        TauSpec::Fixed(t) => (*t, json!({"rule": "fixed"})),
        TauSpec::PiArea(levels) => {
            let mut idx = vec![0];
            idx.extend(levels);
            if let Some(&bad) = levels.iter().find(|&&l| l >= eig.dim()) {
                return Err(Error::Config(format!("pulse.tau_levels: level {bad} of dim {}", eig.dim())));
            }
            let d = drive_matrix(eig, &drive, &idx);
            let elements: Vec<f64> = (1..idx.len()).map(|k| d[(k, 0)].re).collect();
            let m = elements.iter().map(|x| x * x).sum::<f64>().sqrt();
            let tau = PulseSpec::area_tau(pc.amplitude, m, PI, pc.envelope).ok_or_else(|| {
                Error::Config("pulse.tau: pi_area needs a peak envelope, amplitude > 0 and coupled levels".into())
            })?;
            (tau, json!({"rule": "pi_area", "levels": levels, "matrix_elements": elements, "m": m}))
        }
    };
    let t0 = pc.t0.unwrap_or(T0_WIDTHS * tau);
    let pulse = PulseSpec::new(pc.amplitude, omega_d, t0, tau).with_norm(pc.envelope);
    let pulse_end = t0 + PULSE_END_WIDTHS * tau;
    let t_max = match time.duration {
        Duration::Absolute(t) => t,
        Duration::HalfPeriods(h) => pulse_end + span(h)?,
    };
    let times = linspace(0.0, t_max, time.samples);
    let opts =
        DrivenOptions { dt: time.dt, level_cutoff: pc.level_cutoff, basis: Basis::Bare, ..DrivenOptions::default() };
    let traj = evolve_driven_eig(eig, &drive, &pulse, psi0, &times, obs, &opts)?;

    let midpoint_levels: Option<Vec<f64>> = pc.omega_d.max_level().map(|m| rel[..=m].to_vec());
    let sample_dt = times[1] - times[0];
    let dt = traj.dt.unwrap_or(f64::NAN);
    r.meta.insert(
        "pulse".into(),
        json!({
            "amplitude": pc.amplitude,
            "omega_d": omega_d,
            "omega_d_directive": pc.omega_d.to_string(),
            "relative_levels": midpoint_levels,
            "tau": tau,
            "tau_source": tau_meta,
            "t0": t0,
            "t0_source": if pc.t0.is_some() { "config" } else { "default 6 tau" },
            "pulse_end": pulse_end,
            "envelope": pc.envelope,
            "peak_field": pulse.peak(),
            "area": pulse.area(),
            "level_cutoff": pc.level_cutoff,
            "retained_levels": traj.retained_levels,
        }),
    );
    r.meta.insert(
        "time".into(),
        json!({
            "t_max": t_max,
            "samples": time.samples,
            "sample_dt": sample_dt,
            "dt": dt,
            "dt_source": if time.dt.is_some() { "config" } else { "auto" },
            "stride": sample_dt / dt,
        }),
    );
    Ok(traj)
}

fn trajectory_table(traj: &Trajectory) -> Table {
    let mut columns = vec!["time".to_string()];
    columns.extend(traj.series.iter().map(|s| s.name.clone()));
    let rows = traj
        .times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut row = vec![Cell::Num(t)];
            row.extend(traj.series.iter().map(|s| Cell::Num(s.values[k])));
            row
        })
        .collect();
    Table { columns, rows }
}

fn run_profile(cfg: &ScenarioConfig, r: &Resolved) -> Result<Table> {
    let pr = cfg.profile.as_ref().expect("validated profile");
    let grid = linspace(pr.delta_min, pr.delta_max, pr.points);
    let mut columns = vec!["delta".to_string()];
    let mut rows = Vec::with_capacity(grid.len());
    for (k, &d) in grid.iter().enumerate() {
        let mut p = r.params.clone();
        p.delta = d;
        let t = supermode_transform(&p)?;
        if k == 0 {
            for l in &t.labels {
                for n in 0..t.n() {
                    columns.push(format!("m_{}_c{}", l.to_lowercase(), n + 1));
                }
            }
            columns.extend(t.labels.iter().map(|l| format!("omega_{}", l.to_lowercase())));
        }
        let mut row = vec![Cell::Num(d)];
        row.extend(t.matrix.iter().flatten().map(|&x| Cell::Num(x)));
        row.extend(t.mode_frequencies.iter().map(|&x| Cell::Num(x)));
        rows.push(row);
    }
    Ok(Table { columns, rows })
}
