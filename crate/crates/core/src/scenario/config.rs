use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldIssue, Result};
use crate::model::{Basis, DriveFrequency, EnvelopeNorm, SystemParams, DEFAULT_N_MAX};
use crate::spectrum::DEFAULT_CROSSING_THRESHOLD;

pub const DEFAULT_SWEEP_LEVELS: usize = 8;
pub const DEFAULT_GAP_POINTS: usize = 201;
pub const DEFAULT_SAMPLES: usize = 2001;
/// Canonical pulses start at t0 = T0_WIDTHS * tau.
pub const T0_WIDTHS: f64 = 6.0;
/// The pulse counts as over at t0 + PULSE_END_WIDTHS * tau.
pub const PULSE_END_WIDTHS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    SpectrumSweep,
    FreeEvolution,
    DrivenEvolution,
    GapSearch,
    SupermodeProfile,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::SpectrumSweep => "spectrum_sweep",
            Mode::FreeEvolution => "free_evolution",
            Mode::DrivenEvolution => "driven_evolution",
            Mode::GapSearch => "gap_search",
            Mode::SupermodeProfile => "supermode_profile",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("unknown format '{s}', expected csv or json"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Product states exactly as labelled.
    #[default]
    Bare,
    /// The dressed eigenstate combination closest to the labelled product state.
    Dressed,
}

/// A number, or an angle expression such as `pi`, `pi/6`, `-pi/2`, `2pi/3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Value(f64),
    Expr(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Angle::Value(v) => Ok(*v),
            Angle::Expr(s) => parse_angle(s),
        }
    }
}

pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let bad = || Error::Parse(format!("cannot read angle '{text}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(bad)?.trim_end_matches('*');
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * PI / den)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnticrossingDirective {
    pub levels: [usize; 2],
    pub bracket: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Basis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QubitFrequencyInput {
    Single(f64),
    Pair([f64; 2]),
    /// Place both qubits at the minimum of the gap between two levels.
    Directive {
        anticrossing: AnticrossingDirective,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NMaxInput {
    Fixed(usize),
    Auto(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TauInput {
    Value(f64),
    Rule(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaDInput {
    Value(f64),
    Directive(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawSystem {
    pub n_cavities: Option<usize>,
    pub omega_c: Option<f64>,
    pub delta: Option<f64>,
    pub omega_q: Option<QubitFrequencyInput>,
    #[serde(rename = "J")]
    pub hopping: Option<f64>,
    pub g: Option<f64>,
    pub phases: Option<[Angle; 2]>,
    pub theta: Option<Angle>,
    pub n_max: Option<NMaxInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVariant {
    pub name: String,
    pub phases: Option<[Angle; 2]>,
    pub theta: Option<Angle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
    pub n_levels: Option<usize>,
    pub basis: Option<Basis>,
    /// Record the dominant basis label of every level (JSON output only).
    pub labels: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<RawVariant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawGap {
    pub name: Option<String>,
    pub levels: Option<[usize; 2]>,
    pub bracket: Option<[f64; 2]>,
    pub threshold: Option<f64>,
    pub points: Option<usize>,
    pub basis: Option<Basis>,
    pub phases: Option<[Angle; 2]>,
    pub theta: Option<Angle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawInit {
    pub label: Option<String>,
    pub basis: Option<Basis>,
    pub frame: Option<Frame>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawPulse {
    pub amplitude: Option<f64>,
    pub omega_d: Option<OmegaDInput>,
    pub t0: Option<f64>,
    pub tau: Option<TauInput>,
    /// Levels whose drive matrix elements from the ground level set the pi-area width.
    pub tau_levels: Option<Vec<usize>>,
    pub envelope: Option<EnvelopeNorm>,
    pub level_cutoff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawTime {
    pub t_max: Option<f64>,
    /// Duration in units of the Rabi half period pi / (2 Omega_eff); counted
    /// from the end of the pulse in driven runs.
    pub half_periods: Option<f64>,
    pub samples: Option<usize>,
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    Projector,
    JointExcited,
    PhotonNumber,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawObservable {
    pub name: String,
    pub kind: ObservableKind,
    pub label: Option<String>,
    pub basis: Option<Basis>,
    pub frame: Option<Frame>,
    pub mode: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawProfile {
    pub delta_min: Option<f64>,
    pub delta_max: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub path: Option<String>,
    pub format: Option<Format>,
}

/// The configuration document as written; after validation every default is
/// filled in, so it doubles as the echo of the resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub scenario_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub mode: Mode,
    #[serde(default)]
    pub system: RawSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<RawSweep>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gaps: Vec<RawGap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<RawInit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<RawPulse>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<RawTime>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observables: Vec<RawObservable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<RawProfile>,
    #[serde(default)]
    pub output: RawOutput,
}

// Resolved configuration.

#[derive(Debug, Clone, PartialEq)]
pub enum QubitFrequency {
    Fixed([f64; 2]),
    Anticrossing { levels: (usize, usize), bracket: (f64, f64), points: usize, basis: Basis },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Fixed(usize),
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub n_levels: usize,
    pub basis: Basis,
    pub labels: bool,
    /// (name, phases, theta) overrides; empty means the system as given.
    pub variants: Vec<(String, [f64; 2], f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapSpec {
    pub name: String,
    pub levels: (usize, usize),
    pub bracket: (f64, f64),
    pub threshold: f64,
    pub points: usize,
    pub basis: Basis,
    pub phases: [f64; 2],
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitSpec {
    pub label: String,
    pub basis: Basis,
    pub frame: Frame,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TauSpec {
    Fixed(f64),
    /// Width giving a pi rotation on the listed levels (peak envelope only).
    PiArea(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseConfig {
    pub amplitude: f64,
    pub omega_d: DriveFrequency,
    pub t0: Option<f64>,
    pub tau: TauSpec,
    pub envelope: EnvelopeNorm,
    pub level_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Duration {
    Absolute(f64),
    HalfPeriods(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSpec {
    pub duration: Duration,
    pub samples: usize,
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObservableTarget {
    Projector { label: String, basis: Basis, frame: Frame },
    JointExcited,
    PhotonNumber { mode: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableConfig {
    pub name: String,
    pub target: ObservableTarget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpec {
    pub delta_min: f64,
    pub delta_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    pub description: String,
    pub mode: Mode,
    /// omega_q and n_max inside are placeholders until resolved at run time.
    pub params: SystemParams,
    pub omega_q: QubitFrequency,
    pub truncation: Truncation,
    pub sweep: Option<SweepSpec>,
    pub gaps: Vec<GapSpec>,
    pub init: Option<InitSpec>,
    pub pulse: Option<PulseConfig>,
    pub time: Option<TimeSpec>,
    pub observables: Vec<ObservableConfig>,
    pub profile: Option<ProfileSpec>,
    pub output_path: String,
    pub format: Format,
    /// Filled-in configuration document.
    pub echo: RawConfig,
}

impl ScenarioConfig {
    /// Resolved Rabi half period is needed to fix the run length.
    pub fn needs_anticrossing(&self) -> bool {
        matches!(self.omega_q, QubitFrequency::Anticrossing { .. })
    }
}

/// Parse a TOML document (or a JSON echo of one) and validate it.
pub fn validate_config(text: &str) -> Result<ScenarioConfig> {
    let raw: RawConfig = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
    };
    resolve(raw)
}

struct Issues(Vec<FieldIssue>);

impl Issues {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(FieldIssue::new(path, message));
    }

    fn angle(&mut self, path: &str, a: &Angle) -> f64 {
        a.radians().unwrap_or_else(|e| {
            self.push(path, e.to_string());
            f64::NAN
        })
    }

    fn phases(&mut self, path: &str, a: &[Angle; 2]) -> [f64; 2] {
        [self.angle(&format!("{path}[0]"), &a[0]), self.angle(&format!("{path}[1]"), &a[1])]
    }
}

fn need<T: Clone>(issues: &mut Issues, path: &str, v: &Option<T>) -> Option<T> {
    if v.is_none() {
        issues.push(path, "required field is missing");
    }
    v.clone()
}

fn to_angles(p: [f64; 2]) -> [Angle; 2] {
    [angle_out(p[0]), angle_out(p[1])]
}

fn angle_out(v: f64) -> Angle {
    Angle::Value(v)
}

fn resolve(mut raw: RawConfig) -> Result<ScenarioConfig> {
    let mut iss = Issues(Vec::new());
    if raw.scenario_id.trim().is_empty() {
        iss.push("scenario_id", "must not be empty");
    }

    // System.
    let sys = &mut raw.system;
    let n_cavities = *sys.n_cavities.get_or_insert(2);
    let mut params = if n_cavities == 3 { SystemParams::three_cavity(0.0) } else { SystemParams::two_cavity() };
    params.n_cavities = n_cavities;
    params.omega_c = *sys.omega_c.get_or_insert(params.omega_c);
    params.delta = *sys.delta.get_or_insert(params.delta);
    params.hopping = *sys.hopping.get_or_insert(params.hopping);
    params.g_abs = *sys.g.get_or_insert(params.g_abs);
    let phases = sys.phases.get_or_insert_with(|| to_angles(params.phases)).clone();
    params.phases = iss.phases("system.phases", &phases);
    let theta = sys.theta.get_or_insert(Angle::Expr("pi/6".into())).clone();
    params.theta = iss.angle("system.theta", &theta);
    let truncation = match sys.n_max.get_or_insert(NMaxInput::Fixed(DEFAULT_N_MAX)) {
        NMaxInput::Fixed(n) => {
            params.n_max = *n;
            Truncation::Fixed(*n)
        }
        NMaxInput::Auto(s) if s == "auto" => Truncation::Auto,
        NMaxInput::Auto(s) => {
            iss.push("system.n_max", format!("expected an integer or \"auto\", got \"{s}\""));
            Truncation::Fixed(DEFAULT_N_MAX)
        }
    };
    let omega_q = match sys.omega_q.get_or_insert(QubitFrequencyInput::Single(0.5)) {
        QubitFrequencyInput::Single(w) => QubitFrequency::Fixed([*w, *w]),
        QubitFrequencyInput::Pair(w) => QubitFrequency::Fixed(*w),
        QubitFrequencyInput::Directive { anticrossing: d } => {
            let points = *d.points.get_or_insert(DEFAULT_GAP_POINTS);
            let basis = *d.basis.get_or_insert(Basis::Supermode);
            check_pair(&mut iss, "system.omega_q.anticrossing.levels", d.levels);
            check_bracket(&mut iss, "system.omega_q.anticrossing.bracket", d.bracket);
            if points < 3 {
                iss.push("system.omega_q.anticrossing.points", "must be >= 3");
            }
            QubitFrequency::Anticrossing {
                levels: (d.levels[0], d.levels[1]),
                bracket: (d.bracket[0], d.bracket[1]),
                points,
                basis,
            }
        }
    };
    if let QubitFrequency::Fixed(w) = omega_q {
        params.omega_q = w;
    }
    iss.0.extend(params.issues("system"));

    let mode = raw.mode;
    let section = |name: &str, present: bool, needed: bool, iss: &mut Issues| {
        if needed && !present {
            iss.push(name, format!("section is required in mode {}", mode.as_str()));
        }
        if !needed && present {
            iss.push(name, format!("section is not used in mode {}", mode.as_str()));
        }
    };
    let dynamic = matches!(mode, Mode::FreeEvolution | Mode::DrivenEvolution);
    section("sweep", raw.sweep.is_some(), mode == Mode::SpectrumSweep, &mut iss);
    section("gaps", !raw.gaps.is_empty(), mode == Mode::GapSearch, &mut iss);
    if mode == Mode::SpectrumSweep && !raw.gaps.is_empty() {
        // Gap summaries may accompany a sweep.
        iss.0.retain(|i| i.path != "gaps");
    }
    section("init", raw.init.is_some(), dynamic, &mut iss);
    section("time", raw.time.is_some(), dynamic, &mut iss);
    section("observables", !raw.observables.is_empty(), dynamic, &mut iss);
    section("pulse", raw.pulse.is_some(), mode == Mode::DrivenEvolution, &mut iss);
    section("profile", raw.profile.is_some(), mode == Mode::SupermodeProfile, &mut iss);
    if mode == Mode::SupermodeProfile && n_cavities != 3 {
        iss.push("system.n_cavities", "supermode_profile needs n_cavities = 3");
    }

    let sweep = match (&mut raw.sweep, mode) {
        (Some(s), Mode::SpectrumSweep) => Some(resolve_sweep(&mut iss, s, &params)),
        _ => None,
    };
    let gaps: Vec<GapSpec> = if matches!(mode, Mode::SpectrumSweep | Mode::GapSearch) {
        raw.gaps.iter_mut().enumerate().map(|(k, g)| resolve_gap(&mut iss, k, g, &params)).collect()
    } else {
        Vec::new()
    };

    let init = match (&mut raw.init, dynamic) {
        (Some(i), true) => {
            let label = need(&mut iss, "init.label", &i.label).unwrap_or_default();
            Some(InitSpec {
                label,
                basis: *i.basis.get_or_insert(Basis::Bare),
                frame: *i.frame.get_or_insert(Frame::Bare),
            })
        }
        _ => None,
    };

    let pulse = match (&mut raw.pulse, mode) {
        (Some(p), Mode::DrivenEvolution) => Some(resolve_pulse(&mut iss, p)),
        _ => None,
    };

    let time = match (&mut raw.time, dynamic) {
        (Some(t), true) => {
            let duration = match (t.t_max, t.half_periods) {
                (Some(v), None) => {
                    if !(v > 0.0) || !v.is_finite() {
                        iss.push("time.t_max", format!("must be > 0, got {v}"));
                    }
                    Duration::Absolute(v)
                }
                (None, Some(h)) => {
                    if !(h > 0.0) || !h.is_finite() {
                        iss.push("time.half_periods", format!("must be > 0, got {h}"));
                    }
                    if !matches!(omega_q, QubitFrequency::Anticrossing { .. }) {
                        iss.push(
                            "time.half_periods",
                            "needs system.omega_q = { anticrossing = ... } to define the Rabi period",
                        );
                    }
                    Duration::HalfPeriods(h)
                }
                (Some(_), Some(_)) => {
                    iss.push("time", "give t_max or half_periods, not both");
                    Duration::Absolute(f64::NAN)
                }
                (None, None) => {
                    iss.push("time", "one of t_max or half_periods is required");
                    Duration::Absolute(f64::NAN)
                }
            };
            let samples = *t.samples.get_or_insert(DEFAULT_SAMPLES);
            if samples < 2 {
                iss.push("time.samples", "must be >= 2");
            }
            if let Some(dt) = t.dt {
                if !(dt > 0.0) || !dt.is_finite() {
                    iss.push("time.dt", format!("must be > 0, got {dt}"));
                }
                if mode != Mode::DrivenEvolution {
                    iss.push("time.dt", "only driven_evolution integrates with a step");
                }
            }
            Some(TimeSpec { duration, samples, dt: t.dt })
        }
        _ => None,
    };

    let mut observables = Vec::new();
    if dynamic {
        for (k, o) in raw.observables.iter_mut().enumerate() {
            let path = format!("observables[{k}]");
            if observables.iter().any(|x: &ObservableConfig| x.name == o.name) {
                iss.push(format!("{path}.name"), format!("duplicate observable name '{}'", o.name));
            }
            if !is_snake_case(&o.name) {
                iss.push(format!("{path}.name"), format!("'{}' is not snake_case", o.name));
            }
            let target = match o.kind {
                ObservableKind::Projector => {
                    let label = need(&mut iss, &format!("{path}.label"), &o.label).unwrap_or_default();
                    ObservableTarget::Projector {
                        label,
                        basis: *o.basis.get_or_insert(Basis::Bare),
                        frame: *o.frame.get_or_insert(Frame::Bare),
                    }
                }
                ObservableKind::JointExcited => ObservableTarget::JointExcited,
                ObservableKind::PhotonNumber => ObservableTarget::PhotonNumber {
                    mode: need(&mut iss, &format!("{path}.mode"), &o.mode).unwrap_or_default(),
                },
            };
            observables.push(ObservableConfig { name: o.name.clone(), target });
        }
    }

    let profile = match (&mut raw.profile, mode) {
        (Some(pr), Mode::SupermodeProfile) => {
            let delta_min = *pr.delta_min.get_or_insert(0.0);
            let delta_max = *pr.delta_max.get_or_insert(1.0);
            let points = *pr.points.get_or_insert(101);
            if !(delta_max > delta_min) {
                iss.push("profile.delta_max", "must exceed profile.delta_min");
            }
            if points < 2 {
                iss.push("profile.points", "must be >= 2");
            }
            Some(ProfileSpec { delta_min, delta_max, points })
        }
        _ => None,
    };

    let output_path = raw.output.path.get_or_insert_with(|| raw.scenario_id.clone()).clone();
    if output_path.is_empty() || output_path.contains(['/', '\\']) {
        iss.push("output.path", "must be a plain file stem");
    }
    let format = *raw.output.format.get_or_insert(Format::Csv);

    if !iss.0.is_empty() {
        let phase_only = iss.0.iter().all(|i| i.path.contains("phases"));
        if phase_only {
            let i = &iss.0[0];
            return Err(Error::unsupported(i.path.clone(), i.message.clone()));
        }
        return Err(Error::Validation(iss.0));
    }
    let description = raw.description.get_or_insert_with(String::new).clone();
    Ok(ScenarioConfig {
        scenario_id: raw.scenario_id.clone(),
        description,
        mode,
        params,
        omega_q,
        truncation,
        sweep,
        gaps,
        init,
        pulse,
        time,
        observables,
        profile,
        output_path,
        format,
        echo: raw,
    })
}

fn is_snake_case(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && s.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn check_pair(iss: &mut Issues, path: &str, l: [usize; 2]) {
    if l[0] >= l[1] {
        iss.push(path, format!("need i < j, got [{}, {}]", l[0], l[1]));
    }
}

fn check_bracket(iss: &mut Issues, path: &str, b: [f64; 2]) {
    if !(b[0] < b[1]) || !b[0].is_finite() || !b[1].is_finite() || b[0] < 0.0 {
        iss.push(path, format!("need 0 <= lo < hi, got [{}, {}]", b[0], b[1]));
    }
}

fn resolve_sweep(iss: &mut Issues, s: &mut RawSweep, params: &SystemParams) -> SweepSpec {
    let min = need(iss, "sweep.min", &s.min).unwrap_or(f64::NAN);
    let max = need(iss, "sweep.max", &s.max).unwrap_or(f64::NAN);
    if s.min.is_some() && s.max.is_some() && !(max > min && min >= 0.0) {
        iss.push("sweep.max", format!("need 0 <= min < max, got [{min}, {max}]"));
    }
    let points = need(iss, "sweep.points", &s.points).unwrap_or(0);
    if s.points.is_some() && points < 2 {
        iss.push("sweep.points", format!("must be >= 2, got {points}"));
    }
    let n_levels = *s.n_levels.get_or_insert(DEFAULT_SWEEP_LEVELS);
    if n_levels < 2 {
        iss.push("sweep.n_levels", "must be >= 2");
    }
    let mut variants = Vec::new();
    for (k, v) in s.variants.iter_mut().enumerate() {
        let path = format!("sweep.variants[{k}]");
        if !is_snake_case(&v.name) {
            iss.push(format!("{path}.name"), format!("'{}' is not snake_case", v.name));
        }
        let ph = v.phases.get_or_insert_with(|| to_angles(params.phases)).clone();
        let phases = iss.phases(&format!("{path}.phases"), &ph);
        check_phases(iss, &format!("{path}.phases"), phases);
        let th = v.theta.get_or_insert(angle_out(params.theta)).clone();
        let theta = iss.angle(&format!("{path}.theta"), &th);
        variants.push((v.name.clone(), phases, theta));
    }
    SweepSpec {
        min,
        max,
        points,
        n_levels,
        basis: *s.basis.get_or_insert(Basis::Supermode),
        labels: *s.labels.get_or_insert(true),
        variants,
    }
}

fn check_phases(iss: &mut Issues, path: &str, phases: [f64; 2]) {
    for (k, phi) in phases.iter().enumerate() {
        if phi.is_finite() && crate::model::phase_sign(*phi).is_none() {
            iss.push(format!("{path}[{k}]"), format!("unsupported phase {phi}; only 0 and pi are allowed"));
        }
    }
}

fn resolve_gap(iss: &mut Issues, k: usize, g: &mut RawGap, params: &SystemParams) -> GapSpec {
    let path = format!("gaps[{k}]");
    let name = g.name.get_or_insert_with(|| format!("gap{k}")).clone();
    if !is_snake_case(&name) {
        iss.push(format!("{path}.name"), format!("'{name}' is not snake_case"));
    }
    let levels = need(iss, &format!("{path}.levels"), &g.levels).unwrap_or([0, 1]);
    check_pair(iss, &format!("{path}.levels"), levels);
    let bracket = need(iss, &format!("{path}.bracket"), &g.bracket).unwrap_or([0.0, 1.0]);
    check_bracket(iss, &format!("{path}.bracket"), bracket);
    let threshold = *g.threshold.get_or_insert(DEFAULT_CROSSING_THRESHOLD);
    if !(threshold > 0.0) {
        iss.push(format!("{path}.threshold"), "must be > 0");
    }
    let points = *g.points.get_or_insert(DEFAULT_GAP_POINTS);
    if points < 3 {
        iss.push(format!("{path}.points"), "must be >= 3");
    }
    let ph = g.phases.get_or_insert_with(|| to_angles(params.phases)).clone();
    let phases = iss.phases(&format!("{path}.phases"), &ph);
    check_phases(iss, &format!("{path}.phases"), phases);
    let th = g.theta.get_or_insert(angle_out(params.theta)).clone();
    let theta = iss.angle(&format!("{path}.theta"), &th);
    GapSpec {
        name,
        levels: (levels[0], levels[1]),
        bracket: (bracket[0], bracket[1]),
        threshold,
        points,
        basis: *g.basis.get_or_insert(Basis::Supermode),
        phases,
        theta,
    }
}

fn resolve_pulse(iss: &mut Issues, p: &mut RawPulse) -> PulseConfig {
    let amplitude = need(iss, "pulse.amplitude", &p.amplitude).unwrap_or(0.0);
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        iss.push("pulse.amplitude", format!("must be >= 0, got {amplitude}"));
    }
    let omega_d = match need(iss, "pulse.omega_d", &p.omega_d) {
        Some(OmegaDInput::Value(w)) => {
            if !(w > 0.0) || !w.is_finite() {
                iss.push("pulse.omega_d", format!("must be > 0, got {w}"));
            }
            DriveFrequency::Fixed(w)
        }
        Some(OmegaDInput::Directive(s)) => s.parse().unwrap_or_else(|e: Error| {
            iss.push("pulse.omega_d", e.to_string());
            DriveFrequency::Fixed(f64::NAN)
        }),
        None => DriveFrequency::Fixed(f64::NAN),
    };
    let envelope = *p.envelope.get_or_insert(EnvelopeNorm::Literal);
    let tau = match need(iss, "pulse.tau", &p.tau) {
        Some(TauInput::Value(t)) => {
            if !(t > 0.0) || !t.is_finite() {
                iss.push("pulse.tau", format!("must be > 0, got {t}"));
            }
            if p.tau_levels.is_some() {
                iss.push("pulse.tau_levels", "only used with tau = \"pi_area\"");
            }
            TauSpec::Fixed(t)
        }
        Some(TauInput::Rule(r)) if r == "pi_area" => {
            if envelope != EnvelopeNorm::Peak {
                iss.push("pulse.tau", "\"pi_area\" needs envelope = \"peak\"; other readings fix the area");
            }
            if amplitude <= 0.0 {
                iss.push("pulse.tau", "\"pi_area\" needs amplitude > 0");
            }
            let levels = need(iss, "pulse.tau_levels", &p.tau_levels).unwrap_or_default();
            if p.tau_levels.is_some() && (levels.is_empty() || levels.contains(&0)) {
                iss.push("pulse.tau_levels", "list excited levels (index >= 1)");
            }
            TauSpec::PiArea(levels)
        }
        Some(TauInput::Rule(r)) => {
            iss.push("pulse.tau", format!("expected a number or \"pi_area\", got \"{r}\""));
            TauSpec::Fixed(f64::NAN)
        }
        None => TauSpec::Fixed(f64::NAN),
    };
    if let Some(t0) = p.t0 {
        if !t0.is_finite() || t0 < 0.0 {
            iss.push("pulse.t0", format!("must be >= 0, got {t0}"));
        }
    }
    if let Some(c) = p.level_cutoff {
        if !(c > 0.0) {
            iss.push("pulse.level_cutoff", format!("must be > 0, got {c}"));
        }
    }
    PulseConfig { amplitude, omega_d, t0: p.t0, tau, envelope, level_cutoff: p.level_cutoff }
}
