//! Acceptance suite: one PASS/FAIL line per criterion, each at its stated
//! tolerance. Runs without the test harness so the lines always print.

mod common;

use std::cell::Cell;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::series_oracle;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use usc_array::dynamics::{evolve_free, ObservableSpec};
use usc_array::fock::{eigenvalues_hermitian, QuantumState};
use usc_array::model::{
    bare_space, build_bare_hamiltonian, build_hamiltonian, supermode_transform, Basis, SystemParams,
};
use usc_array::scenario::{canonical, run_scenario, RunOptions, RunOutput};
use usc_array::spectrum::{converge_truncation, find_min_gap, find_min_gap_with, AutoTruncation, GapSearch};

const CROSSING: f64 = 1e-5;

struct Suite {
    failures: usize,
    total: usize,
    /// (run, max norm drift) of every trajectory produced along the way.
    drifts: Vec<(String, f64)>,
}

impl Suite {
    fn report(&mut self, name: &str, outcome: Result<(bool, String), String>) {
        self.total += 1;
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            self.failures += 1;
        }
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }

    fn run(&mut self, id: &str) -> Result<RunOutput, String> {
        let cfg = canonical(id).and_then(|e| e.config()).map_err(|e| e.to_string())?;
        let out = run_scenario(&cfg, &RunOptions { n_max: None, deterministic: true }).map_err(|e| e.to_string())?;
        if let Some(d) = out.metadata["resolved"]["norm_drift"].as_f64() {
            self.drifts.push((id.to_string(), d));
        }
        Ok(out)
    }
}

fn column(out: &RunOutput, name: &str) -> Result<Vec<f64>, String> {
    out.table.column(name).ok_or_else(|| format!("missing column {name}"))
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, k| if v[k] > v[b] { k } else { b })
}

fn max_in(times: &[f64], v: &[f64], lo: f64, hi: f64) -> f64 {
    times.iter().zip(v).filter(|(t, _)| **t >= lo && **t <= hi).map(|(_, x)| *x).fold(f64::NEG_INFINITY, f64::max)
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x / target - 1.0).abs() <= rel
}

fn in_range(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn n2_anticrossing() -> Result<(bool, String), String> {
    let start = Instant::now();
    let probe = SystemParams::two_cavity().with_qubit_frequency(0.6293);
    let (n_max, _) =
        converge_truncation(&probe, 7, Basis::Supermode, &AutoTruncation::default()).map_err(|e| e.to_string())?;
    let p = SystemParams::two_cavity().with_n_max(n_max);
    let ac = find_min_gap(&p, (3, 4), (0.60, 0.66)).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    Ok((
        within(ac.gap_min, 16e-3, 0.10) && secs < 120.0,
        format!(
            "2 Omega_eff = {:.6} (target 0.016 +- 10%) at omega_q* = {:.6}, n_max = {n_max}, {secs:.1} s (< 120 s)",
            ac.gap_min, ac.omega_q_star
        ),
    ))
}

fn n2_selection_rule() -> Result<(bool, String), String> {
    let mut gaps = Vec::new();
    for phases in [[0.0, PI], [0.0, 0.0]] {
        let p = SystemParams::two_cavity().with_phases(phases);
        for (pair, bracket) in [((3, 4), (0.60, 0.66)), ((4, 5), (0.67, 0.72))] {
            gaps.push(find_min_gap(&p, pair, bracket).map_err(|e| e.to_string())?.gap_min);
        }
    }
    let crossing = |g: f64| g < CROSSING;
    let pass = !crossing(gaps[0]) && crossing(gaps[1]) && crossing(gaps[2]) && !crossing(gaps[3]);
    Ok((
        pass,
        format!(
            "phases (0,pi): A-gap {:.3e}, S-gap {:.3e}; phases (0,0): A-gap {:.3e}, S-gap {:.3e} (crossing < 1e-5)",
            gaps[0], gaps[1], gaps[2], gaps[3]
        ),
    ))
}

fn parity_requirement() -> Result<(bool, String), String> {
    // Without the sigma_z admixture the dressed resonance sits higher, near omega_q = 0.753.
    let p = SystemParams::two_cavity().with_theta(0.0);
    let ac = find_min_gap(&p, (3, 4), (0.70, 0.80)).map_err(|e| e.to_string())?;
    let [lo, hi] = &ac.branch_labels;
    let same_branches = lo.lower.label == hi.upper.label
        && lo.upper.label == hi.lower.label
        && [&lo.lower.label, &lo.upper.label].iter().any(|l| l.starts_with("1_A") && l.ends_with("g,g"))
        && [&lo.lower.label, &lo.upper.label].iter().any(|l| l.ends_with("e,e"));
    let with = find_min_gap(&SystemParams::two_cavity(), (3, 4), (0.60, 0.66)).map_err(|e| e.to_string())?;
    Ok((
        ac.gap_min < CROSSING && same_branches,
        format!(
            "theta = 0: {} / {} gap {:.3e} at {:.5} (< 1e-5); theta = pi/6 gap {:.3e}",
            lo.upper.label, lo.lower.label, ac.gap_min, ac.omega_q_star, with.gap_min
        ),
    ))
}

fn n2_rabi(s: &mut Suite) -> Result<(bool, String), String> {
    let out = s.run("fig3a")?;
    let t = column(&out, "time")?;
    let p_ee = column(&out, "p_ee")?;
    let half = out.metadata["resolved"]["anticrossing"]["half_period"].as_f64().ok_or("no half period")?;
    let k = argmax(&p_ee);
    let offset = (t[k] - half).abs() / half;
    Ok((
        p_ee[k] >= 0.95 && offset <= 0.05,
        format!(
            "max P_ee = {:.4} (>= 0.95) at t = {:.2}, pi/(2 Omega_eff) = {half:.2}, offset {:.2}% (<= 5%)",
            p_ee[k],
            t[k],
            100.0 * offset
        ),
    ))
}

fn n2_localized(s: &mut Suite) -> Result<(bool, String), String> {
    let out = s.run("fig4a")?;
    let p_ee = column(&out, "p_ee")?;
    let k = argmax(&p_ee);
    let p11 = column(&out, "p_11")?[k];
    let p12 = column(&out, "p_12")?[k];
    Ok((
        in_range(p_ee[k], 0.45, 0.55) && in_range(p11, 0.20, 0.30) && in_range(p12, 0.20, 0.30),
        format!("max P_ee = {:.4} in [0.45, 0.55]; there P_11 = {p11:.4}, P_12 = {p12:.4} in [0.20, 0.30]", p_ee[k]),
    ))
}

fn n3_gaps() -> Result<(bool, String), String> {
    let cfg = canonical("fig6").and_then(|e| e.config()).map_err(|e| e.to_string())?;
    let mut found = Vec::new();
    for g in &cfg.gaps {
        let mut p = cfg.params.clone();
        p.n_max = match cfg.truncation {
            usc_array::scenario::Truncation::Fixed(n) => n,
            _ => return Err("fig6 must fix n_max".into()),
        };
        p.phases = g.phases;
        p.theta = g.theta;
        let search = GapSearch { basis: g.basis, coarse_points: g.points, ..GapSearch::default() };
        let ac = find_min_gap_with(&p, g.levels, g.bracket, &search).map_err(|e| e.to_string())?;
        found.push((g.levels, ac));
    }
    let get = |pair: (usize, usize)| found.iter().find(|f| f.0 == pair).map(|f| &f.1).ok_or(format!("no {pair:?} gap"));
    let (low, mid, high) = (get((3, 4))?, get((4, 5))?, get((5, 6))?);
    Ok((
        within(mid.gap_min, 2e-3, 0.10) && low.gap_min < CROSSING && high.gap_min < CROSSING,
        format!(
            "2 Omega_eff (4,5) = {:.4e} at {:.5} (2e-3 +- 10%); crossings (3,4) {:.2e} at {:.5}, (5,6) {:.2e} at {:.5} (< 1e-5)",
            mid.gap_min, mid.omega_q_star, low.gap_min, low.omega_q_star, high.gap_min, high.omega_q_star
        ),
    ))
}

fn n3_resonant(s: &mut Suite) -> Result<(bool, String), String> {
    let out = s.run("fig7a")?;
    let p_ee = column(&out, "p_ee")?.into_iter().fold(0.0, f64::max);
    let p12 = column(&out, "p_12")?.into_iter().fold(0.0, f64::max);
    Ok((p_ee >= 0.95 && p12 <= 1e-3, format!("max P_ee = {p_ee:.4} (>= 0.95), max P_12 = {p12:.2e} (<= 1e-3)")))
}

fn n3_detuned(s: &mut Suite) -> Result<(bool, String), String> {
    let out = s.run("fig7c")?;
    let omega_eff = out.metadata["resolved"]["anticrossing"]["omega_eff"].as_f64().ok_or("no omega_eff")?;
    let t = column(&out, "time")?;
    let p_ee = column(&out, "p_ee")?.into_iter().fold(0.0, f64::max);
    let p12 = column(&out, "p_12")?;
    // The run spans one full exchange cycle, 0 .. pi / Omega_eff.
    let area: f64 = (1..t.len()).map(|k| 0.5 * (p12[k] + p12[k - 1]) * (t[k] - t[k - 1])).sum();
    let avg = area / (t[t.len() - 1] - t[0]);
    Ok((
        within(omega_eff, 4.5e-4, 0.15) && in_range(p_ee, 0.45, 0.55) && avg <= 0.1,
        format!("Omega_eff = {omega_eff:.4e} (4.5e-4 +- 15%), max P_ee = {p_ee:.4} in [0.45, 0.55], cycle-mean P_12 = {avg:.4} (<= 0.1)"),
    ))
}

fn empty_transfer(s: &mut Suite) -> Result<(bool, String), String> {
    let p = SystemParams::two_cavity().with_coupling(0.0).with_n_max(2);
    let h = build_bare_hamiltonian(&p).map_err(|e| e.to_string())?;
    let space = bare_space(&p).map_err(|e| e.to_string())?;
    let psi0 = QuantumState::from_occupations(&space, &[1, 0, 0, 0]).map_err(|e| e.to_string())?;
    let target = QuantumState::from_occupations(&space, &[0, 1, 0, 0]).map_err(|e| e.to_string())?;
    let t = PI / (2.0 * p.hopping);
    let traj =
        evolve_free(&h, &psi0, &[0.0, t], &[ObservableSpec::projector("p12", target)]).map_err(|e| e.to_string())?;
    s.drifts.push(("empty transfer".into(), traj.norm_drift));
    let p12 = traj.get("p12").ok_or("no series")?[1];
    Ok(((p12 - 1.0).abs() <= 1e-6, format!("P_12(pi/2J) = {p12:.12} (1 +- 1e-6)")))
}

fn driven(s: &mut Suite) -> Result<(bool, String), String> {
    let out = s.run("fig3b")?;
    let r = &out.metadata["resolved"];
    let t0 = r["pulse"]["t0"].as_f64().ok_or("no t0")?;
    let end = r["pulse"]["pulse_end"].as_f64().ok_or("no pulse end")?;
    let half = r["anticrossing"]["half_period"].as_f64().ok_or("no half period")?;
    let t = column(&out, "time")?;
    let p_ee = max_in(&t, &column(&out, "p_ee")?, end, f64::INFINITY);
    // Successive P_1A maxima are one full exchange cycle (two half periods) apart.
    let p_1a = column(&out, "p_1a")?;
    let first = max_in(&t, &p_1a, t0, t0 + half);
    let second = max_in(&t, &p_1a, t0 + half, t0 + 3.0 * half);

    let out4 = s.run("fig4b")?;
    let r4 = &out4.metadata["resolved"];
    let end4 = r4["pulse"]["pulse_end"].as_f64().ok_or("no pulse end")?;
    let t4 = column(&out4, "time")?;
    let p_ee4 = max_in(&t4, &column(&out4, "p_ee")?, 0.0, f64::INFINITY);
    let post4 = max_in(&t4, &column(&out4, "p_ee")?, end4, f64::INFINITY);
    Ok((
        p_ee >= 0.9 && first < second && in_range(p_ee4, 0.4, 0.55),
        format!(
            "fig3b post-pulse max P_ee = {p_ee:.4} (>= 0.9), P_1A peaks {first:.4} < {second:.4} (tau = {:.3}); \
             fig4b max P_ee = {p_ee4:.4} in [0.4, 0.55] (post-pulse {post4:.4}, tau = {:.3})",
            r["pulse"]["tau"].as_f64().unwrap_or(f64::NAN),
            r4["pulse"]["tau"].as_f64().unwrap_or(f64::NAN)
        ),
    ))
}

fn oracle_suites(s: &Suite) -> Result<(bool, String), String> {
    // Cross-basis spectra on the lowest six levels at n_max = 8.
    let mut cross: f64 = 0.0;
    for (w, phases) in [(0.5, [0.0, PI]), (0.6293, [0.0, PI]), (0.6966, [0.0, 0.0])] {
        let p = SystemParams::two_cavity().with_n_max(8).with_qubit_frequency(w).with_phases(phases);
        let a = eigenvalues_hermitian(&build_hamiltonian(&p, Basis::Bare).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let b = eigenvalues_hermitian(&build_hamiltonian(&p, Basis::Supermode).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        cross = a.iter().zip(&b).take(6).map(|(x, y)| (x - y).abs()).fold(cross, f64::max);
    }

    // Eigenbasis propagation against stepwise series exponentials at dim 64.
    let p = SystemParams::two_cavity().with_n_max(3).with_qubit_frequency(0.63);
    let h = build_bare_hamiltonian(&p).map_err(|e| e.to_string())?;
    let psi0 = QuantumState::from_occupations(&bare_space(&p).map_err(|e| e.to_string())?, &[1, 0, 0, 0])
        .map_err(|e| e.to_string())?;
    let t = 37.3;
    let traj = evolve_free(&h, &psi0, &[0.0, t], &[]).map_err(|e| e.to_string())?;
    let oracle = series_oracle(&h, &psi0, t, 400);
    let amp = traj.final_state.amplitudes().iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);

    let drift = s.drifts.iter().map(|d| d.1).fold(traj.norm_drift, f64::max);

    // Normal-mode transform orthogonality over 50 random (J, Delta) draws.
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 50, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let ortho = Cell::new(0.0f64);
    let draws = Cell::new(0usize);
    runner
        .run(&(1e-3f64..0.3, -1.0f64..1.0), |(j, delta)| {
            let mut p = SystemParams::three_cavity(delta);
            p.hopping = j;
            let d = supermode_transform(&p).expect("valid draw").orthogonality_defect();
            ortho.set(ortho.get().max(d));
            draws.set(draws.get() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let (ortho, draws) = (ortho.get(), draws.get());

    Ok((
        cross <= 1e-6 && amp <= 1e-8 && drift <= 1e-6 && ortho <= 1e-12,
        format!(
            "cross-basis {cross:.2e} (<= 1e-6); series oracle {amp:.2e} (<= 1e-8, dim {}); \
             norm drift {drift:.2e} over {} trajectories (<= 1e-6); orthogonality {ortho:.2e} over {draws} draws (<= 1e-12)",
            h.dim(),
            s.drifts.len() + 1
        ),
    ))
}

fn standalone() -> Result<(bool, String), String> {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let manifest = std::fs::read_to_string(root.join("Cargo.toml")).map_err(|e| e.to_string())?;
    let rust_only = std::fs::read_dir(root.join("crates"))
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .all(|e| e.path().join("Cargo.toml").is_file());
    Ok((
        rust_only && manifest.contains("crates/*"),
        "suite built and run from the Rust workspace alone; no plotting component involved".into(),
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut s = Suite { failures: 0, total: 0, drifts: Vec::new() };
    s.report("N=2 anticrossing", n2_anticrossing());
    s.report("N=2 selection rule", n2_selection_rule());
    s.report("parity requirement", parity_requirement());
    let r = n2_rabi(&mut s);
    s.report("N=2 Rabi dynamics from |1_A>", r);
    let r = n2_localized(&mut s);
    s.report("N=2 localized dynamics from |1_1>", r);
    s.report("N=3 Delta=0 anticrossing and crossings", n3_gaps());
    let r = n3_resonant(&mut s);
    s.report("N=3 Delta=0 dynamics from |1_A>", r);
    let r = n3_detuned(&mut s);
    s.report("N=3 Delta=0.5 coupling and dynamics", r);
    let r = empty_transfer(&mut s);
    s.report("empty-array transfer", r);
    let r = driven(&mut s);
    s.report("driven scenarios", r);
    let r = oracle_suites(&s);
    s.report("oracle suites", r);
    s.report("core suite standalone", standalone());
    println!(
        "acceptance: {}/{} criteria passed in {:.1} s",
        s.total - s.failures,
        s.total,
        start.elapsed().as_secs_f64()
    );
    if s.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
