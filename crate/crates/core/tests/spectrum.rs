use proptest::prelude::*;
use usc_array::fock::{eig_hermitian, QuantumState};
use usc_array::model::{build_hamiltonian, supermode_space, Basis, SystemParams};
use usc_array::spectrum::{
    convergence_report, find_min_gap, find_min_gap_with, identify_state, linspace, sweep_levels, sweep_levels_with,
    DressedFrame, GapSearch,
};

const OMEGA_STAR: f64 = 0.629301;

#[test]
fn two_cavity_anticrossing_regression() {
    let p = SystemParams::two_cavity();
    let ac = find_min_gap(&p, (3, 4), (0.60, 0.66)).unwrap();
    assert!((ac.omega_q_star - OMEGA_STAR).abs() < 1e-5, "{}", ac.omega_q_star);
    assert!((ac.gap_min - 0.016751).abs() < 2e-6, "{}", ac.gap_min);
    assert_eq!(ac.omega_eff, ac.gap_min / 2.0);
    // Branches swap character across the anticrossing.
    let [lo, hi] = &ac.branch_labels;
    assert_eq!(lo.lower.label, hi.upper.label);
    assert_eq!(lo.upper.label, hi.lower.label);
}

#[test]
fn gap_search_is_stable_under_grid_changes() {
    let p = SystemParams::two_cavity();
    let base = find_min_gap(&p, (3, 4), (0.60, 0.66)).unwrap();
    for (bracket, points) in [((0.60, 0.66), 51), ((0.605, 0.655), 201), ((0.59, 0.67), 97)] {
        let s = GapSearch { coarse_points: points, ..GapSearch::default() };
        let ac = find_min_gap_with(&p, (3, 4), bracket, &s).unwrap();
        assert!((ac.omega_q_star - base.omega_q_star).abs() < 2e-6, "{bracket:?} {points}");
        assert!((ac.gap_min - base.gap_min).abs() < 1e-9, "{bracket:?} {points}");
    }
}

#[test]
fn truncation_ladder_converges() {
    let p = SystemParams::two_cavity().with_qubit_frequency(OMEGA_STAR);
    let report = convergence_report(&p, &[6, 8, 10, 12], 7, Basis::Supermode).unwrap();
    let drifts: Vec<f64> = report.rows.iter().filter_map(|r| r.max_drift()).collect();
    assert_eq!(drifts.len(), 3);
    assert!(drifts.windows(2).all(|w| w[1] < w[0]), "{drifts:?}");
    assert!(drifts[1] < 1e-8, "{drifts:?}");
}

#[test]
fn anticrossing_eigenstates_are_even_dressed_mixtures() {
    let p = SystemParams::two_cavity().with_qubit_frequency(OMEGA_STAR);
    let eig = eig_hermitian(&build_hamiltonian(&p, Basis::Supermode).unwrap()).unwrap();
    let space = supermode_space(&p).unwrap();
    let frame = DressedFrame::one_quantum(&eig).unwrap();
    let names = ["0,0,g,g", "1,0,g,g", "0,1,g,g", "0,0,e,e"];
    let mut dressed = Vec::new();
    let mut bare = Vec::new();
    for n in names {
        let occ = space.parse_label(n).unwrap();
        let s = QuantumState::from_occupations(&space, &occ).unwrap();
        dressed.push((n.to_string(), frame.dress(&s).unwrap()));
        bare.push((n.to_string(), s));
    }
    for level in [3, 4] {
        let v = eig.eigenvector(level).unwrap();
        let ranked = identify_state(&v, &dressed).unwrap();
        let mut top: Vec<&str> = ranked[..2].iter().map(|r| r.0.as_str()).collect();
        top.sort();
        assert_eq!(top, ["0,0,e,e", "1,0,g,g"], "level {level}: {ranked:?}");
        for r in &ranked[..2] {
            assert!((r.1 - 0.5).abs() < 0.05, "level {level}: {ranked:?}");
        }
        // Product states alone carry much less of each dressed level.
        let raw = identify_state(&v, &bare).unwrap();
        assert!(raw[0].1 < 0.4, "level {level}: {raw:?}");
    }
}

#[test]
fn sweep_branches_are_continuous() {
    let p = SystemParams::two_cavity().with_n_max(5);
    let grid = linspace(0.3, 0.8, 201);
    let s = sweep_levels(&p, &grid, 8, Basis::Supermode).unwrap();
    let step = grid[1] - grid[0];
    for level in 0..8 {
        let b = s.branch(level);
        // No level can move faster than two qubit excitations.
        let jump = b.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        assert!(jump <= 2.0 * step + 1e-12, "level {level}: {jump}");
    }
    assert_eq!(s.dominant_labels.len(), grid.len());
    let fast = sweep_levels_with(&p, &grid[..5], 8, Basis::Supermode, false).unwrap();
    for (a, b) in fast.relative_levels.iter().zip(&s.relative_levels) {
        assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12));
    }
    assert!(fast.dominant_labels.iter().all(|row| row.is_empty()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relative_levels_are_sorted_from_zero(omega_q in 0.2f64..1.0, g in 0.0f64..0.4, theta in 0.0f64..1.5) {
        let p = SystemParams::two_cavity().with_n_max(3).with_coupling(g).with_theta(theta);
        let s = sweep_levels_with(&p, &[omega_q], 10, Basis::Supermode, false).unwrap();
        let row = &s.relative_levels[0];
        prop_assert_eq!(row[0], 0.0);
        prop_assert!(row.windows(2).all(|w| w[0] <= w[1]));
    }
}
