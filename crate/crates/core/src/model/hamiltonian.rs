use std::sync::Arc;

use faer::c64;
use serde::{Deserialize, Serialize};

use super::params::SystemParams;
use super::pulse::PulseSpec;
use super::supermode::{supermode_transform, SupermodeTransform};
use crate::error::Result;
use crate::fock::{make_space, HilbertSpace, LocalOperator, ModeSpec, Operator, PauliAxis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    #[default]
    Bare,
    Supermode,
}

impl std::fmt::Display for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Basis::Bare => "bare",
            Basis::Supermode => "supermode",
        })
    }
}

/// Bare cavities c1..cN followed by qubits q1, q2.
pub fn bare_space(p: &SystemParams) -> Result<Arc<HilbertSpace>> {
    let mut modes = Vec::with_capacity(p.n_cavities + 2);
    for n in 0..p.n_cavities {
        modes.push(ModeSpec::cavity(format!("c{}", n + 1), p.n_max)?);
    }
    modes.push(ModeSpec::qubit("q1"));
    modes.push(ModeSpec::qubit("q2"));
    make_space(modes)
}

/// Order of the normal modes in the supermode space: (A, S) for two
/// cavities, (S1, S2, A) for three.
pub fn supermode_order(n_cavities: usize) -> &'static [&'static str] {
    if n_cavities == 2 {
        &["A", "S"]
    } else {
        &["S1", "S2", "A"]
    }
}

pub fn supermode_space(p: &SystemParams) -> Result<Arc<HilbertSpace>> {
    let mut modes = Vec::with_capacity(p.n_cavities + 2);
    for label in supermode_order(p.n_cavities) {
        modes.push(ModeSpec::cavity(*label, p.n_max)?);
    }
    modes.push(ModeSpec::qubit("q1"));
    modes.push(ModeSpec::qubit("q2"));
    make_space(modes)
}

pub fn space_for(p: &SystemParams, basis: Basis) -> Result<Arc<HilbertSpace>> {
    match basis {
        Basis::Bare => bare_space(p),
        Basis::Supermode => supermode_space(p),
    }
}

/// Space mode index holding each transform row.
fn row_modes(t: &SupermodeTransform, n_cavities: usize) -> Vec<usize> {
    let order = supermode_order(n_cavities);
    t.labels.iter().map(|l| order.iter().position(|o| o == l).expect("known label")).collect()
}

fn qubit_coupling_local(p: &SystemParams) -> Result<LocalOperator> {
    LocalOperator::pauli(PauliAxis::X)
        .scaled_real(p.theta.cos())
        .plus_scaled(p.theta.sin(), &LocalOperator::pauli(PauliAxis::Z))
}

fn add_qubit_terms(h: &mut Operator, p: &SystemParams, qubit_modes: [usize; 2]) -> Result<()> {
    let excited = LocalOperator::projector(2, 1)?;
    for (q, &m) in qubit_modes.iter().enumerate() {
        h.add_product(c64::new(p.omega_q[q], 0.0), &[(m, &excited)])?;
    }
    Ok(())
}

/// Bare-basis array Hamiltonian: cavity ladders, RWA hopping between
/// neighbours, and the full (counter-rotating) qubit coupling
/// |g| cos(phi) X (cos(theta) sx + sin(theta) sz) to each end cavity.
pub fn build_bare_hamiltonian(p: &SystemParams) -> Result<Operator> {
    p.validate()?;
    let space = bare_space(p)?;
    let dim = p.n_max + 1;
    let n = p.n_cavities;
    let (num, a, ad, x) = (
        LocalOperator::number(dim),
        LocalOperator::annihilation(dim),
        LocalOperator::creation(dim),
        LocalOperator::quadrature(dim),
    );
    let mut h = Operator::zeros(&space);
    for (k, w) in p.cavity_frequencies().into_iter().enumerate() {
        h.add_product(c64::new(w, 0.0), &[(k, &num)])?;
    }
    let j = c64::new(p.hopping, 0.0);
    for k in 0..n - 1 {
        h.add_product(j, &[(k, &ad), (k + 1, &a)])?;
        h.add_product(j, &[(k, &a), (k + 1, &ad)])?;
    }
    let qubit_modes = [n, n + 1];
    add_qubit_terms(&mut h, p, qubit_modes)?;
    let coupling = qubit_coupling_local(p)?;
    for (q, &m) in qubit_modes.iter().enumerate() {
        let g = c64::new(p.g_abs * p.coupling_sign(q), 0.0);
        h.add_product(g, &[(p.qubit_cavity(q), &x), (m, &coupling)])?;
    }
    h.mark_hermitian()
}

/// Coefficient of `X_k (cos(theta) sx_q + sin(theta) sz_q)` for each transform row k
/// and qubit q.
pub fn supermode_couplings(p: &SystemParams, t: &SupermodeTransform) -> Vec<[f64; 2]> {
    t.matrix.iter().map(|row| [0, 1].map(|q| p.g_abs * p.coupling_sign(q) * row[p.qubit_cavity(q)])).collect()
}

/// Normal-mode Hamiltonian: free supermodes plus each qubit's coupling
/// redistributed over the normal-mode quadratures through the transform.
pub fn build_supermode_hamiltonian(p: &SystemParams) -> Result<Operator> {
    p.validate()?;
    let t = supermode_transform(p)?;
    let space = supermode_space(p)?;
    let dim = p.n_max + 1;
    let (num, x) = (LocalOperator::number(dim), LocalOperator::quadrature(dim));
    let modes = row_modes(&t, p.n_cavities);
    let mut h = Operator::zeros(&space);
    for (r, &m) in modes.iter().enumerate() {
        h.add_product(c64::new(t.mode_frequencies[r], 0.0), &[(m, &num)])?;
    }
    let qubit_modes = [p.n_cavities, p.n_cavities + 1];
    add_qubit_terms(&mut h, p, qubit_modes)?;
    let coupling = qubit_coupling_local(p)?;
    for (r, coeffs) in supermode_couplings(p, &t).iter().enumerate() {
        for (q, &qm) in qubit_modes.iter().enumerate() {
            if coeffs[q] != 0.0 {
                h.add_product(c64::new(coeffs[q], 0.0), &[(modes[r], &x), (qm, &coupling)])?;
            }
        }
    }
    h.mark_hermitian()
}

pub fn build_hamiltonian(p: &SystemParams, basis: Basis) -> Result<Operator> {
    match basis {
        Basis::Bare => build_bare_hamiltonian(p),
        Basis::Supermode => build_supermode_hamiltonian(p),
    }
}

/// Drive coupling operator sqrt(2) (a_1 + a_1^dag). In the two-cavity
/// supermode basis this is exactly X_S + X_A.
pub fn drive_operator(p: &SystemParams, basis: Basis) -> Result<Operator> {
    p.validate()?;
    let dim = p.n_max + 1;
    let x = LocalOperator::quadrature(dim);
    let s2 = std::f64::consts::SQRT_2;
    match basis {
        Basis::Bare => {
            let space = bare_space(p)?;
            let mut op = Operator::zeros(&space);
            op.add_product(c64::new(s2, 0.0), &[(0, &x)])?;
            op.mark_hermitian()
        }
        Basis::Supermode => {
            let t = supermode_transform(p)?;
            let space = supermode_space(p)?;
            let mut op = Operator::zeros(&space);
            for (r, &m) in row_modes(&t, p.n_cavities).iter().enumerate() {
                let c = s2 * t.matrix[r][0];
                if c != 0.0 {
                    op.add_product(c64::new(c, 0.0), &[(m, &x)])?;
                }
            }
            op.mark_hermitian()
        }
    }
}

/// E(t) cos(omega_d t) X_d at time `t`.
pub fn drive_hamiltonian(p: &SystemParams, pulse: &PulseSpec, t: f64, basis: Basis) -> Result<Operator> {
    let field = pulse.field(t)?;
    Ok(drive_operator(p, basis)?.scaled(c64::new(field, 0.0)))
}
