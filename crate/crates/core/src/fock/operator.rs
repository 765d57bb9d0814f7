use std::fmt;
use std::sync::Arc;

use faer::{c64, Mat, MatRef};

use super::space::{HilbertSpace, ModeKind};
use super::state::QuantumState;
use crate::error::{Error, Result};

/// Relative Hermiticity tolerance: max|M - M^dag| <= HERMITIAN_TOL * max|M|.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

/// Sparse single-mode operator, stored as (row, col, value) triples.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    dim: usize,
    entries: Vec<(usize, usize, c64)>,
}

impl LocalOperator {
    pub fn from_entries(dim: usize, entries: Vec<(usize, usize, c64)>) -> Result<Self> {
        if entries.iter().any(|&(i, j, _)| i >= dim || j >= dim) {
            return Err(Error::Range(format!("local operator entry outside dim {dim}")));
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, entries: (0..dim).map(|i| (i, i, c64::new(1.0, 0.0))).collect() }
    }

    /// Truncated ladder: <n-1|a|n> = sqrt(n).
    pub fn annihilation(dim: usize) -> Self {
        let entries = (1..dim).map(|n| (n - 1, n, c64::new((n as f64).sqrt(), 0.0))).collect();
        Self { dim, entries }
    }

    pub fn creation(dim: usize) -> Self {
        Self::annihilation(dim).adjoint()
    }

    pub fn number(dim: usize) -> Self {
        let entries = (1..dim).map(|n| (n, n, c64::new(n as f64, 0.0))).collect();
        Self { dim, entries }
    }

    /// a + a^dag
    pub fn quadrature(dim: usize) -> Self {
        let mut entries = Self::annihilation(dim).entries;
        entries.extend(Self::creation(dim).entries);
        Self { dim, entries }
    }

    /// Basis (g, e); sigma_z = |e><e| - |g><g|, sigma_+ = |e><g|,
    /// sigma_y = -i (sigma_+ - sigma_-) so that [sigma_x, sigma_y] = 2i sigma_z.
    pub fn pauli(axis: PauliAxis) -> Self {
        let one = c64::new(1.0, 0.0);
        let i = c64::new(0.0, 1.0);
        let entries = match axis {
            PauliAxis::X => vec![(0, 1, one), (1, 0, one)],
            PauliAxis::Y => vec![(0, 1, i), (1, 0, -i)],
            PauliAxis::Z => vec![(0, 0, -one), (1, 1, one)],
            PauliAxis::Plus => vec![(1, 0, one)],
            PauliAxis::Minus => vec![(0, 1, one)],
        };
        Self { dim: 2, entries }
    }

    /// Projector |k><k| on one mode.
    pub fn projector(dim: usize, k: usize) -> Result<Self> {
        Self::from_entries(dim, vec![(k, k, c64::new(1.0, 0.0))])
    }

    pub fn adjoint(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&(i, j, v)| (j, i, v.conj())).collect() }
    }

    pub fn scaled_real(&self, s: f64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&(i, j, v)| (i, j, v * s)).collect() }
    }

    /// Entry-wise linear combination `self + s * other`.
    pub fn plus_scaled(&self, s: f64, other: &LocalOperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Type("local operator dimensions differ".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|&(i, j, v)| (i, j, v * s)));
        Ok(Self { dim: self.dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, c64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Mat<c64> {
        let mut m = Mat::<c64>::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }
}

/// Dense operator bound to a Hilbert space.
#[derive(Clone)]
pub struct Operator {
    space: Arc<HilbertSpace>,
    matrix: Mat<c64>,
    hermitian: bool,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("space", &self.space.to_string())
            .field("hermitian", &self.hermitian)
            .finish_non_exhaustive()
    }
}

impl Operator {
    pub fn zeros(space: &Arc<HilbertSpace>) -> Self {
        let d = space.total_dim();
        Self { space: space.clone(), matrix: Mat::zeros(d, d), hermitian: true }
    }

    pub fn identity(space: &Arc<HilbertSpace>) -> Self {
        let d = space.total_dim();
        Self { space: space.clone(), matrix: Mat::identity(d, d), hermitian: true }
    }

    /// Wrap a dense matrix. The Hermitian flag starts unset; see [`Operator::mark_hermitian`].
    pub fn from_matrix(space: &Arc<HilbertSpace>, matrix: Mat<c64>) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Type(format!("matrix is {}x{}, space has dim {d}", matrix.nrows(), matrix.ncols())));
        }
        Ok(Self { space: space.clone(), matrix, hermitian: false })
    }

    /// Tensor product of local factors on distinct modes, identity elsewhere.
    pub fn product(space: &Arc<HilbertSpace>, factors: &[(usize, &LocalOperator)]) -> Result<Self> {
        let mut op = Self::zeros(space);
        op.add_product(c64::new(1.0, 0.0), factors)?;
        if factors.iter().all(|(_, l)| is_local_hermitian(l)) {
            op.hermitian = true;
        }
        Ok(op)
    }

    pub fn embed(space: &Arc<HilbertSpace>, mode: usize, local: &LocalOperator) -> Result<Self> {
        Self::product(space, &[(mode, local)])
    }

    /// Accumulate `coef * (factor_1 (x) factor_2 (x) ...)` without forming
    /// intermediate Kronecker products. Clears the Hermitian flag.
    pub fn add_product(&mut self, coef: c64, factors: &[(usize, &LocalOperator)]) -> Result<()> {
        let n = self.space.n_modes();
        let mut per_mode: Vec<Option<&LocalOperator>> = vec![None; n];
        for &(mode, local) in factors {
            let spec = self.space.mode(mode)?;
            if spec.dim != local.dim {
                return Err(Error::Type(format!(
                    "local operator of dim {} on mode '{}' of dim {}",
                    local.dim, spec.label, spec.dim
                )));
            }
            if per_mode[mode].replace(local).is_some() {
                return Err(Error::Contract(format!("mode {mode} appears twice in a product")));
            }
        }
        let mut acc: Vec<(usize, usize, c64)> = vec![(0, 0, coef)];
        for (k, local) in per_mode.iter().enumerate() {
            let s = self.space.stride(k);
            let dim = self.space.modes()[k].dim;
            let mut next = Vec::with_capacity(acc.len() * dim);
            for &(r, c, v) in &acc {
                match local {
                    Some(l) => {
                        for &(i, j, w) in &l.entries {
                            next.push((r + i * s, c + j * s, v * w));
                        }
                    }
                    None => next.extend((0..dim).map(|i| (r + i * s, c + i * s, v))),
                }
            }
            acc = next;
        }
        for (r, c, v) in acc {
            self.matrix[(r, c)] += v;
        }
        self.hermitian = false;
        Ok(())
    }

    /// Verify Hermiticity and set the flag, or fail with a contract violation.
    pub fn mark_hermitian(mut self) -> Result<Self> {
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::Contract(format!("operator is not Hermitian (relative defect {defect:.3e})")));
        }
        self.hermitian = true;
        Ok(self)
    }

    /// max|M - M^dag| / max|M| (0 for the zero matrix).
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for j in 0..d {
            for i in j..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst / scale
    }

    pub fn max_abs(&self) -> f64 {
        let d = self.dim();
        let mut m = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                m = m.max(self.matrix[(i, j)].norm());
            }
        }
        m
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.matrix[(row, col)]
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        let d = self.dim();
        (0..d).all(|j| (0..d).all(|i| self.matrix[(i, j)].im == 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint().to_owned(), hermitian: self.hermitian }
    }

    pub fn scaled(&self, s: c64) -> Self {
        let d = self.dim();
        Self {
            space: self.space.clone(),
            matrix: Mat::from_fn(d, d, |i, j| self.matrix[(i, j)] * s),
            hermitian: self.hermitian && s.im == 0.0,
        }
    }

    /// `self += coef * other`.
    pub fn add_scaled(&mut self, coef: c64, other: &Operator) -> Result<()> {
        self.check_space(other.space())?;
        let d = self.dim();
        for j in 0..d {
            for i in 0..d {
                let v = other.matrix[(i, j)];
                if v != c64::new(0.0, 0.0) {
                    self.matrix[(i, j)] += coef * v;
                }
            }
        }
        self.hermitian = self.hermitian && other.hermitian && coef.im == 0.0;
        Ok(())
    }

    pub fn compose(&self, rhs: &Operator) -> Result<Self> {
        self.check_space(rhs.space())?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix * &rhs.matrix, hermitian: false })
    }

    /// [self, rhs]
    pub fn commutator(&self, rhs: &Operator) -> Result<Self> {
        let mut ab = self.compose(rhs)?;
        ab.add_scaled(c64::new(-1.0, 0.0), &rhs.compose(self)?)?;
        ab.hermitian = false;
        Ok(ab)
    }

    /// Matrix-vector product (no normalization).
    pub fn apply(&self, state: &QuantumState) -> Result<QuantumState> {
        self.check_space(state.space())?;
        let out = matvec(self.matrix.as_ref(), state.amplitudes());
        QuantumState::from_amplitudes(&self.space, out)
    }

    pub(crate) fn check_space(&self, other: &Arc<HilbertSpace>) -> Result<()> {
        if Arc::ptr_eq(&self.space, other) || *self.space == **other {
            Ok(())
        } else {
            Err(Error::Type(format!("space mismatch: {} vs {}", self.space, other)))
        }
    }
}

fn is_local_hermitian(l: &LocalOperator) -> bool {
    let d = l.to_dense();
    (0..l.dim).all(|i| (0..l.dim).all(|j| (d[(i, j)] - d[(j, i)].conj()).norm() == 0.0))
}

pub(crate) fn matvec(m: MatRef<'_, c64>, x: &[c64]) -> Vec<c64> {
    let col = faer::Col::<c64>::from_fn(x.len(), |i| x[i]);
    let y = m * &col;
    y.iter().copied().collect()
}

fn require_kind(space: &HilbertSpace, mode: usize, kind: ModeKind) -> Result<usize> {
    let spec = space.mode(mode)?;
    if spec.kind != kind {
        let want = match kind {
            ModeKind::Cavity => "a cavity",
            ModeKind::Qubit => "a qubit",
        };
        return Err(Error::Type(format!("mode {mode} ('{}') is not {want}", spec.label)));
    }
    Ok(spec.dim)
}

pub fn annihilation(space: &Arc<HilbertSpace>, mode: usize) -> Result<Operator> {
    let dim = require_kind(space, mode, ModeKind::Cavity)?;
    Operator::embed(space, mode, &LocalOperator::annihilation(dim))
}

pub fn creation(space: &Arc<HilbertSpace>, mode: usize) -> Result<Operator> {
    let dim = require_kind(space, mode, ModeKind::Cavity)?;
    Operator::embed(space, mode, &LocalOperator::creation(dim))
}

pub fn number(space: &Arc<HilbertSpace>, mode: usize) -> Result<Operator> {
    let dim = require_kind(space, mode, ModeKind::Cavity)?;
    Operator::embed(space, mode, &LocalOperator::number(dim))
}

pub fn pauli(space: &Arc<HilbertSpace>, qubit: usize, axis: PauliAxis) -> Result<Operator> {
    require_kind(space, qubit, ModeKind::Qubit)?;
    Operator::embed(space, qubit, &LocalOperator::pauli(axis))
}
