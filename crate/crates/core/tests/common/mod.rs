//! Plain dense linear algebra for test oracles, independent of the library's
//! operator machinery.
#![allow(dead_code)]

use usc_array::fock::{c64, make_space, ModeSpec, Operator, QuantumState};

/// Row-major real square matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn kron(&self, o: &Dense) -> Dense {
        let n = self.n * o.n;
        Dense::from_fn(n, |i, j| self.at(i / o.n, j / o.n) * o.at(i % o.n, j % o.n))
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        Dense::from_fn(self.n, |i, j| (0..self.n).map(|k| self.at(i, k) * o.at(k, j)).sum())
    }

    pub fn add(&self, s: f64, o: &Dense) -> Dense {
        Dense { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + s * y).collect() }
    }

    pub fn scale(&self, s: f64) -> Dense {
        Dense { n: self.n, a: self.a.iter().map(|x| s * x).collect() }
    }

    pub fn transpose(&self) -> Dense {
        Dense::from_fn(self.n, |i, j| self.at(j, i))
    }
}

/// Kronecker product of a list of factors, leftmost slowest.
pub fn kron_all(factors: &[Dense]) -> Dense {
    factors[1..].iter().fold(factors[0].clone(), |acc, f| acc.kron(f))
}

/// Place `local` at position `k` among identities of the given dims.
pub fn embed(dims: &[usize], k: usize, local: &Dense) -> Dense {
    let factors: Vec<Dense> =
        dims.iter().enumerate().map(|(i, &d)| if i == k { local.clone() } else { Dense::identity(d) }).collect();
    kron_all(&factors)
}

pub fn lower(d: usize) -> Dense {
    Dense::from_fn(d, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

pub fn raise(d: usize) -> Dense {
    lower(d).transpose()
}

pub fn quad(d: usize) -> Dense {
    lower(d).add(1.0, &raise(d))
}

/// Pauli x and z in the (g, e) basis with sz = diag(-1, +1).
pub fn sx() -> Dense {
    Dense::from_fn(2, |i, j| if i != j { 1.0 } else { 0.0 })
}

pub fn sz() -> Dense {
    Dense::from_fn(2, |i, j| {
        if i == j {
            if i == 0 {
                -1.0
            } else {
                1.0
            }
        } else {
            0.0
        }
    })
}

pub fn max_diff(op: &Operator, d: &Dense) -> f64 {
    assert_eq!(op.dim(), d.n);
    let mut worst: f64 = 0.0;
    for i in 0..d.n {
        for j in 0..d.n {
            worst = worst.max((op.get(i, j) - c64::new(d.at(i, j), 0.0)).norm());
        }
    }
    worst
}

/// Wrap a dense matrix as an operator on a single flat mode of matching dim.
pub fn as_operator(d: &Dense) -> Operator {
    let space = make_space(vec![ModeSpec::cavity("flat", d.n - 1).unwrap()]).unwrap();
    let m = faer::Mat::<c64>::from_fn(d.n, d.n, |i, j| c64::new(d.at(i, j), 0.0));
    Operator::from_matrix(&space, m).unwrap().mark_hermitian().unwrap()
}

/// Jacobi eigenvalues of a real symmetric matrix, ascending.
pub fn jacobi_eigenvalues(m: &Dense) -> Vec<f64> {
    let n = m.n;
    let mut a = m.a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut e: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    e.sort_by(f64::total_cmp);
    e
}

/// exp(-i H dt) v by a Taylor series run to machine precision.
pub fn taylor_step(h: &[c64], n: usize, v: &[c64], dt: f64) -> Vec<c64> {
    let mut term = v.to_vec();
    let mut out = v.to_vec();
    for k in 1..60 {
        let next: Vec<c64> = (0..n)
            .map(|i| (0..n).map(|j| h[i * n + j] * term[j]).sum::<c64>() * c64::new(0.0, -dt / k as f64))
            .collect();
        term = next;
        out.iter_mut().zip(&term).for_each(|(o, t)| *o += t);
        if term.iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    out
}

pub fn dense_complex(h: &Operator) -> Vec<c64> {
    let n = h.dim();
    (0..n * n).map(|k| h.get(k / n, k % n)).collect()
}

/// Stepwise series propagation, psi(t) = prod exp(-i H dt) psi0.
pub fn series_oracle(h: &Operator, psi0: &QuantumState, t: f64, steps: usize) -> Vec<c64> {
    let m = dense_complex(h);
    let dt = t / steps as f64;
    (0..steps).fold(psi0.amplitudes().to_vec(), |v, _| taylor_step(&m, h.dim(), &v, dt))
}
