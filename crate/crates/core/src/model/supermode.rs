use serde::Serialize;

use super::params::SystemParams;
use crate::error::Result;

/// Orthogonal map from bare cavity operators to normal-mode operators:
/// `a_k = sum_n matrix[k][n] a_n`. Rows are (S, A) for two cavities and
/// (S1, A, S2) for three.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupermodeTransform {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub mode_frequencies: Vec<f64>,
}

impl SupermodeTransform {
    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn row(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Largest |M M^T - I| entry.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| self.matrix[i][k] * self.matrix[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// One-photon hopping matrix of the bare array (cavity frequencies on the
/// diagonal, J between neighbours).
pub fn hopping_matrix(p: &SystemParams) -> Vec<Vec<f64>> {
    let w = p.cavity_frequencies();
    let n = w.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        w[i]
                    } else if i.abs_diff(j) == 1 {
                        p.hopping
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

pub fn supermode_transform(p: &SystemParams) -> Result<SupermodeTransform> {
    p.validate()?;
    let (j, wc, d) = (p.hopping, p.omega_c, p.delta);
    if p.n_cavities == 2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        return Ok(SupermodeTransform {
            labels: vec!["S".into(), "A".into()],
            matrix: vec![vec![h, h], vec![h, -h]],
            mode_frequencies: vec![wc + j, wc - j],
        });
    }
    let omega = (8.0 * j * j + d * d).sqrt();
    let n_minus = (8.0 * j * j + (d - omega).powi(2)).sqrt();
    let n_plus = (8.0 * j * j + (d + omega).powi(2)).sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(SupermodeTransform {
        labels: vec!["S1".into(), "A".into(), "S2".into()],
        matrix: vec![
            vec![2.0 * j / n_minus, (d - omega) / n_minus, 2.0 * j / n_minus],
            vec![-h, 0.0, h],
            vec![2.0 * j / n_plus, (d + omega) / n_plus, 2.0 * j / n_plus],
        ],
        mode_frequencies: vec![(2.0 * wc + d - omega) / 2.0, wc, (2.0 * wc + d + omega) / 2.0],
    })
}
