//! Husimi portraits of energy eigenstates over the mean-field phase space.
//!
//! Uses SU(2) coherent states `|Q, P>` with mode-1 weight `1/2 - P`, mode-2 weight
//! `1/2 + P` and the relative phase `Q` carried by mode 2.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::ln_factorials;
use crate::meanfield::{check_resolution, extreme, grid_axes, locus_cloud, wrap_phase, PhasePoint};
use crate::spectrum::{LevelIndex, ModelParams};
use crate::states::{same_params, BasisTransform, FockBasisState};

/// Default Husimi grid resolution per axis.
pub const DEFAULT_GRID: usize = 200;

/// `|sqrt(C(N, n1)) (1/2 - P)^(n1/2) (1/2 + P)^((N - n1)/2)|` for every `n1`.
fn coherent_magnitudes(n: usize, p: f64, ln_fact: &[f64]) -> Vec<f64> {
    let (w1, w2) = (0.5 - p, 0.5 + p);
    (0..=n)
        .map(|n1| {
            let n2 = n - n1;
            let mut ln = ln_fact[n] - ln_fact[n1] - ln_fact[n2];
            // 0^0 = 1 at the edges of phase space.
            if n1 > 0 {
                ln += n1 as f64 * w1.ln();
            }
            if n2 > 0 {
                ln += n2 as f64 * w2.ln();
            }
            (0.5 * ln).exp()
        })
        .collect()
}

/// `amplitude(n1) = sqrt(C(N, n1)) (1/2 - P)^(n1/2) (1/2 + P)^((N - n1)/2) e^{i Q (N - n1)}`.
pub fn coherent_state(params: &ModelParams, point: &PhasePoint) -> FockBasisState {
    let n = params.n();
    let mags = coherent_magnitudes(n, point.p(), &ln_factorials(n));
    let amplitudes = mags
        .iter()
        .enumerate()
        .map(|(n1, &r)| Complex64::from_polar(r, point.q() * (n - n1) as f64))
        .collect();
    FockBasisState::from_raw(*params, amplitudes)
}

/// `|<Q_i, P_j | m>|^2` on the grid `Q_i = -pi + 2 pi i / nQ`, `P_j = -1/2 + j / (nP - 1)`.
#[derive(Debug, Clone)]
pub struct HusimiGrid {
    pub params: ModelParams,
    pub level: LevelIndex,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// `values[[i, j]]` at `(Q_i, P_j)`.
    pub values: Array2<f64>,
}

/// Husimi function of the energy eigenstate `|m>`.
pub fn husimi(
    params: &ModelParams,
    m: LevelIndex,
    transform: &BasisTransform,
    n_q: usize,
    n_p: usize,
) -> Result<HusimiGrid> {
    check_resolution(n_q, n_p)?;
    same_params(params, transform.params())?;
    let column = transform.column(m)?;
    let n = params.n();
    let ln_fact = ln_factorials(n);
    let (q, p) = grid_axes(n_q, n_p);
    // <Q,P|m> = sum_n1 mag(n1) x(n1) z^(N - n1) with z = e^{-iQ}: a polynomial in z,
    // evaluated by Horner's rule for every Q of a P column.
    let columns: Vec<Vec<f64>> = p
        .par_iter()
        .map(|&pj| {
            let weights: Vec<f64> = coherent_magnitudes(n, pj, &ln_fact)
                .iter()
                .zip(&column)
                .map(|(a, b)| a * b)
                .collect();
            q.iter()
                .map(|&qi| {
                    let z = Complex64::from_polar(1.0, -qi);
                    let value = weights
                        .iter()
                        .fold(Complex64::new(0.0, 0.0), |acc, &w| acc * z + w);
                    value.norm_sqr().min(1.0)
                })
                .collect()
        })
        .collect();
    let mut values = Array2::zeros((n_q, n_p));
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            values[[i, j]] = *v;
        }
    }
    Ok(HusimiGrid {
        params: *params,
        level: m,
        q,
        p,
        values,
    })
}

impl HusimiGrid {
    /// `(i, j, value)` of the largest node.
    pub fn argmax(&self) -> (usize, usize, f64) {
        extreme(&self.values, |a, b| a > b)
    }

    pub fn total(&self) -> f64 {
        self.values.sum()
    }

    pub fn cell_area(&self) -> f64 {
        2.0 * PI / self.q.len() as f64 / (self.p.len() - 1) as f64
    }

    /// Trapezoid rule in `P` (periodic rectangle rule in `Q`). The coherent-state resolution
    /// of identity makes this `2 pi / (N + 1)` for every normalised state.
    pub fn integral(&self) -> f64 {
        let last = self.p.len() - 1;
        let sum: f64 = self
            .values
            .indexed_iter()
            .map(|((_, j), v)| if j == 0 || j == last { 0.5 * v } else { *v })
            .sum();
        sum * self.cell_area()
    }

    /// Chebyshev distance, in cells, from every node to the minimum locus at coupling
    /// `gamma`. `Q` is periodic.
    pub fn locus_distance(&self) -> Array2<f64> {
        let gamma = self.params.gamma();
        let dq = 2.0 * PI / self.q.len() as f64;
        let dp = 1.0 / (self.p.len() - 1) as f64;
        let mut cloud = locus_cloud(gamma, 8 * self.q.len().max(self.p.len()));
        cloud.sort_by(|a, b| a.p().total_cmp(&b.p()));
        let chebyshev = |qi: f64, pj: f64, c: &PhasePoint| {
            let a = wrap_phase(qi - c.q()).abs() / dq;
            let b = (pj - c.p()).abs() / dp;
            a.max(b)
        };
        let rows: Vec<Vec<f64>> = self
            .q
            .par_iter()
            .map(|&qi| {
                self.p
                    .iter()
                    .map(|&pj| {
                        // Walk outwards in P from the node; stop once |dP| alone exceeds the best.
                        let start = cloud.partition_point(|c| c.p() < pj);
                        let mut best = f64::INFINITY;
                        for c in cloud[start..].iter() {
                            if (c.p() - pj) / dp >= best {
                                break;
                            }
                            best = best.min(chebyshev(qi, pj, c));
                        }
                        for c in cloud[..start].iter().rev() {
                            if (pj - c.p()) / dp >= best {
                                break;
                            }
                            best = best.min(chebyshev(qi, pj, c));
                        }
                        best
                    })
                    .collect()
            })
            .collect();
        Array2::from_shape_vec((self.q.len(), self.p.len()), rows.concat()).expect("grid shape")
    }

    /// Fraction of the grid mass on nodes within `cells` of the minimum locus.
    pub fn mass_near_locus(&self, cells: f64) -> f64 {
        let distance = self.locus_distance();
        let near: f64 = self
            .values
            .iter()
            .zip(distance.iter())
            .filter(|(_, d)| **d <= cells)
            .map(|(v, _)| v)
            .sum();
        near / self.total()
    }
}
