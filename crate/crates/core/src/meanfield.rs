//! Classical energy landscape `H(Q, P) = -u + gamma u^2` with
//! `u = sqrt(1 - 4 P^2) cos Q`, and its degenerate minimum locus.

use std::f64::consts::PI;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A point of the mean-field phase space: phase difference `Q in [-pi, pi)` and
/// population imbalance `P in [-1/2, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    q: f64,
    p: f64,
}

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_phase(q: f64) -> f64 {
    if (-PI..PI).contains(&q) {
        return q;
    }
    let w = (q + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid may round up to exactly 2 pi.
    if w >= PI {
        -PI
    } else {
        w
    }
}

impl PhasePoint {
    /// `Q` is wrapped into `[-pi, pi)`; `|P| > 1/2` is a domain error.
    pub fn new(q: f64, p: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::Domain(format!("Q must be finite, got {q}")));
        }
        // Negated so NaN is rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(p.abs() <= 0.5) {
            return Err(Error::Domain(format!("|P| must be <= 1/2, got {p}")));
        }
        Ok(Self {
            q: wrap_phase(q),
            p,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `sqrt(1 - 4 P^2) cos Q`.
    pub fn u(&self) -> f64 {
        (1.0 - 4.0 * self.p * self.p).max(0.0).sqrt() * self.q.cos()
    }
}

/// `-sqrt(1 - 4P^2) cos Q + gamma (1 - 4P^2) cos^2 Q`.
pub fn classical_energy(gamma: f64, point: &PhasePoint) -> f64 {
    let u = point.u();
    -u + gamma * u * u
}

/// Global minimum of the landscape: `-1/(4 gamma)` for `gamma > 1/2`, else `gamma - 1` at the origin.
pub fn minimum_energy(gamma: f64) -> f64 {
    if gamma > 0.5 {
        -1.0 / (4.0 * gamma)
    } else {
        gamma - 1.0
    }
}

/// Largest `|P|` reached by the locus, `(1/2) sqrt(1 - 1/(4 gamma^2))`.
pub fn locus_p_max(gamma: f64) -> f64 {
    if gamma > 0.5 {
        0.5 * (1.0 - 1.0 / (4.0 * gamma * gamma)).sqrt()
    } else {
        0.0
    }
}

/// `Q >= 0` on the locus at imbalance `p`, `arccos(1 / (2 gamma sqrt(1 - 4 p^2)))`.
fn locus_q(gamma: f64, p: f64) -> f64 {
    let r = (1.0 - 4.0 * p * p).max(0.0).sqrt();
    (1.0 / (2.0 * gamma * r)).clamp(-1.0, 1.0).acos()
}

/// Samples of the degenerate minimum curve `sqrt(1 - 4P^2) cos Q = 1/(2 gamma)` as a closed
/// polyline: the `Q >= 0` branch with `P` increasing, then the `Q <= 0` branch with `P`
/// decreasing, both uniform in `P`. For `gamma <= 1/2` the minimum is the single point `(0, 0)`.
/// `n_points` below 2 is treated as 2.
pub fn minimum_locus(gamma: f64, n_points: usize) -> Vec<PhasePoint> {
    if gamma <= 0.5 {
        return vec![PhasePoint { q: 0.0, p: 0.0 }];
    }
    let n_points = n_points.max(2);
    let p_max = locus_p_max(gamma);
    let upper = n_points.div_ceil(2);
    let lower = n_points - upper;
    let p_at = |j: usize, count: usize| {
        if count == 1 {
            0.0
        } else {
            -p_max + 2.0 * p_max * j as f64 / (count - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(n_points);
    for j in 0..upper {
        let p = p_at(j, upper);
        out.push(PhasePoint {
            q: locus_q(gamma, p),
            p,
        });
    }
    for j in (0..lower).rev() {
        let p = p_at(j, lower);
        out.push(PhasePoint {
            q: -locus_q(gamma, p),
            p,
        });
    }
    out
}

/// Dense point cloud on the locus: the uniform-in-`P` polyline plus points uniform in `Q`,
/// which resolve the ends of the curve where `Q` changes quickly with `P`.
pub fn locus_cloud(gamma: f64, per_axis: usize) -> Vec<PhasePoint> {
    let mut out = minimum_locus(gamma, 2 * per_axis);
    if gamma <= 0.5 {
        return out;
    }
    let q_max = (1.0 / (2.0 * gamma)).acos();
    let c = 1.0 / (2.0 * gamma);
    for i in 0..per_axis {
        let q = -q_max + 2.0 * q_max * i as f64 / (per_axis - 1).max(1) as f64;
        let cos = q.cos();
        let p = 0.5 * (1.0 - (c / cos).powi(2)).max(0.0).sqrt();
        out.push(PhasePoint { q, p });
        out.push(PhasePoint { q, p: -p });
    }
    out
}

/// `H(Q, P)` sampled on `Q_i = -pi + 2 pi i / nQ` and `P_j = -1/2 + j / (nP - 1)`.
#[derive(Debug, Clone)]
pub struct LandscapeGrid {
    pub gamma: f64,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// `values[[i, j]] = H(Q_i, P_j)`.
    pub values: Array2<f64>,
}

/// Node coordinates shared by the landscape and Husimi grids.
pub fn grid_axes(n_q: usize, n_p: usize) -> (Vec<f64>, Vec<f64>) {
    let q = (0..n_q)
        .map(|i| -PI + 2.0 * PI * i as f64 / n_q as f64)
        .collect();
    let p = (0..n_p)
        .map(|j| -0.5 + j as f64 / (n_p - 1) as f64)
        .collect();
    (q, p)
}

pub(crate) fn check_resolution(n_q: usize, n_p: usize) -> Result<()> {
    if n_q < 16 || n_p < 16 {
        return Err(Error::Validation(format!(
            "grid resolution must be at least 16 x 16, got {n_q} x {n_p}"
        )));
    }
    Ok(())
}

pub fn landscape_grid(gamma: f64, n_q: usize, n_p: usize) -> Result<LandscapeGrid> {
    check_resolution(n_q, n_p)?;
    let (q, p) = grid_axes(n_q, n_p);
    let rows: Vec<Vec<f64>> = q
        .par_iter()
        .map(|&qi| {
            p.iter()
                .map(|&pj| classical_energy(gamma, &PhasePoint { q: qi, p: pj }))
                .collect()
        })
        .collect();
    let values = Array2::from_shape_vec((n_q, n_p), rows.concat()).expect("grid shape");
    Ok(LandscapeGrid {
        gamma,
        q,
        p,
        values,
    })
}

impl LandscapeGrid {
    /// `(i, j, value)` of the smallest node; the first one in row-major order on ties.
    pub fn argmin(&self) -> (usize, usize, f64) {
        extreme(&self.values, |a, b| a < b)
    }

    pub fn argmax(&self) -> (usize, usize, f64) {
        extreme(&self.values, |a, b| a > b)
    }

    /// Larger of the two grid spacings.
    pub fn step(&self) -> f64 {
        let dq = 2.0 * PI / self.q.len() as f64;
        let dp = 1.0 / (self.p.len() - 1) as f64;
        dq.max(dp)
    }
}

pub(crate) fn extreme(
    values: &Array2<f64>,
    better: impl Fn(f64, f64) -> bool,
) -> (usize, usize, f64) {
    let mut best = (0, 0, values[[0, 0]]);
    for ((i, j), &v) in values.indexed_iter() {
        if better(v, best.2) {
            best = (i, j, v);
        }
    }
    best
}
