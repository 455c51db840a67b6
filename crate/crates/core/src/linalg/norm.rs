//! Spectral norms and top singular pairs.
//!
//! Small matrices go through the exact Jacobi SVD; larger ones use power
//! iteration on the Gram matrix from a fixed seed vector.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::cmatrix::{inner, vec_norm, CMatrix};
use super::svd::{singular_values, svd};
use crate::error::{Error, Result};

/// Matrices whose smaller side is at most this go through the exact SVD.
pub const EXACT_SVD_LIMIT: usize = 64;

const POWER_MAX_ITERS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
}

pub fn op_norm(m: &CMatrix, tol: f64) -> NormEstimate {
    if m.rows().min(m.cols()) == 0 || m.is_zero() {
        return NormEstimate {
            value: 0.0,
            residual: 0.0,
            iterations: 0,
        };
    }
    if m.rows().min(m.cols()) <= EXACT_SVD_LIMIT {
        let (s, sweeps) = singular_values(m);
        return NormEstimate {
            value: s[0],
            residual: 0.0,
            iterations: sweeps,
        };
    }
    power_norm(m, tol, POWER_MAX_ITERS).0
}

/// Shorthand for `op_norm(m, 1e-12).value`.
pub fn norm(m: &CMatrix) -> f64 {
    op_norm(m, 1e-12).value
}

/// The fixed start vector: unit modulus entries with index-dependent phases.
pub fn seed_vector(n: usize) -> Vec<C64> {
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|j| C64::from_polar(scale, 0.618_033_988_749_895 * j as f64 + 0.25))
        .collect()
}

/// Power iteration on `M^*M`. Returns the estimate and the final right vector.
///
/// `residual` is `‖M^*M x − λx‖ / (2σ)`, the first-order size of the
/// Rayleigh-quotient bracket translated to the singular value.
pub fn power_norm(m: &CMatrix, tol: f64, max_iters: usize) -> (NormEstimate, Vec<C64>) {
    let mut x = seed_vector(m.cols());
    let mut est = NormEstimate {
        value: 0.0,
        residual: f64::INFINITY,
        iterations: 0,
    };
    for it in 1..=max_iters {
        let y = m.mul_vec(&x);
        let z = m.adjoint_mul_vec(&y);
        let lambda = inner(&x, &z).re.max(0.0);
        let sigma = lambda.sqrt();
        let res: f64 = z
            .iter()
            .zip(&x)
            .map(|(zi, xi)| (zi - xi * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        est = NormEstimate {
            value: sigma,
            residual: if sigma > 0.0 { res / (2.0 * sigma) } else { res },
            iterations: it,
        };
        let zn = vec_norm(&z);
        if zn == 0.0 {
            break;
        }
        x = z.iter().map(|zi| zi / zn).collect();
        if est.residual <= tol {
            break;
        }
    }
    (est, x)
}

/// Left vector, singular value and right vector of the top singular triple.
pub fn top_singular_pair(m: &CMatrix, tol: f64) -> Result<(Vec<C64>, f64, Vec<C64>)> {
    if m.rows().min(m.cols()) == 0 || m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if m.rows().min(m.cols()) <= EXACT_SVD_LIMIT {
        let d = svd(m);
        return Ok((d.u.column(0), d.s[0], d.v.column(0)));
    }
    let (_, v) = power_norm(m, tol, POWER_MAX_ITERS);
    let mv = m.mul_vec(&v);
    let sigma = vec_norm(&mv);
    if sigma == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok((mv.iter().map(|z| z / sigma).collect(), sigma, v))
}

/// A few warm-started power steps on `M^*M` from `v`, which is updated in
/// place. Returns the left vector and `‖Mv‖`, a lower estimate of `σ_max`.
///
/// Cheap enough to call once per subgradient step; any vector of the top
/// singular subspace is a valid subgradient direction.
pub fn refine_top_pair(m: &CMatrix, v: &mut Vec<C64>, steps: usize) -> (Vec<C64>, f64) {
    if v.len() != m.cols() || vec_norm(v) == 0.0 {
        *v = seed_vector(m.cols());
    }
    let mut prev = -1.0;
    for _ in 0..steps {
        let y = m.mul_vec(v);
        let z = m.adjoint_mul_vec(&y);
        let zn = vec_norm(&z);
        if zn == 0.0 {
            break;
        }
        *v = z.iter().map(|zi| zi / zn).collect();
        if (zn - prev).abs() <= 1e-14 * zn {
            break;
        }
        prev = zn;
    }
    let mv = m.mul_vec(v);
    let sigma = vec_norm(&mv);
    if sigma == 0.0 {
        return (vec![C64::new(0.0, 0.0); m.rows()], 0.0);
    }
    (mv.iter().map(|z| z / sigma).collect(), sigma)
}

/// Smallest singular value of `m` viewed as a map on its column space:
/// 0 when `m` has more columns than rows.
pub fn min_singular_value(m: &CMatrix) -> f64 {
    if m.cols() == 0 {
        return f64::INFINITY;
    }
    if m.cols() > m.rows() {
        return 0.0;
    }
    let (s, _) = singular_values(m);
    *s.last().expect("nonempty")
}
