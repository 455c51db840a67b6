//! Nearest operator supported on a fixed pattern, in operator norm.
//!
//! Minimises the convex, nonsmooth `f(S) = σ_max(T − S)` over matrices `S`
//! supported on a boolean pattern by projected subgradient descent. The
//! subgradient of `σ_max` at `D = T − S` is `u v^*` for a top singular
//! pair, projected onto the pattern.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::cmatrix::CMatrix;
use super::norm::{norm, refine_top_pair};
use crate::error::{Error, Result};

/// Iterations between exact confirmations of the power estimate.
const CONFIRM_EVERY: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct BandOptions {
    pub iters: usize,
    pub tol: f64,
    /// A certified lower bound on the optimum; switches to Polyak steps.
    pub lower: Option<f64>,
}

impl Default for BandOptions {
    fn default() -> Self {
        BandOptions {
            iters: 300,
            tol: 1e-8,
            lower: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BandResult {
    #[serde(skip)]
    pub s: CMatrix,
    pub dist: f64,
    pub lower: f64,
    pub converged: bool,
    pub iterations: usize,
}

pub fn band_nearness(t: &CMatrix, pattern: &[bool], opts: BandOptions) -> Result<BandResult> {
    let (rows, cols) = t.shape();
    if pattern.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "pattern has {} cells for a {rows}x{cols} matrix",
            pattern.len()
        )));
    }
    let lower = opts.lower.unwrap_or(0.0).max(0.0);
    // truncation: the canonical feasible start
    let mut s = CMatrix::from_fn(rows, cols, |i, j| {
        if pattern[i * cols + j] {
            t[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let residual = t.sub(&s)?;
    let start = norm(&residual);
    let mut best = BandResult {
        s: s.clone(),
        dist: start,
        lower,
        converged: start - lower <= opts.tol,
        iterations: 0,
    };
    if best.converged || residual.is_zero() {
        best.converged = true;
        return Ok(best);
    }

    let mut v = Vec::new();
    // iterate with the lowest power estimate, awaiting an exact norm
    let mut pending: Option<(CMatrix, f64)> = None;
    let confirm = |best: &mut BandResult, pending: &mut Option<(CMatrix, f64)>| -> Result<()> {
        if let Some((cand, _)) = pending.take() {
            let exact = norm(&t.sub(&cand)?);
            if exact < best.dist {
                best.s = cand;
                best.dist = exact;
            }
        }
        Ok(())
    };
    for k in 0..opts.iters {
        let d = t.sub(&s)?;
        let (u, sigma) = refine_top_pair(&d, &mut v, 40);
        best.iterations = k + 1;
        if sigma < best.dist && pending.as_ref().is_none_or(|p| sigma < p.1) {
            pending = Some((s.clone(), sigma));
        }
        if let Some(&(_, est)) = pending.as_ref() {
            if (k + 1) % CONFIRM_EVERY == 0 || est - lower <= opts.tol {
                confirm(&mut best, &mut pending)?;
            }
        }
        if best.dist - lower <= opts.tol {
            best.converged = true;
            break;
        }
        let mut g_sq = 0.0;
        for i in 0..rows {
            for j in 0..cols {
                if pattern[i * cols + j] {
                    g_sq += u[i].norm_sqr() * v[j].norm_sqr();
                }
            }
        }
        if g_sq <= 1e-30 {
            // the top singular pair lives off the pattern: no feasible descent
            break;
        }
        let step = match opts.lower {
            Some(_) => (sigma - lower).max(0.0) / g_sq,
            None => start / ((k as f64 + 1.0).sqrt() * g_sq.sqrt()),
        };
        if step == 0.0 {
            break;
        }
        for i in 0..rows {
            if u[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..cols {
                if pattern[i * cols + j] {
                    s[(i, j)] += u[i] * v[j].conj() * step;
                }
            }
        }
    }
    confirm(&mut best, &mut pending)?;
    let last = norm(&t.sub(&s)?);
    if last < best.dist {
        best.s = s;
        best.dist = last;
    }
    if best.dist - lower <= opts.tol {
        best.converged = true;
    }
    Ok(best)
}
