//! One-sided (Hestenes) Jacobi SVD for dense complex matrices.

use num_complex::Complex64 as C64;

use super::cmatrix::CMatrix;

const MAX_SWEEPS: usize = 100;
const ORTH_TOL: f64 = 1e-15;

/// Thin SVD `A = U diag(s) V^*` with `s` sorted descending and
/// `k = min(rows, cols)` columns in `U` and `V`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
    pub sweeps: usize,
}

pub fn svd(a: &CMatrix) -> Svd {
    if a.rows() >= a.cols() {
        svd_tall(a, true)
    } else {
        // A^* = U' S V'^*  =>  A = V' S U'^*
        let t = svd_tall(&a.adjoint(), true);
        Svd {
            u: t.v,
            s: t.s,
            v: t.u,
            sweeps: t.sweeps,
        }
    }
}

/// Singular values only, sorted descending; `min(rows, cols)` of them.
pub fn singular_values(a: &CMatrix) -> (Vec<f64>, usize) {
    let t = if a.rows() >= a.cols() {
        svd_tall(a, false)
    } else {
        svd_tall(&a.adjoint(), false)
    };
    (t.s, t.sweeps)
}

fn svd_tall(a: &CMatrix, want_vectors: bool) -> Svd {
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = if want_vectors {
        (0..n)
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); n];
                e[j] = C64::new(1.0, 0.0);
                e
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (ap, aq) = (&cols[p], &cols[q]);
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = C64::new(0.0, 0.0);
                    for i in 0..m {
                        alpha += ap[i].norm_sqr();
                        beta += aq[i].norm_sqr();
                        gamma += ap[i].conj() * aq[i];
                    }
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                if g == 0.0 || g <= ORTH_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                if want_vectors {
                    rotate(&mut v, p, q, phase, c, s);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (super::cmatrix::vec_norm(c), j))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let s: Vec<f64> = order.iter().map(|&(sv, _)| sv).collect();

    let (u, vm) = if want_vectors {
        let u = CMatrix::from_fn(m, n, |i, k| {
            let (sv, j) = order[k];
            if sv > 0.0 {
                cols[j][i] / sv
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let vm = CMatrix::from_fn(n, n, |i, k| v[order[k].1][i]);
        (u, vm)
    } else {
        (CMatrix::zeros(0, 0), CMatrix::zeros(0, 0))
    };
    Svd {
        u,
        s,
        v: vm,
        sweeps,
    }
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let ap = &mut left[p];
    let aq = &mut right[0];
    for (x, y) in ap.iter_mut().zip(aq.iter_mut()) {
        let xp = *x;
        let yq = *y * phase;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}
