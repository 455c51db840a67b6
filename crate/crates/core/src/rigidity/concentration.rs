//! The parallelogram sign search and the concentration inequality.
//!
//! For an operator `T` bounded below by `η`, a partition `X = ⊔ A_i`, and
//! `B ⊆ C ⊆ Y` with `‖χ_B T‖ >= κ` and `‖χ_C T χ_{A_i}‖ <= δ < η`, some
//! `J ⊆ I` has `‖χ_{Y∖C} T χ_J T^* χ_B‖ > ε` for every
//! `ε < κ² (η² − δ²)^{1/2} / (2‖T‖)`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{min_singular_value, norm, svd, top_singular_pair, vec_norm, CMatrix};
use crate::module::ModuleOperator;

/// Largest family handled by exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 20;

const TIE_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelogramResult {
    pub signs: Vec<i8>,
    /// `‖Σ ε_i v_i‖²` for the returned signs.
    pub lhs: f64,
    /// `Σ ‖v_i‖²`.
    pub rhs: f64,
    pub exhaustive: bool,
    /// Set when the returned pattern falls short of `rhs`.
    pub below: bool,
}

fn signed_sum_sq(vs: &[Vec<C64>], signs: &[i8]) -> f64 {
    let dim = vs.first().map_or(0, |v| v.len());
    let mut acc = vec![C64::new(0.0, 0.0); dim];
    for (v, &s) in vs.iter().zip(signs) {
        for (a, &x) in acc.iter_mut().zip(v) {
            *a += x * s as f64;
        }
    }
    acc.iter().map(|z| z.norm_sqr()).sum()
}

/// A sign pattern maximising `‖Σ ε_i v_i‖²`: exhaustive over `2^(k-1)`
/// patterns (the first sign fixed to `+`) up to [`EXHAUSTIVE_LIMIT`]
/// vectors, greedy beyond. Ties go to the pattern with the smallest
/// binary encoding (bit `i` set for `−`).
pub fn parallelogram_bound(vs: &[Vec<C64>]) -> ParallelogramResult {
    let k = vs.len();
    let rhs: f64 = vs.iter().map(|v| vec_norm(v).powi(2)).sum();
    if k == 0 {
        return ParallelogramResult {
            signs: Vec::new(),
            lhs: 0.0,
            rhs,
            exhaustive: true,
            below: false,
        };
    }
    let dim = vs[0].len();
    let signs = if k <= EXHAUSTIVE_LIMIT {
        // Gray-code walk over patterns of vectors 1..k
        let mut acc: Vec<C64> = (0..dim).map(|j| vs.iter().map(|v| v[j]).sum()).collect();
        let mut code: u32 = 0;
        let mut best = (acc.iter().map(|z| z.norm_sqr()).sum::<f64>(), 0u32);
        for step in 1u32..(1 << (k - 1)) {
            let bit = step.trailing_zeros() as usize;
            code ^= 1 << bit;
            let i = bit + 1;
            let flip_to_minus = code >> bit & 1 == 1;
            let c = if flip_to_minus { -2.0 } else { 2.0 };
            for (a, &x) in acc.iter_mut().zip(&vs[i]) {
                *a += x * c;
            }
            let val: f64 = acc.iter().map(|z| z.norm_sqr()).sum();
            let scale = val.max(best.0).max(f64::MIN_POSITIVE);
            if val > best.0 + TIE_REL * scale || ((val - best.0).abs() <= TIE_REL * scale && code < best.1) {
                best = (val, code);
            }
        }
        let mut s = vec![1i8; k];
        for (i, sign) in s.iter_mut().enumerate().skip(1) {
            if best.1 >> (i - 1) & 1 == 1 {
                *sign = -1;
            }
        }
        s
    } else {
        let mut acc = vs[0].clone();
        let mut s = vec![1i8; k];
        for i in 1..k {
            let re: f64 = acc.iter().zip(&vs[i]).map(|(a, b)| (a.conj() * b).re).sum();
            let sign = if re >= 0.0 { 1i8 } else { -1 };
            s[i] = sign;
            for (a, &x) in acc.iter_mut().zip(&vs[i]) {
                *a += x * sign as f64;
            }
        }
        s
    };
    let lhs = signed_sum_sq(vs, &signs);
    ParallelogramResult {
        below: lhs < rhs * (1.0 - TIE_REL),
        signs,
        lhs,
        rhs,
        exhaustive: k <= EXHAUSTIVE_LIMIT,
    }
}

/// Caller-supplied constants; each one given is checked against the value
/// computed from `T`, and absent ones are replaced by the computed value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ConcentrationInputs {
    pub eta: Option<f64>,
    pub kappa: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationWitness {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub achieved: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub eta: f64,
    pub kappa: f64,
    pub delta: f64,
    pub computed_eta: f64,
    pub computed_kappa: f64,
    pub computed_delta: f64,
    pub norm: f64,
    pub bound: f64,
    pub eps: f64,
    pub exhaustive: bool,
    /// Best `J` found and its far-norm, witness or not.
    pub best_j: Vec<usize>,
    pub best_achieved: f64,
    pub witness: Option<ConcentrationWitness>,
}

impl ConcentrationReport {
    /// Hypotheses held, the search was exhaustive and nothing beat `eps`.
    pub fn is_counterexample(&self) -> bool {
        self.exhaustive && self.witness.is_none()
    }
}

fn hypothesis(name: &'static str, detail: String) -> Error {
    Error::Hypothesis { name, detail }
}

fn sorted_unique(set: &[usize]) -> Vec<usize> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

pub fn concentration_check(
    t: &ModuleOperator,
    partition: &[Vec<usize>],
    b: &[usize],
    c: &[usize],
    eps: f64,
    given: ConcentrationInputs,
) -> Result<ConcentrationReport> {
    let xs = t.source().space();
    let ys = t.target().space();
    let mut owner = vec![usize::MAX; xs.len()];
    for (i, part) in partition.iter().enumerate() {
        for &x in part {
            xs.check_point(x)?;
            if owner[x] != usize::MAX {
                return Err(hypothesis("partition", format!("point {x} lies in parts {} and {i}", owner[x])));
            }
            owner[x] = i;
        }
    }
    if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(hypothesis("partition", format!("point {x} lies in no part")));
    }
    let b = sorted_unique(b);
    let c = sorted_unique(c);
    for &y in b.iter().chain(&c) {
        ys.check_point(y)?;
    }
    if let Some(y) = b.iter().find(|y| c.binary_search(y).is_err()) {
        return Err(hypothesis("B ⊆ C", format!("point {y} of B is not in C")));
    }

    let all_x: Vec<usize> = (0..xs.len()).collect();
    let computed_eta = min_singular_value(t.matrix());
    let computed_kappa = t.cut_norm(&b, &all_x);
    let computed_delta = partition
        .iter()
        .map(|a| t.cut_norm(&c, a))
        .fold(0.0, f64::max);
    let slack = 1e-12;
    if let Some(eta) = given.eta {
        if computed_eta < eta - slack {
            return Err(hypothesis(
                "min singular value ≥ η",
                format!("min singular value {computed_eta} < η = {eta}"),
            ));
        }
    }
    if let Some(kappa) = given.kappa {
        if computed_kappa < kappa - slack {
            return Err(hypothesis("‖χ_B T‖ ≥ κ", format!("‖χ_B T‖ = {computed_kappa} < κ = {kappa}")));
        }
    }
    if let Some(delta) = given.delta {
        if computed_delta > delta + slack {
            return Err(hypothesis(
                "‖χ_C T χ_A_i‖ ≤ δ",
                format!("max_i ‖χ_C T χ_A_i‖ = {computed_delta} > δ = {delta}"),
            ));
        }
    }
    let eta = given.eta.unwrap_or(computed_eta);
    let kappa = given.kappa.unwrap_or(computed_kappa);
    let delta = given.delta.unwrap_or(computed_delta);
    if kappa <= 0.0 {
        return Err(hypothesis("κ > 0", format!("κ = {kappa}")));
    }
    if delta >= eta {
        return Err(hypothesis("δ < η", format!("δ = {delta}, η = {eta}")));
    }
    let t_norm = t.norm();
    let bound = kappa * kappa * (eta * eta - delta * delta).sqrt() / (2.0 * t_norm);
    if !(eps > 0.0 && eps < bound) {
        return Err(hypothesis("0 < ε < bound", format!("ε = {eps}, bound = {bound}")));
    }

    // M_i = χ_{Y∖C} T χ_{A_i} T^* χ_B on the relevant coordinates
    let far: Vec<usize> = (0..ys.len()).filter(|y| c.binary_search(y).is_err()).collect();
    let rows = t.target().coords(&far);
    let b_rows = t.target().coords(&b);
    let tb_adj = t.matrix().select(&b_rows, &(0..t.matrix().cols()).collect::<Vec<_>>()).adjoint();
    let parts: Vec<CMatrix> = partition
        .iter()
        .map(|a| {
            let cols = t.source().coords(a);
            let left = t.matrix().select(&rows, &cols);
            let right = tb_adj.select(&cols, &(0..b_rows.len()).collect::<Vec<_>>());
            left.matmul(&right).expect("conformable")
        })
        .collect();
    let achieved = |j: &[usize]| -> f64 {
        if rows.is_empty() || b_rows.is_empty() {
            return 0.0;
        }
        let mut acc = CMatrix::zeros(rows.len(), b_rows.len());
        for &i in j {
            acc = acc.add(&parts[i]).expect("same shape");
        }
        norm(&acc)
    };

    let k = partition.len();
    let exhaustive = k <= EXHAUSTIVE_LIMIT;
    let (best_j, best_achieved) = if exhaustive {
        let values: Vec<(Vec<usize>, f64)> = (0u32..(1 << k))
            .map(|mask| {
                let j: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
                let v = achieved(&j);
                (j, v)
            })
            .collect();
        let max = values.iter().map(|p| p.1).fold(0.0, f64::max);
        values
            .into_iter()
            .filter(|p| p.1 >= max * (1.0 - TIE_REL))
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("nonempty")
    } else {
        let rows_b = t.matrix().select(&b_rows, &(0..t.matrix().cols()).collect::<Vec<_>>());
        let (_, _, v) = top_singular_pair(&rows_b, 1e-12)?;
        let vs: Vec<Vec<C64>> = partition
            .iter()
            .map(|a| {
                let cols = t.source().coords(a);
                let restricted: Vec<C64> = cols.iter().map(|&c| v[c]).collect();
                t.matrix().select(&rows, &cols).mul_vec(&restricted)
            })
            .collect();
        let pb = parallelogram_bound(&vs);
        let plus: Vec<usize> = (0..k).filter(|&i| pb.signs[i] > 0).collect();
        let minus: Vec<usize> = (0..k).filter(|&i| pb.signs[i] < 0).collect();
        let (vp, vm) = (achieved(&plus), achieved(&minus));
        if vp >= vm {
            (plus, vp)
        } else {
            (minus, vm)
        }
    };
    let witness = (best_achieved > eps).then(|| ConcentrationWitness {
        j: best_j.clone(),
        achieved: best_achieved,
        bound,
    });
    Ok(ConcentrationReport {
        eta,
        kappa,
        delta,
        computed_eta,
        computed_kappa,
        computed_delta,
        norm: t_norm,
        bound,
        eps,
        exhaustive,
        best_j,
        best_achieved,
        witness,
    })
}

/// Target points `y` whose ball `B(y, radius)` carries at least `kappa` of
/// some unit vector in the image of `T`: `‖χ_{B(y,radius)}|_{im T}‖ >= κ`.
pub fn concentration_set(t: &ModuleOperator, radius: crate::Dist, kappa: f64) -> Vec<usize> {
    let d = svd(t.matrix());
    let smax = d.s.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..d.s.len()).filter(|&k| d.s[k] > 1e-12 * smax).collect();
    let all_rows: Vec<usize> = (0..d.u.rows()).collect();
    let q = d.u.select(&all_rows, &keep);
    let ys = t.target().space();
    (0..ys.len())
        .filter(|&y| {
            let rows = t.target().coords(&ys.ball(y, radius));
            !rows.is_empty() && !keep.is_empty() && norm(&q.select(&rows, &(0..keep.len()).collect::<Vec<_>>())) >= kappa
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_vectors_give_equality() {
        let vs = vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(0.0, 2.0)],
        ];
        let r = parallelogram_bound(&vs);
        assert!((r.lhs - 5.0).abs() < 1e-12);
        assert!(!r.below);
        assert_eq!(r.signs, vec![1, 1]);
    }

    #[test]
    fn opposite_vectors_take_opposite_signs() {
        let v = vec![C64::new(1.0, 1.0), C64::new(-2.0, 0.5)];
        let w: Vec<C64> = v.iter().map(|z| -z).collect();
        let r = parallelogram_bound(&[v.clone(), w]);
        assert_eq!(r.signs, vec![1, -1]);
        assert!((r.lhs - 4.0 * vec_norm(&v).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn greedy_mode_never_falls_below() {
        let vs: Vec<Vec<C64>> = (0..25)
            .map(|i| vec![C64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()), C64::new(i as f64 % 3.0 - 1.0, 0.0)])
            .collect();
        let r = parallelogram_bound(&vs);
        assert!(!r.exhaustive);
        assert!(r.lhs >= r.rhs * (1.0 - 1e-12));
    }
}
