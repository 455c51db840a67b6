//! Quasi-properness profiles.
//!
//! For a target ball `B = B(y, s)`, `a(y, s)` is the least source radius `a`
//! with `‖χ_B T χ_{X∖B(x₀, a)}‖ <= ε`, where `x₀` anchors the ball: the
//! source point whose block against `y` is largest, then whose column mass
//! into `B` is largest, then the smallest index. The profile reports
//! `max_y a(y, s)`.

use std::cmp::Ordering;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::module::ModuleOperator;
use crate::profile::{Profile, ProfileKind};

fn anchor(t: &ModuleOperator, y: usize, ball: &[usize]) -> usize {
    let nx = t.source().space().len();
    let key = |x: usize| (t.block_norm(y, x), t.cut_norm(ball, &[x]));
    (0..nx)
        .map(|x| (x, key(x)))
        .max_by(|a, b| {
            a.1 .0
                .total_cmp(&b.1 .0)
                .then(a.1 .1.total_cmp(&b.1 .1))
                .then(b.0.cmp(&a.0))
        })
        .map(|p| p.0)
        .expect("nonempty source")
}

fn radius_for(t: &ModuleOperator, y: usize, s: Dist, eps: f64) -> Dist {
    let ys = t.target().space();
    let xs = t.source().space();
    let ball = ys.ball(y, s);
    let all: Vec<usize> = (0..xs.len()).collect();
    if xs.is_empty() || t.cut_norm(&ball, &all) <= eps {
        return Dist::ZERO;
    }
    let x0 = anchor(t, y, &ball);
    for &a in xs.realized_distances() {
        let outside: Vec<usize> = (0..xs.len()).filter(|&x| xs.d(x0, x) > a).collect();
        if outside.is_empty() || t.cut_norm(&ball, &outside).partial_cmp(&eps) != Some(Ordering::Greater) {
            return a;
        }
    }
    Dist::INF
}

pub fn quasi_proper_profile(t: &ModuleOperator, eps: f64, radii: &[Dist]) -> Result<Profile> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let mut p = Profile::new(ProfileKind::Qproper);
    let ny = t.target().space().len();
    for &s in radii {
        let worst = (0..ny)
            .map(|y| radius_for(t, y, s, eps))
            .max()
            .unwrap_or(Dist::ZERO);
        p.push_exact(s, worst);
    }
    Ok(p)
}
