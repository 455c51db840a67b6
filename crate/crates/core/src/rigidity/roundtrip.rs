//! Coarse map → covering unitary → approximating relations → coarse maps.

use std::sync::Arc;

use serde::Serialize;

use crate::approx::{approx_relation, operator_to_map, ApproxParams};
use crate::coarse_map::CoarseMapRep;
use crate::covering::build_covering_unitary;
use crate::dist::Dist;
use crate::error::Result;
use crate::module::GeometricModule;
use crate::relation::{closeness_gap, compose, covering_radius, Relation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub f_to_u_spill: Dist,
    pub phi_params: ApproxParams,
    /// `closeness_gap` between the map recovered from `Φ_δ[U]` and `f`.
    pub recovered_gap: Dist,
    /// `closeness_gap(h ∘ g, Δ_X)` for `g` from `Φ_δ[U]` and `h` from `Φ_δ[U^*]`.
    pub inverse_gap_x: Dist,
    /// `closeness_gap(g ∘ h, Δ_Y)`.
    pub inverse_gap_y: Dist,
    /// Covering radius of the image of `g` in `Y`.
    pub surjectivity_radius: Dist,
    /// Pairs `(y, x)` of `Φ_δ[U]` with `y` in a different component than `f(x)`.
    pub stray_pairs: usize,
    pub phi_size: usize,
    pub success: bool,
}

/// Runs the round-trip. With a `tolerance`, success also requires the
/// recovered and inverse gaps to stay within it.
pub fn roundtrip(
    f: &CoarseMapRep,
    m: &Arc<GeometricModule>,
    n: &Arc<GeometricModule>,
    spill: Dist,
    p: &ApproxParams,
    tolerance: Option<Dist>,
) -> Result<RoundtripReport> {
    let table = f.require_function()?;
    let u = build_covering_unitary(f, m, n, spill)?;
    let phi = approx_relation(&u, p)?;
    let u_adj = u.adjoint();
    let psi = approx_relation(&u_adj, &p.swapped())?;
    let g = operator_to_map(&u, &phi);
    let h = operator_to_map(&u_adj, &psi);

    let xs = m.space();
    let ys = n.space();
    let recovered_gap = closeness_gap(&g.relation, &f.relation)?;
    let inverse_gap_x = closeness_gap(&compose(&h.relation, &g.relation)?, &Relation::diagonal(xs.clone()))?;
    let inverse_gap_y = closeness_gap(&compose(&g.relation, &h.relation)?, &Relation::diagonal(ys.clone()))?;
    let surjectivity_radius = covering_radius(&g.relation.image(), ys);
    let stray_pairs = phi
        .pairs()
        .iter()
        .filter(|&&(y, x)| ys.d(y, table[x]).is_inf())
        .count();

    let gaps = [recovered_gap, inverse_gap_x, inverse_gap_y, surjectivity_radius];
    let success = gaps.iter().all(|g| g.is_finite())
        && tolerance.is_none_or(|tol| gaps[..3].iter().all(|&g| g <= tol));
    Ok(RoundtripReport {
        f_to_u_spill: spill,
        phi_params: *p,
        recovered_gap,
        inverse_gap_x,
        inverse_gap_y,
        surjectivity_radius,
        stray_pairs,
        phi_size: phi.len(),
        success,
    })
}
