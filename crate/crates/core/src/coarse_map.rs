//! Coarse maps represented by concrete relations plus measured gaps.

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::relation::{closeness_gap, compose, covering_radius, entourage_at, expansion_at, transpose, Relation};

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseMapRep {
    pub relation: Relation,
    /// `max_x diam R(x)`: how far the relation is from a function.
    pub fiber_diameter: Dist,
    /// How densely the domain of the relation covers the source space.
    pub domain_covering_radius: Dist,
}

impl CoarseMapRep {
    pub fn from_relation(relation: Relation) -> Self {
        let target = relation.target().clone();
        let fiber_diameter = relation
            .domain()
            .into_iter()
            .map(|x| target.diameter_of(&relation.fiber(x)))
            .max()
            .unwrap_or(Dist::ZERO);
        let domain_covering_radius = covering_radius(&relation.domain(), relation.source());
        CoarseMapRep {
            relation,
            fiber_diameter,
            domain_covering_radius,
        }
    }

    pub fn from_function(
        source: std::sync::Arc<crate::space::ExtMetricSpace>,
        target: std::sync::Arc<crate::space::ExtMetricSpace>,
        f: &[usize],
    ) -> Result<Self> {
        Ok(Self::from_relation(Relation::graph(source, target, f)?))
    }

    /// The lookup table when the relation is a total single-valued function.
    pub fn as_function(&self) -> Option<Vec<usize>> {
        let n = self.relation.source().len();
        let mut f = vec![usize::MAX; n];
        for &(y, x) in self.relation.pairs() {
            if f[x] != usize::MAX {
                return None;
            }
            f[x] = y;
        }
        if f.contains(&usize::MAX) {
            None
        } else {
            Some(f)
        }
    }

    pub fn require_function(&self) -> Result<Vec<usize>> {
        self.as_function().ok_or_else(|| {
            Error::NotAFunction("coarse map must be total and single-valued here".into())
        })
    }
}

/// `g ∘ E_slack ∘ f`, defined when every point of `image(f)` lies within
/// `slack` of `dom(g)`.
pub fn compose_coarse_maps(f: &CoarseMapRep, g: &CoarseMapRep, slack: Dist) -> Result<CoarseMapRep> {
    let mid = g.relation.source();
    if !crate::relation::same_space(f.relation.target(), mid) {
        return Err(Error::SpaceMismatch(
            "target of the first map differs from source of the second".into(),
        ));
    }
    let dom_g = g.relation.domain();
    for y in f.relation.image() {
        let reach = dom_g.iter().map(|&x| mid.d(x, y)).min().unwrap_or(Dist::INF);
        if reach > slack {
            return Err(Error::CompositionUndefined(format!(
                "image point {y} is {reach} away from the domain of the second map (slack {slack})"
            )));
        }
    }
    let thick = if slack == Dist::ZERO {
        f.relation.clone()
    } else {
        compose(&entourage_at(mid, slack), &f.relation)?
    };
    Ok(CoarseMapRep::from_relation(compose(&g.relation, &thick)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseReport {
    /// `closeness_gap(op f ∘ f, Δ_X)`.
    pub gap_x: Dist,
    /// `closeness_gap(f ∘ op f, Δ_Y)`.
    pub gap_y: Dist,
    /// `ρ_f` at the largest realized source distance.
    pub expansion: Dist,
    /// `ρ_{op f}(0)`: the largest diameter of a point preimage.
    pub op_expansion: Dist,
}

impl InverseReport {
    pub fn is_equivalence(&self) -> bool {
        self.gap_x.is_finite() && self.gap_y.is_finite()
    }
}

/// Measures how far `op f` is from a coarse inverse of `f`.
///
/// At finite scale every relation between connected spaces is controlled, so
/// "op f is not controlled" is read as: some preimage straddles components,
/// or `f` collapses a whole component with more than one point.
pub fn transpose_inverse_check(f: &CoarseMapRep) -> Result<InverseReport> {
    let rel = &f.relation;
    let source = rel.source();
    let target = rel.target();
    let top = |s: &crate::space::ExtMetricSpace| {
        s.realized_distances().last().copied().unwrap_or(Dist::ZERO)
    };
    let expansion = expansion_at(rel, top(source));
    if expansion.is_inf() {
        return Err(Error::InvalidParameter(
            "map is not controlled: it sends one component into several".into(),
        ));
    }
    let op = transpose(rel);
    let op_expansion = expansion_at(&op, Dist::ZERO);
    if op_expansion.is_inf() {
        return Err(Error::NotAnEmbedding { op_expansion });
    }
    for comp in source.components() {
        if comp.len() > 1 && rel.apply(&comp).len() == 1 && comp.iter().all(|&x| !rel.fiber(x).is_empty()) {
            return Err(Error::NotAnEmbedding { op_expansion });
        }
    }
    let gap_x = closeness_gap(
        &compose(&op, rel)?,
        &Relation::diagonal(source.clone()),
    )?;
    let gap_y = closeness_gap(
        &compose(rel, &op)?,
        &Relation::diagonal(target.clone()),
    )?;
    Ok(InverseReport {
        gap_x,
        gap_y,
        expansion,
        op_expansion,
    })
}
