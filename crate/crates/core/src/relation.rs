//! Relations between finite spaces and the relational coarse measurements.
//!
//! A relation from `X` to `Y` is a set of pairs `(y, x)` with the target
//! coordinate first. Entourages, supports of operators, graphs of maps and
//! approximating relations all live here.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cliques::maximal_bounded_sets;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::profile::{Profile, ProfileKind};
use crate::space::ExtMetricSpace;

#[derive(Debug, Clone)]
pub struct Relation {
    source: Arc<ExtMetricSpace>,
    target: Arc<ExtMetricSpace>,
    pairs: BTreeSet<(usize, usize)>,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.source, &other.source)
            && same_space(&self.target, &other.target)
            && self.pairs == other.pairs
    }
}

pub fn same_space(a: &Arc<ExtMetricSpace>, b: &Arc<ExtMetricSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Relation {
    pub fn new(
        source: Arc<ExtMetricSpace>,
        target: Arc<ExtMetricSpace>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(y, x) in &pairs {
            if y >= target.len() || x >= source.len() {
                return Err(Error::InvalidRelation(format!(
                    "pair ({y},{x}) outside {}x{}",
                    target.len(),
                    source.len()
                )));
            }
        }
        Ok(Relation {
            source,
            target,
            pairs,
        })
    }

    pub fn empty(source: Arc<ExtMetricSpace>, target: Arc<ExtMetricSpace>) -> Self {
        Relation {
            source,
            target,
            pairs: BTreeSet::new(),
        }
    }

    pub fn diagonal(space: Arc<ExtMetricSpace>) -> Self {
        let pairs = (0..space.len()).map(|x| (x, x)).collect();
        Relation {
            source: space.clone(),
            target: space,
            pairs,
        }
    }

    /// Graph `{(f(x), x)}` of a total function given as a lookup table.
    pub fn graph(
        source: Arc<ExtMetricSpace>,
        target: Arc<ExtMetricSpace>,
        f: &[usize],
    ) -> Result<Self> {
        if f.len() != source.len() {
            return Err(Error::InvalidParameter(format!(
                "map has {} entries for {} source points",
                f.len(),
                source.len()
            )));
        }
        Relation::new(source, target, f.iter().enumerate().map(|(x, &y)| (y, x)))
    }

    pub fn source(&self) -> &Arc<ExtMetricSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ExtMetricSpace> {
        &self.target
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, y: usize, x: usize) -> bool {
        self.pairs.contains(&(y, x))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Source points that appear in some pair, sorted.
    pub fn domain(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.pairs.iter().map(|&(_, x)| x).collect();
        s.into_iter().collect()
    }

    /// Target points that appear in some pair, sorted.
    pub fn image(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.pairs.iter().map(|&(y, _)| y).collect();
        s.into_iter().collect()
    }

    /// `R(x)`, sorted.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        self.pairs
            .iter()
            .filter(|&&(_, s)| s == x)
            .map(|&(y, _)| y)
            .collect()
    }

    /// `R(A) = {y : (y,x) ∈ R, x ∈ A}`, sorted.
    pub fn apply(&self, set: &[usize]) -> Vec<usize> {
        let s: BTreeSet<usize> = self
            .pairs
            .iter()
            .filter(|(_, x)| set.contains(x))
            .map(|&(y, _)| y)
            .collect();
        s.into_iter().collect()
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.check_same_spaces(other)?;
        let mut pairs = self.pairs.clone();
        pairs.extend(other.pairs.iter().copied());
        Ok(Relation {
            source: self.source.clone(),
            target: self.target.clone(),
            pairs,
        })
    }

    fn check_same_spaces(&self, other: &Relation) -> Result<()> {
        if same_space(&self.source, &other.source) && same_space(&self.target, &other.target) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(
                "relations live on different products".into(),
            ))
        }
    }
}

/// `E_r = {(y,x) : d(x,y) <= r}`.
pub fn entourage_at(space: &Arc<ExtMetricSpace>, r: Dist) -> Relation {
    let n = space.len();
    let mut pairs = BTreeSet::new();
    for y in 0..n {
        for x in 0..n {
            if space.d(x, y) <= r {
                pairs.insert((y, x));
            }
        }
    }
    Relation {
        source: space.clone(),
        target: space.clone(),
        pairs,
    }
}

/// `R ∘ S = {(z,x) : ∃y (z,y) ∈ R, (y,x) ∈ S}`; requires `source(R) = target(S)`.
pub fn compose(r: &Relation, s: &Relation) -> Result<Relation> {
    if !same_space(&r.source, &s.target) {
        return Err(Error::SpaceMismatch(
            "compose: source of the outer relation differs from target of the inner one".into(),
        ));
    }
    let mut by_mid: Vec<Vec<usize>> = vec![Vec::new(); s.target.len()];
    for &(y, x) in &s.pairs {
        by_mid[y].push(x);
    }
    let mut pairs = BTreeSet::new();
    for &(z, y) in &r.pairs {
        for &x in &by_mid[y] {
            pairs.insert((z, x));
        }
    }
    Ok(Relation {
        source: s.source.clone(),
        target: r.target.clone(),
        pairs,
    })
}

pub fn transpose(r: &Relation) -> Relation {
    Relation {
        source: r.target.clone(),
        target: r.source.clone(),
        pairs: r.pairs.iter().map(|&(y, x)| (x, y)).collect(),
    }
}

/// `ρ_R(r) = sup{ d(y,y') : (y,x),(y',x') ∈ R, d(x,x') <= r }`: the smallest
/// target radius `s` with `(R⊗R)(E_r) ⊆ E_s`.
pub fn expansion_at(rel: &Relation, r: Dist) -> Dist {
    let pairs: Vec<(usize, usize)> = rel.pairs.iter().copied().collect();
    let mut best = Dist::ZERO;
    for (i, &(y, x)) in pairs.iter().enumerate() {
        for &(y2, x2) in &pairs[i..] {
            if rel.source.d(x, x2) <= r {
                best = best.max(rel.target.d(y, y2));
                if best.is_inf() {
                    return best;
                }
            }
        }
    }
    best
}

pub fn expansion_profile(rel: &Relation, radii: &[Dist]) -> Profile {
    let mut p = Profile::new(ProfileKind::Expansion);
    for &r in radii {
        p.push_exact(r, expansion_at(rel, r));
    }
    p
}

/// Smallest `s` with `R ⊆ E_s∘R2∘E_s` and `R2 ⊆ E_s∘R∘E_s`.
///
/// The thickening is taken in both coordinates with the max metric on
/// `Y × X`, so the gap is a Hausdorff distance between the two pair sets and
/// is always one of the realized distances (or `INF`).
pub fn closeness_gap(r: &Relation, r2: &Relation) -> Result<Dist> {
    r.check_same_spaces(r2)?;
    Ok(directed_gap(r, r2).max(directed_gap(r2, r)))
}

fn directed_gap(from: &Relation, to: &Relation) -> Dist {
    let mut worst = Dist::ZERO;
    for &(y, x) in &from.pairs {
        let mut best = Dist::INF;
        for &(y2, x2) in &to.pairs {
            let d = from.target.d(y, y2).max(from.source.d(x, x2));
            if d < best {
                best = d;
                if best == Dist::ZERO {
                    break;
                }
            }
        }
        worst = worst.max(best);
        if worst.is_inf() {
            break;
        }
    }
    worst
}

/// Smallest `s` such that every point lies within `s` of `set`.
pub fn covering_radius(set: &[usize], space: &ExtMetricSpace) -> Dist {
    let mut worst = Dist::ZERO;
    for x in 0..space.len() {
        let near = set
            .iter()
            .map(|&a| space.d(a, x))
            .min()
            .unwrap_or(Dist::INF);
        worst = worst.max(near);
    }
    worst
}

/// `p(r) = max diam(op R(B))` over `r`-bounded `B ⊆ Y`.
///
/// Preimage diameter is monotone in `B`, so the maximum is attained on the
/// maximal `r`-bounded sets, which are enumerated exactly.
pub fn properness_at(rel: &Relation, r: Dist) -> Dist {
    let op = transpose(rel);
    let points: Vec<usize> = (0..rel.target.len()).collect();
    maximal_bounded_sets(&rel.target, &points, r)
        .iter()
        .map(|b| rel.source.diameter_of(&op.apply(b)))
        .max()
        .unwrap_or(Dist::ZERO)
}

pub fn properness_profile(rel: &Relation, radii: &[Dist]) -> Profile {
    let mut p = Profile::new(ProfileKind::Properness);
    for &r in radii {
        p.push_exact(r, properness_at(rel, r));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn p(n: usize) -> Arc<ExtMetricSpace> {
        Arc::new(gen::path(n).unwrap())
    }

    #[test]
    fn entourage_examples() {
        let p4 = p(4);
        let e1 = entourage_at(&p4, Dist::new(1.0));
        assert_eq!(e1.len(), 10);
        assert!(e1.pairs().iter().all(|&(i, j)| i.abs_diff(j) <= 1));
        assert_eq!(entourage_at(&p4, Dist::ZERO), Relation::diagonal(p4.clone()));
        let two = Arc::new(gen::disjoint_points(2).unwrap());
        assert_eq!(
            entourage_at(&two, Dist::new(5.0)),
            Relation::diagonal(two.clone())
        );
    }

    #[test]
    fn compose_of_unit_entourages_on_path() {
        let p4 = p(4);
        let e1 = entourage_at(&p4, Dist::new(1.0));
        let composed = compose(&e1, &e1).unwrap();
        // brute-force oracle: pairs joined by a middle point within distance 1 of both
        let mut oracle = BTreeSet::new();
        for z in 0..4usize {
            for x in 0..4usize {
                if (0..4usize).any(|y| z.abs_diff(y) <= 1 && y.abs_diff(x) <= 1) {
                    oracle.insert((z, x));
                }
            }
        }
        assert_eq!(composed.pairs(), &oracle);
        assert_eq!(composed, entourage_at(&p4, Dist::new(2.0)));
    }

    #[test]
    fn compose_of_graphs_is_graph_of_composition() {
        let a = p(5);
        let b = p(4);
        let c = p(3);
        let g = [0usize, 0, 1, 2, 3];
        let f = [2usize, 1, 0, 0];
        let gr = Relation::graph(a.clone(), b.clone(), &g).unwrap();
        let fr = Relation::graph(b.clone(), c.clone(), &f).unwrap();
        let fg: Vec<usize> = g.iter().map(|&y| f[y]).collect();
        assert_eq!(
            compose(&fr, &gr).unwrap(),
            Relation::graph(a, c, &fg).unwrap()
        );
        assert!(compose(&gr, &gr).is_err());
    }

    #[test]
    fn expansion_examples() {
        let p4 = p(4);
        let p8 = p(8);
        let stretch = Relation::graph(p4.clone(), p8.clone(), &[0, 2, 4, 6]).unwrap();
        assert_eq!(expansion_at(&stretch, Dist::new(1.0)), Dist::new(2.0));
        let diag = Relation::diagonal(p8.clone());
        for r in [0.0, 1.0, 3.0] {
            assert_eq!(expansion_at(&diag, Dist::new(r)), Dist::new(r));
        }
        let constant = Relation::graph(p8.clone(), p4, &[1; 8]).unwrap();
        assert!(expansion_profile(&constant, &[Dist::ZERO, Dist::new(7.0)])
            .values()
            .iter()
            .all(|&v| v == Dist::ZERO));
        assert_eq!(expansion_at(&Relation::empty(p8.clone(), p8), Dist::INF), Dist::ZERO);
    }

    #[test]
    fn closeness_examples() {
        let p8 = p(8);
        let id: Vec<usize> = (0..8).collect();
        let g = Relation::graph(p8.clone(), p8.clone(), &id).unwrap();
        assert_eq!(closeness_gap(&g, &g).unwrap(), Dist::ZERO);
        let shift = Relation::new(p8.clone(), p8.clone(), (0..7).map(|i| (i + 1, i))).unwrap();
        // exhaustive search over s in the realized grid
        let oracle = p8
            .realized_distances()
            .iter()
            .copied()
            .find(|&s| {
                let e = entourage_at(&p8, s);
                let thick_g = compose(&compose(&e, &g).unwrap(), &e).unwrap();
                let thick_s = compose(&compose(&e, &shift).unwrap(), &e).unwrap();
                shift.is_subset(&thick_g) && g.is_subset(&thick_s)
            })
            .unwrap();
        assert_eq!(oracle, Dist::new(1.0));
        assert_eq!(closeness_gap(&g, &shift).unwrap(), oracle);

        let two = Arc::new(gen::disjoint_points(2).unwrap());
        let a = Relation::new(two.clone(), two.clone(), [(0, 0)]).unwrap();
        let b = Relation::new(two.clone(), two.clone(), [(1, 1)]).unwrap();
        assert_eq!(closeness_gap(&a, &b).unwrap(), Dist::INF);
        let e = Relation::empty(two.clone(), two);
        assert_eq!(closeness_gap(&a, &e).unwrap(), Dist::INF);
        assert_eq!(closeness_gap(&e, &e).unwrap(), Dist::ZERO);
    }

    #[test]
    fn covering_radius_examples() {
        let p8 = gen::path(8).unwrap();
        assert_eq!(covering_radius(&[0, 2, 4, 6], &p8), Dist::new(1.0));
        let all: Vec<usize> = (0..8).collect();
        assert_eq!(covering_radius(&all, &p8), Dist::ZERO);
        assert_eq!(covering_radius(&[], &p8), Dist::INF);
        let two = gen::disjoint_points(2).unwrap();
        assert_eq!(covering_radius(&[0], &two), Dist::INF);
    }

    #[test]
    fn properness_examples() {
        let p8 = p(8);
        let p10 = p(10);
        let iso = Relation::graph(p8.clone(), p10.clone(), &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        for r in 0..5 {
            let r = Dist::new(r as f64);
            assert!(properness_at(&iso, r) <= r);
        }
        let constant = Relation::graph(p8.clone(), p10, &[3; 8]).unwrap();
        assert_eq!(properness_at(&constant, Dist::ZERO), Dist::new(7.0));
    }
}
