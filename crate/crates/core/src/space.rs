//! Finite extended metric spaces.

use std::collections::BTreeSet;

use crate::dist::Dist;
use crate::error::{Error, Result};

const TRIANGLE_SLACK: f64 = 1e-9;

/// A finite set of labelled points with a symmetric, possibly infinite metric.
///
/// Finite-distance classes are the coarsely connected components; the
/// distance between points of different components is [`Dist::INF`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExtMetricSpace {
    labels: Vec<String>,
    dist: Vec<Dist>,
    component: Vec<usize>,
    n_components: usize,
    realized: Vec<Dist>,
}

impl ExtMetricSpace {
    /// Builds a space from a full distance matrix, validating every metric
    /// axiom (triangle inequality up to a `1e-9` relative slack).
    pub fn from_matrix(labels: Vec<String>, dist: Vec<Vec<Dist>>) -> Result<Self> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpace(format!(
                "distance matrix must be {n}x{n}"
            )));
        }
        let flat: Vec<Dist> = dist.into_iter().flatten().collect();
        for i in 0..n {
            if flat[i * n + i] != Dist::ZERO {
                return Err(Error::InvalidSpace(format!("d({i},{i}) != 0")));
            }
            for j in 0..i {
                if flat[i * n + j] != flat[j * n + i] {
                    return Err(Error::InvalidSpace(format!("d({i},{j}) != d({j},{i})")));
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = flat[i * n + k];
                if dik.is_inf() {
                    continue;
                }
                for j in 0..n {
                    let via = dik + flat[k * n + j];
                    let direct = flat[i * n + j];
                    if via.is_finite()
                        && direct.value() > via.value() * (1.0 + TRIANGLE_SLACK) + TRIANGLE_SLACK
                    {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails for ({i},{k},{j})"
                        )));
                    }
                }
            }
        }
        Ok(Self::assemble(labels, flat))
    }

    /// Builds the shortest-path metric of a weighted undirected graph.
    /// Unreachable pairs are at infinite distance.
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = labels.len();
        let mut d = vec![Dist::INF; n * n];
        for i in 0..n {
            d[i * n + i] = Dist::ZERO;
        }
        for &(a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidSpace(format!("edge ({a},{b}) out of range")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidSpace(format!(
                    "edge ({a},{b}) has non-positive or infinite weight {w}"
                )));
            }
            if a == b {
                continue;
            }
            let w = Dist::new(w);
            if w < d[a * n + b] {
                d[a * n + b] = w;
                d[b * n + a] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = d[i * n + k];
                if dik.is_inf() {
                    continue;
                }
                for j in 0..n {
                    let via = dik + d[k * n + j];
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                    }
                }
            }
        }
        Ok(Self::assemble(labels, d))
    }

    fn assemble(labels: Vec<String>, dist: Vec<Dist>) -> Self {
        let n = labels.len();
        let mut component = vec![usize::MAX; n];
        let mut n_components = 0;
        for i in 0..n {
            if component[i] != usize::MAX {
                continue;
            }
            for j in i..n {
                if dist[i * n + j].is_finite() {
                    component[j] = n_components;
                }
            }
            n_components += 1;
        }
        let realized: BTreeSet<Dist> = dist.iter().copied().filter(|d| d.is_finite()).collect();
        ExtMetricSpace {
            labels,
            dist,
            component,
            n_components,
            realized: realized.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> Dist {
        self.dist[x * self.len() + y]
    }

    pub fn component_of(&self, x: usize) -> usize {
        self.component[x]
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    /// Points grouped by component, in increasing point order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_components];
        for (x, &c) in self.component.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// Sorted distinct finite distances, including 0 when the space is nonempty.
    pub fn realized_distances(&self) -> &[Dist] {
        &self.realized
    }

    pub fn ball(&self, center: usize, radius: Dist) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| self.d(center, y) <= radius)
            .collect()
    }

    /// Points within `radius` of some point of `set`.
    pub fn neighborhood(&self, set: &[usize], radius: Dist) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| set.iter().any(|&a| self.d(a, y) <= radius))
            .collect()
    }

    /// `max d(x,y)` over the set; 0 for sets with at most one point.
    pub fn diameter_of(&self, set: &[usize]) -> Dist {
        let mut best = Dist::ZERO;
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                best = best.max(self.d(a, b));
            }
        }
        best
    }

    pub fn diameter(&self) -> Dist {
        let all: Vec<usize> = (0..self.len()).collect();
        self.diameter_of(&all)
    }

    /// `min d(a,b)` over `a ∈ A, b ∈ B`, `INF` if either set is empty.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Dist {
        let mut best = Dist::INF;
        for &x in a {
            for &y in b {
                best = best.min(self.d(x, y));
            }
        }
        best
    }

    /// Checks the metric axioms on the stored matrix.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.d(i, j)).collect())
            .collect();
        Self::from_matrix(self.labels.clone(), rows).map(|_| ())
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "point {x} out of range for a space with {} points",
                self.len()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn path_metric_from_edges() {
        let s = ExtMetricSpace::from_edges(labels(4), &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
            .unwrap();
        assert_eq!(s.d(0, 3), Dist::new(3.0));
        assert_eq!(s.n_components(), 1);
        assert_eq!(
            s.realized_distances(),
            &[Dist::ZERO, Dist::new(1.0), Dist::new(2.0), Dist::new(3.0)]
        );
        s.validate().unwrap();
    }

    #[test]
    fn unreachable_points_are_infinitely_far() {
        let s = ExtMetricSpace::from_edges(labels(3), &[(0, 1, 2.0)]).unwrap();
        assert_eq!(s.d(0, 2), Dist::INF);
        assert_eq!(s.n_components(), 2);
        assert_eq!(s.components(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn rejects_broken_triangle() {
        let d = vec![
            vec![Dist::ZERO, Dist::new(1.0), Dist::new(5.0)],
            vec![Dist::new(1.0), Dist::ZERO, Dist::new(1.0)],
            vec![Dist::new(5.0), Dist::new(1.0), Dist::ZERO],
        ];
        assert!(ExtMetricSpace::from_matrix(labels(3), d).is_err());
    }

    #[test]
    fn rejects_finite_distance_across_infinite_gap() {
        let d = vec![
            vec![Dist::ZERO, Dist::new(1.0), Dist::INF],
            vec![Dist::new(1.0), Dist::ZERO, Dist::new(1.0)],
            vec![Dist::INF, Dist::new(1.0), Dist::ZERO],
        ];
        assert!(ExtMetricSpace::from_matrix(labels(3), d).is_err());
    }
}
