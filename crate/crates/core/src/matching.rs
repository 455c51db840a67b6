//! Bipartite matching: Hopcroft–Karp, lexicographically least maximum
//! matchings and König witnesses for Hall violations.

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// A bipartite graph with `n_left` left vertices; `adj[u]` lists the right
/// neighbours of `u` in increasing order.
#[derive(Debug, Clone)]
pub struct Bipartite {
    pub n_left: usize,
    pub n_right: usize,
    pub adj: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Right partner of each left vertex, `None` when unmatched.
    pub left: Vec<Option<usize>>,
    pub size: usize,
}

impl Bipartite {
    pub fn new(n_left: usize, n_right: usize, mut adj: Vec<Vec<usize>>) -> Self {
        assert_eq!(adj.len(), n_left);
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
            assert!(row.iter().all(|&v| v < n_right));
        }
        Bipartite {
            n_left,
            n_right,
            adj,
        }
    }

    pub fn hopcroft_karp(&self) -> Matching {
        let mut ml = vec![NONE; self.n_left];
        let mut mr = vec![NONE; self.n_right];
        let allowed = vec![true; self.n_left];
        let size = hk_run(&self.adj, &allowed, &mut ml, &mut mr);
        to_matching(&ml, size)
    }

    /// The maximum matching whose sorted list of `(left, right)` pairs is
    /// lexicographically least among those covering the same left vertices
    /// in order: each left vertex in turn takes its smallest right neighbour
    /// that still extends to a maximum matching.
    pub fn lex_least_maximum(&self) -> Matching {
        let target = self.hopcroft_karp().size;
        let mut fixed: Vec<Option<usize>> = vec![None; self.n_left];
        let mut used = vec![false; self.n_right];
        let mut skipped = vec![false; self.n_left];
        let mut count = 0;
        for u in 0..self.n_left {
            let mut placed = false;
            for &v in &self.adj[u] {
                if used[v] {
                    continue;
                }
                fixed[u] = Some(v);
                used[v] = true;
                if count + 1 + self.residual_size(&fixed, &used, &skipped, u) == target {
                    count += 1;
                    placed = true;
                    break;
                }
                fixed[u] = None;
                used[v] = false;
            }
            if !placed {
                skipped[u] = true;
            }
        }
        let size = fixed.iter().filter(|m| m.is_some()).count();
        debug_assert_eq!(size, target);
        Matching { left: fixed, size }
    }

    /// Maximum matching among left vertices after `upto` that avoids used
    /// right vertices.
    fn residual_size(&self, fixed: &[Option<usize>], used: &[bool], skipped: &[bool], upto: usize) -> usize {
        let adj: Vec<Vec<usize>> = (0..self.n_left)
            .map(|u| {
                if u <= upto || fixed[u].is_some() || skipped[u] {
                    Vec::new()
                } else {
                    self.adj[u].iter().copied().filter(|&v| !used[v]).collect()
                }
            })
            .collect();
        let mut ml = vec![NONE; self.n_left];
        let mut mr = vec![NONE; self.n_right];
        let allowed = vec![true; self.n_left];
        hk_run(&adj, &allowed, &mut ml, &mut mr)
    }

    /// König witness for a matching that leaves some left vertex unmatched:
    /// the left vertices reachable from unmatched ones by alternating paths
    /// and their neighbourhood, which is strictly smaller.
    pub fn hall_violator(&self, m: &Matching) -> Option<(Vec<usize>, Vec<usize>)> {
        if m.size == self.n_left {
            return None;
        }
        let mut mr = vec![NONE; self.n_right];
        for (u, v) in m.left.iter().enumerate() {
            if let Some(v) = *v {
                mr[v] = u;
            }
        }
        let mut seen_l = vec![false; self.n_left];
        let mut seen_r = vec![false; self.n_right];
        let mut queue: VecDeque<usize> = (0..self.n_left).filter(|&u| m.left[u].is_none()).collect();
        for &u in &queue {
            seen_l[u] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if seen_r[v] {
                    continue;
                }
                seen_r[v] = true;
                let w = mr[v];
                if w != NONE && !seen_l[w] {
                    seen_l[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let left: Vec<usize> = (0..self.n_left).filter(|&u| seen_l[u]).collect();
        let right: Vec<usize> = (0..self.n_right).filter(|&v| seen_r[v]).collect();
        Some((left, right))
    }
}

fn to_matching(ml: &[usize], size: usize) -> Matching {
    Matching {
        left: ml.iter().map(|&v| (v != NONE).then_some(v)).collect(),
        size,
    }
}

fn hk_run(adj: &[Vec<usize>], allowed: &[bool], ml: &mut [usize], mr: &mut [usize]) -> usize {
    let n = adj.len();
    let mut dist = vec![0usize; n];
    let mut size = ml.iter().filter(|&&v| v != NONE).count();
    loop {
        // BFS layers from free left vertices
        let mut queue = VecDeque::new();
        let mut found = false;
        for u in 0..n {
            if allowed[u] && ml[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NONE;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mr[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == NONE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        for u in 0..n {
            if allowed[u] && ml[u] == NONE && dfs(u, adj, &mut dist, ml, mr) {
                size += 1;
            }
        }
    }
}

fn dfs(u: usize, adj: &[Vec<usize>], dist: &mut [usize], ml: &mut [usize], mr: &mut [usize]) -> bool {
    for &v in &adj[u] {
        let w = mr[v];
        if w == NONE || (dist[w] == dist[u] + 1 && dfs(w, adj, dist, ml, mr)) {
            ml[u] = v;
            mr[v] = u;
            return true;
        }
    }
    dist[u] = NONE;
    false
}
