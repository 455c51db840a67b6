//! Maximal bounded subsets of a finite metric space.
//!
//! A set has diameter at most `r` exactly when it is a clique of the
//! threshold graph `{x ~ y : d(x,y) <= r}`, so the maximal `r`-bounded sets
//! are the maximal cliques of that graph. They are enumerated with the
//! Bron–Kerbosch algorithm using Tomita pivoting.

use crate::dist::Dist;
use crate::space::ExtMetricSpace;

/// All maximal subsets of `points` with diameter `<= radius`, each sorted,
/// in lexicographic order.
pub fn maximal_bounded_sets(space: &ExtMetricSpace, points: &[usize], radius: Dist) -> Vec<Vec<usize>> {
    let n = points.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && space.d(points[i], points[j]) <= radius)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    let p: Vec<usize> = (0..n).collect();
    bron_kerbosch(&adj, &mut current, p, Vec::new(), &mut out);
    let mut sets: Vec<Vec<usize>> = out
        .into_iter()
        .map(|c| {
            let mut s: Vec<usize> = c.into_iter().map(|i| points[i]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    sets.sort();
    sets
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    // pivot maximising |P ∩ N(u)|
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count())
        .expect("nonempty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let np: Vec<usize> = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let nx: Vec<usize> = x.iter().copied().filter(|&w| adj[v][w]).collect();
        r.push(v);
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Every nonempty subset of `points` with diameter `<= radius`.
///
/// Exponential; callers enforce a size cap.
pub fn all_bounded_sets(space: &ExtMetricSpace, points: &[usize], radius: Dist) -> Vec<Vec<usize>> {
    let n = points.len();
    assert!(n < 64, "all_bounded_sets is limited to fewer than 64 points");
    let mut out = Vec::new();
    // extend sets in increasing index order so every subset is visited once
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((set, next)) = stack.pop() {
        for i in next..n {
            let p = points[i];
            if set.iter().all(|&q| space.d(p, q) <= radius) {
                let mut s = set.clone();
                s.push(p);
                out.push(s.clone());
                stack.push((s, i + 1));
            }
        }
    }
    for s in &mut out {
        s.sort_unstable();
    }
    out.sort();
    out
}
