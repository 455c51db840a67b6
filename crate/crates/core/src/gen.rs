//! Deterministic generators for standard finite spaces.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::ExtMetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Path,
    Cycle,
    Grid2d,
    DisjointPoints,
    ClusterSpace,
    DisjointCliques,
    RandomRegular,
}

impl FromStr for SpaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => SpaceKind::Path,
            "cycle" => SpaceKind::Cycle,
            "grid2d" => SpaceKind::Grid2d,
            "disjoint_points" => SpaceKind::DisjointPoints,
            "cluster_space" => SpaceKind::ClusterSpace,
            "disjoint_cliques" => SpaceKind::DisjointCliques,
            "random_regular" => SpaceKind::RandomRegular,
            other => {
                return Err(Error::InvalidParameter(format!("unknown space kind {other:?}")))
            }
        })
    }
}

/// Dispatches on `kind`. Parameters per kind:
///
/// | kind | params |
/// |---|---|
/// | path, cycle, disjoint_points, cluster_space | `[n]` |
/// | grid2d | `[width, height]` |
/// | disjoint_cliques | `[size, size, ...]` |
/// | random_regular | `[n, degree]` |
pub fn gen(kind: SpaceKind, params: &[usize], seed: u64) -> Result<ExtMetricSpace> {
    let one = |name: &str| -> Result<usize> {
        match params {
            [n] => Ok(*n),
            _ => Err(Error::InvalidParameter(format!(
                "{name} takes exactly one parameter, got {params:?}"
            ))),
        }
    };
    match kind {
        SpaceKind::Path => path(one("path")?),
        SpaceKind::Cycle => cycle(one("cycle")?),
        SpaceKind::DisjointPoints => disjoint_points(one("disjoint_points")?),
        SpaceKind::ClusterSpace => cluster_space(one("cluster_space")?),
        SpaceKind::Grid2d => match params {
            [w, h] => grid2d(*w, *h),
            _ => Err(Error::InvalidParameter("grid2d takes [width, height]".into())),
        },
        SpaceKind::DisjointCliques => disjoint_cliques(params),
        SpaceKind::RandomRegular => match params {
            [n, d] => random_regular(*n, *d, seed),
            _ => Err(Error::InvalidParameter("random_regular takes [n, degree]".into())),
        },
    }
}

fn positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn unit_edges(pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<(usize, usize, f64)> {
    pairs.into_iter().map(|(a, b)| (a, b, 1.0)).collect()
}

pub fn path(n: usize) -> Result<ExtMetricSpace> {
    positive(n, "path length")?;
    ExtMetricSpace::from_edges(numbered(n), &unit_edges((1..n).map(|i| (i - 1, i))))
}

pub fn cycle(n: usize) -> Result<ExtMetricSpace> {
    positive(n, "cycle length")?;
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    if n > 2 {
        edges.push((n - 1, 0));
    }
    ExtMetricSpace::from_edges(numbered(n), &unit_edges(edges))
}

/// `w × h` grid with the graph (ℓ¹) metric; point `(i, j)` has index `j*w + i`.
pub fn grid2d(w: usize, h: usize) -> Result<ExtMetricSpace> {
    positive(w, "grid width")?;
    positive(h, "grid height")?;
    let labels = (0..h)
        .flat_map(|j| (0..w).map(move |i| format!("{i},{j}")))
        .collect();
    let mut edges = Vec::new();
    for j in 0..h {
        for i in 0..w {
            let v = j * w + i;
            if i + 1 < w {
                edges.push((v, v + 1));
            }
            if j + 1 < h {
                edges.push((v, v + w));
            }
        }
    }
    ExtMetricSpace::from_edges(labels, &unit_edges(edges))
}

/// `n` points at mutual infinite distance.
pub fn disjoint_points(n: usize) -> Result<ExtMetricSpace> {
    positive(n, "point count")?;
    ExtMetricSpace::from_edges(numbered(n), &[])
}

/// Clusters `G_1, ..., G_n` with `|G_k| = k`; points in one cluster are at
/// distance 1 and points of `G_k`, `G_m` at distance `|k - m|`.
///
/// Points are listed cluster by cluster; cluster `k` starts at index
/// `k(k-1)/2`.
pub fn cluster_space(n: usize) -> Result<ExtMetricSpace> {
    positive(n, "cluster count")?;
    let mut labels = Vec::new();
    let mut start = Vec::new();
    for k in 1..=n {
        start.push(labels.len());
        for j in 0..k {
            labels.push(cluster_label(k, j));
        }
    }
    let mut edges = Vec::new();
    for k in 1..=n {
        let s = start[k - 1];
        for a in 0..k {
            for b in a + 1..k {
                edges.push((s + a, s + b));
            }
            if k < n {
                let t = start[k];
                for b in 0..=k {
                    edges.push((s + a, t + b));
                }
            }
        }
    }
    ExtMetricSpace::from_edges(labels, &unit_edges(edges))
}

fn cluster_label(k: usize, j: usize) -> String {
    if k == 1 {
        "1".to_string()
    } else if j < 26 && k <= 26 {
        format!("{k}{}", (b'a' + j as u8) as char)
    } else {
        format!("{k}_{j}")
    }
}

/// Complete graphs of the given sizes, pairwise infinitely far apart.
pub fn disjoint_cliques(sizes: &[usize]) -> Result<ExtMetricSpace> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("disjoint_cliques needs at least one size".into()));
    }
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (c, &size) in sizes.iter().enumerate() {
        positive(size, "clique size")?;
        let s = labels.len();
        for j in 0..size {
            labels.push(format!("c{c}_{j}"));
        }
        for a in 0..size {
            for b in a + 1..size {
                edges.push((s + a, s + b));
            }
        }
    }
    ExtMetricSpace::from_edges(labels, &unit_edges(edges))
}

/// Uniformly paired random `d`-regular multigraph-free graph on `n` vertices,
/// drawn by the configuration model with rejection. Bit-reproducible per seed.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<ExtMetricSpace> {
    positive(n, "vertex count")?;
    if d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "no simple {d}-regular graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(n * d / 2);
        let mut seen = std::collections::BTreeSet::new();
        let mut ok = true;
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                ok = false;
                break;
            }
            edges.push((a, b));
        }
        if ok {
            return ExtMetricSpace::from_edges(numbered(n), &unit_edges(edges));
        }
    }
    Err(Error::InvalidParameter(format!(
        "failed to sample a simple {d}-regular graph on {n} vertices"
    )))
}

/// Disjoint union; points of later spaces are shifted past earlier ones and
/// labels are prefixed with the part index.
pub fn disjoint_union(parts: &[&ExtMetricSpace]) -> Result<ExtMetricSpace> {
    let total: usize = parts.iter().map(|p| p.len()).sum();
    let mut labels = Vec::with_capacity(total);
    let mut rows = vec![vec![Dist::INF; total]; total];
    let mut offset = 0;
    for (k, p) in parts.iter().enumerate() {
        for i in 0..p.len() {
            labels.push(format!("{k}:{}", p.label(i)));
            for j in 0..p.len() {
                rows[offset + i][offset + j] = p.d(i, j);
            }
        }
        offset += p.len();
    }
    ExtMetricSpace::from_matrix(labels, rows)
}
