//! Two-separated partitions: checking, cluster degeneracy, and construction.

mod alg_a;
mod carving;
mod padded;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::Serialize;

use crate::graph::{self, Cluster, Graph, NodeId, INF};
use crate::{Error, Result};

pub use alg_a::{
    algorithm_a, algorithm_a_capped, find_good_seed, find_my_cluster, AlgAOutcome, GoodSeed, RadiusFunction,
};
pub use carving::warmup_carving;
pub use padded::{padded_carving, padded_threshold, sample_padded, CarvingFailure, PaddedSample};

pub type Ratio = Rational64;

/// Clusters plus the separating set `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsPartition {
    pub clusters: Vec<Cluster>,
    pub x: Cluster,
}

/// Clusters in carving order; the order matters for degeneracy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedPartition {
    pub clusters: Vec<Cluster>,
}

/// Why a partition failed [`check_ts`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `diameter` is `None` when the cluster spans two components.
    Diameter {
        cluster: usize,
        diameter: Option<u32>,
    },
    Ratio {
        cluster: usize,
        in_x: usize,
        size: usize,
    },
    /// `a` and `b` are outside `X`, lie in different clusters, and are joined
    /// by a path that never uses an edge with both ends in `X`.
    Separation {
        a: NodeId,
        b: NodeId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// `None` if some cluster has infinite weak diameter.
    pub max_weak_diameter: Option<u32>,
    pub cost_ratio: Ratio,
}

fn cluster_index(g: &Graph, clusters: &[Cluster]) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; g.len()];
    for (k, c) in clusters.iter().enumerate() {
        if c.is_empty() {
            return Err(Error::NotAPartition(format!("cluster {k} is empty")));
        }
        for &v in c {
            let i = g.try_idx(v).ok_or_else(|| Error::NotAPartition(format!("node {v} not in graph")))?;
            if owner[i] != usize::MAX {
                return Err(Error::NotAPartition(format!("node {v} in two clusters")));
            }
            owner[i] = k;
        }
    }
    if let Some(i) = owner.iter().position(|&k| k == usize::MAX) {
        return Err(Error::NotAPartition(format!("node {} uncovered", g.id(i))));
    }
    Ok(owner)
}

fn to_idx(g: &Graph, c: &Cluster) -> Vec<usize> {
    c.iter().map(|&v| g.try_idx(v).expect("validated")).collect()
}

impl TsPartition {
    /// Cluster index per node index; errors unless the clusters partition `g`.
    pub fn owners(&self, g: &Graph) -> Result<Vec<usize>> {
        let owner = cluster_index(g, &self.clusters)?;
        if let Some(v) = self.x.iter().find(|v| !g.contains(**v)) {
            return Err(Error::NotAPartition(format!("X contains unknown node {v}")));
        }
        Ok(owner)
    }

    /// Clusters and `X` sorted canonically, for comparisons.
    pub fn canonical(&self) -> TsPartition {
        let mut clusters = self.clusters.clone();
        clusters.sort();
        TsPartition { clusters, x: self.x.clone() }
    }

    /// `c <k> ids...` lines followed by one `x ids...` line.
    pub fn to_text(&self) -> String {
        let mut out = ordered_text(&self.clusters);
        out.push('x');
        for v in &self.x {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<TsPartition> {
        let (clusters, x) = parse_partition_text(text)?;
        Ok(TsPartition { clusters, x: x.unwrap_or_default() })
    }
}

impl OrderedPartition {
    pub fn validate(&self, g: &Graph) -> Result<()> {
        cluster_index(g, &self.clusters).map(|_| ())
    }

    pub fn to_text(&self) -> String {
        ordered_text(&self.clusters)
    }

    pub fn from_text(text: &str) -> Result<OrderedPartition> {
        let (clusters, _) = parse_partition_text(text)?;
        Ok(OrderedPartition { clusters })
    }

    /// Largest weak diameter over clusters (`None` for infinite).
    pub fn max_weak_diameter(&self, g: &Graph) -> Result<Option<u32>> {
        let mut best = Some(0);
        for c in &self.clusters {
            match graph::weak_diameter(g, c)? {
                None => return Ok(None),
                Some(d) => best = best.map(|b: u32| b.max(d)),
            }
        }
        Ok(best)
    }
}

fn ordered_text(clusters: &[Cluster]) -> String {
    let mut out = String::new();
    for (k, c) in clusters.iter().enumerate() {
        write!(out, "c {k}").unwrap();
        for v in c {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn parse_partition_text(text: &str) -> Result<(Vec<Cluster>, Option<Cluster>)> {
    let mut clusters = Vec::new();
    let mut x = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap();
        let nums = fields
            .map(|f| f.parse::<u64>().map_err(|e| Error::Parse(format!("{line:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        match tag {
            "c" => {
                let (&k, ids) = nums.split_first().ok_or_else(|| Error::Parse("empty c line".into()))?;
                if k as usize != clusters.len() {
                    return Err(Error::Parse(format!("cluster index {k} out of sequence")));
                }
                clusters.push(ids.iter().copied().collect());
            }
            "x" if x.is_none() => x = Some(nums.into_iter().collect()),
            _ => return Err(Error::Parse(format!("unexpected line {line:?}"))),
        }
    }
    Ok((clusters, x))
}

/// Checks weak diameter `<= t`, cost ratio `<= eps` (inclusive, exact), and
/// two-separation. Two-separation is tested on `G'`, the graph without edges
/// that have both ends in `X`: no component of `G'` may hold non-`X` nodes of
/// two different clusters.
pub fn check_ts(g: &Graph, p: &TsPartition, t: u32, eps: Ratio) -> Result<TsReport> {
    let owner = p.owners(g)?;
    let mut in_x = vec![false; g.len()];
    for &v in &p.x {
        in_x[g.idx(v)?] = true;
    }
    let mut violations = Vec::new();
    let mut max_diam = Some(0u32);
    let mut cost_ratio = Ratio::from_integer(0);
    for (k, c) in p.clusters.iter().enumerate() {
        let members = to_idx(g, c);
        let d = graph::weak_diameter_idx(g, &members);
        max_diam = match (max_diam, d) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        if d.map_or(true, |d| d > t) {
            violations.push(Violation::Diameter { cluster: k, diameter: d });
        }
        let nx = members.iter().filter(|&&i| in_x[i]).count();
        let ratio = Ratio::new(nx as i64, members.len() as i64);
        cost_ratio = cost_ratio.max(ratio);
        if ratio > eps {
            violations.push(Violation::Ratio { cluster: k, in_x: nx, size: members.len() });
        }
    }
    // Components of G' via BFS; the first non-X node seen fixes the cluster.
    let mut seen = vec![false; g.len()];
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut first: Option<usize> = None;
        let mut reported = false;
        while let Some(u) = stack.pop() {
            if !in_x[u] {
                match first {
                    None => first = Some(u),
                    Some(f) if owner[f] != owner[u] && !reported => {
                        violations.push(Violation::Separation { a: g.id(f).min(g.id(u)), b: g.id(f).max(g.id(u)) });
                        reported = true;
                    }
                    _ => {}
                }
            }
            for &w in g.adj(u) {
                if in_x[u] && in_x[w] {
                    continue;
                }
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    Ok(TsReport { ok: violations.is_empty(), violations, max_weak_diameter: max_diam, cost_ratio })
}

/// Mask of nodes within distance 2 of the `sources` mask.
fn near_mask(g: &Graph, sources: &[bool]) -> Vec<bool> {
    let d = g.multi_bfs_idx((0..g.len()).filter(|&i| sources[i]), 2);
    d.iter().map(|&x| x != INF && x <= 2).collect()
}

/// `max_i |{v in C_i : dist(v, V \ (C_1..C_i)) <= 2}| / |C_i|`.
pub fn cluster_degeneracy(g: &Graph, p: &OrderedPartition) -> Result<Ratio> {
    p.validate(g)?;
    let mut best = Ratio::from_integer(0);
    for (c, boundary) in boundaries(g, p) {
        best = best.max(Ratio::new(boundary.len() as i64, c.len() as i64));
    }
    Ok(best)
}

/// For each cluster, the members within distance 2 of later clusters.
fn boundaries<'a>(g: &Graph, p: &'a OrderedPartition) -> Vec<(&'a Cluster, Vec<NodeId>)> {
    let mut later = vec![false; g.len()];
    let mut out = Vec::with_capacity(p.clusters.len());
    for c in p.clusters.iter().rev() {
        let near = near_mask(g, &later);
        let boundary = c.iter().copied().filter(|&v| near[g.try_idx(v).unwrap()]).collect();
        out.push((c, boundary));
        for &v in c {
            later[g.try_idx(v).unwrap()] = true;
        }
    }
    out.reverse();
    out
}

/// `X = union of C_i ∩ B_2(V_{>i})`.
pub fn degeneracy_to_ts(g: &Graph, p: &OrderedPartition) -> Result<TsPartition> {
    p.validate(g)?;
    let x: BTreeSet<NodeId> = boundaries(g, p).into_iter().flat_map(|(_, b)| b).collect();
    Ok(TsPartition { clusters: p.clusters.clone(), x })
}
