//! Truncated-exponential ball carving used as the padded-decomposition sampler.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, INF};
use crate::partition::{OrderedPartition, Ratio};
use crate::rng::{keys, stream};
use crate::{Cluster, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddedSample {
    pub partition: OrderedPartition,
    pub lambda: u32,
}

/// `2β/t` as the rational that every comparison in this module uses.
pub fn padded_threshold(beta: f64, t: u32) -> Ratio {
    Ratio::approximate_float(2.0 * beta / t as f64).unwrap_or_else(|| Ratio::from_integer(i64::MAX))
}

/// Radius drawn from Exp(rate) conditioned on `[0, cap]`, by inversion.
fn truncated_exp<R: Rng>(rng: &mut R, rate: f64, cap: f64) -> f64 {
    let u: f64 = rng.gen();
    let mass = 1.0 - (-rate * cap).exp();
    (-(1.0 - u * mass).ln() / rate).min(cap)
}

/// One carving of the alive nodes (`alive` mask) with distances in `g`.
/// Returns clusters as index lists in carving order.
fn carve(g: &Graph, alive: &[bool], lambda: u32, beta: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..g.len()).filter(|&i| alive[i]).collect();
    order.shuffle(rng);
    let mut free = alive.to_vec();
    let rate = beta / lambda as f64;
    let cap = lambda as f64 / 2.0;
    let max_radius = lambda / 2;
    let mut out = Vec::new();
    for c in order {
        if !free[c] {
            continue;
        }
        // Rounded up so the cap itself is reachable; `2 * max_radius <= lambda`.
        let r = (truncated_exp(rng, rate, cap).ceil() as u32).min(max_radius);
        let dist = g.bfs_idx(c, r);
        let cluster: Vec<usize> = (0..g.len()).filter(|&i| free[i] && dist[i] != INF).collect();
        for &i in &cluster {
            free[i] = false;
        }
        out.push(cluster);
    }
    out
}

fn ids(g: &Graph, idx: &[usize]) -> Cluster {
    idx.iter().map(|&i| g.id(i)).collect()
}

/// A weakly `lambda`-bounded partition: centers in seeded random order each
/// take the free part of a ball whose radius is truncated-exponential with
/// rate `beta / lambda`, capped at `lambda / 2`.
pub fn sample_padded(g: &Graph, lambda: u32, beta: f64, seed: u64) -> Result<PaddedSample> {
    if lambda < 1 {
        return Err(Error::InvalidParams("lambda must be at least 1".into()));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidParams("beta must be positive".into()));
    }
    if !g.is_connected() {
        return Err(Error::InvalidGraph("padded sampling needs a connected graph".into()));
    }
    let mut rng = stream(seed, keys::PADDED);
    let clusters = carve(g, &vec![true; g.len()], lambda, beta, &mut rng);
    Ok(PaddedSample { partition: OrderedPartition { clusters: clusters.iter().map(|c| ids(g, c)).collect() }, lambda })
}

/// Budget exhausted in [`padded_carving`].
#[derive(Clone, Debug, PartialEq)]
pub struct CarvingFailure {
    pub step: usize,
    pub alive: usize,
    pub best_ratio: Ratio,
    pub threshold: Ratio,
}

impl fmt::Display for CarvingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {} with {} alive nodes: best ratio {} ({:.4}) above threshold {} ({:.4})",
            self.step,
            self.alive,
            self.best_ratio,
            *self.best_ratio.numer() as f64 / *self.best_ratio.denom() as f64,
            self.threshold,
            *self.threshold.numer() as f64 / *self.threshold.denom() as f64,
        )
    }
}

impl From<CarvingFailure> for Error {
    fn from(f: CarvingFailure) -> Error {
        Error::Budget(f.to_string())
    }
}

/// Carves `g` one cluster at a time. Each step samples padded partitions of
/// the alive set (diameter bound `t`, distances in `g`) and keeps the cluster
/// `C` minimising `|C ∩ B_2(L \ C)| / |C|`, accepting it once the ratio is at
/// most `2β/t`. Up to `max_resamples` samples per step.
pub fn padded_carving(
    g: &Graph,
    t: u32,
    beta: f64,
    seed: u64,
    max_resamples: usize,
) -> Result<OrderedPartition, CarvingFailure> {
    let threshold = padded_threshold(beta, t);
    let fail = |step, alive, best| CarvingFailure { step, alive, best_ratio: best, threshold };
    if t < 1 || !(beta > 0.0) || !g.is_connected() {
        return Err(fail(0, g.len(), Ratio::from_integer(i64::MAX)));
    }
    let mut rng = stream(seed, keys::PADDED);
    let mut alive = vec![true; g.len()];
    let mut remaining = g.len();
    let mut clusters = Vec::new();
    while remaining > 0 {
        let step = clusters.len();
        // The whole alive set within t/2 of one node has ratio 0.
        let first = alive.iter().position(|&a| a).expect("remaining > 0");
        let dist = g.bfs_idx(first, t / 2);
        if (0..g.len()).all(|i| !alive[i] || dist[i] != INF) {
            let rest: Vec<usize> = (0..g.len()).filter(|&i| alive[i]).collect();
            clusters.push(ids(g, &rest));
            break;
        }
        let mut best: Option<(Ratio, Vec<usize>)> = None;
        for _ in 0..max_resamples {
            for cluster in carve(g, &alive, t, beta, &mut rng) {
                let ratio = boundary_ratio(g, &alive, &cluster);
                if best.as_ref().map_or(true, |(r, _)| ratio < *r) {
                    best = Some((ratio, cluster));
                }
            }
            if best.as_ref().is_some_and(|(r, _)| *r <= threshold) {
                break;
            }
        }
        match best {
            Some((ratio, cluster)) if ratio <= threshold => {
                for &i in &cluster {
                    alive[i] = false;
                }
                remaining -= cluster.len();
                clusters.push(ids(g, &cluster));
            }
            Some((ratio, _)) => return Err(fail(step, remaining, ratio)),
            None => return Err(fail(step, remaining, Ratio::from_integer(i64::MAX))),
        }
    }
    Ok(OrderedPartition { clusters })
}

/// `|C ∩ B_2(L \ C)| / |C|`.
fn boundary_ratio(g: &Graph, alive: &[bool], cluster: &[usize]) -> Ratio {
    let mut rest = alive.to_vec();
    for &i in cluster {
        rest[i] = false;
    }
    let d = g.multi_bfs_idx((0..g.len()).filter(|&i| rest[i]), 2);
    let near = cluster.iter().filter(|&&i| d[i] <= 2).count();
    Ratio::new(near as i64, cluster.len() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::partition::{check_ts, cluster_degeneracy, degeneracy_to_ts};

    #[test]
    fn samples_respect_lambda_and_are_deterministic() {
        let g = generate(GraphKind::RandomConnected { n: 60, extra: 30 }, 2).unwrap();
        for seed in 0..20 {
            for lambda in [1, 2, 5, 9] {
                let s = sample_padded(&g, lambda, 2.0, seed).unwrap();
                s.partition.validate(&g).unwrap();
                assert!(s.partition.max_weak_diameter(&g).unwrap().unwrap() <= lambda);
                assert_eq!(s, sample_padded(&g, lambda, 2.0, seed).unwrap());
            }
        }
    }

    #[test]
    fn sampler_errors() {
        let g = Graph::from_edges([1, 2, 3], [(1, 2)]).unwrap();
        assert!(sample_padded(&g, 3, 1.0, 0).is_err());
        let p = generate(GraphKind::Path { n: 3 }, 0).unwrap();
        assert!(sample_padded(&p, 0, 1.0, 0).is_err());
    }

    #[test]
    fn whole_graph_within_half_t_is_one_cluster() {
        let g = generate(GraphKind::Path { n: 16 }, 0).unwrap();
        for seed in 0..30 {
            assert_eq!(padded_carving(&g, 30, (16f64).ln(), seed, 5).unwrap().clusters.len(), 1);
        }
    }

    #[test]
    fn large_t_gives_single_cluster() {
        let g = generate(GraphKind::Cycle { n: 12 }, 0).unwrap();
        let p = padded_carving(&g, 12, 0.01, 1, 50).unwrap();
        assert_eq!(p.clusters.len(), 1);
    }

    #[test]
    fn grid_16_t8() {
        let g = generate(GraphKind::Grid { rows: 16, cols: 16 }, 0).unwrap();
        let beta = (256f64).ln();
        let p = padded_carving(&g, 8, beta, 3, 50).unwrap();
        p.validate(&g).unwrap();
        assert!(p.max_weak_diameter(&g).unwrap().unwrap() <= 8);
        let eps = padded_threshold(beta, 8);
        assert!(cluster_degeneracy(&g, &p).unwrap() <= eps);
        assert!(check_ts(&g, &degeneracy_to_ts(&g, &p).unwrap(), 8, eps).unwrap().ok);
    }

    #[test]
    fn failure_reports_best_ratio() {
        let g = generate(GraphKind::Grid { rows: 6, cols: 6 }, 0).unwrap();
        let err = padded_carving(&g, 1, 0.1, 0, 3).unwrap_err();
        assert!(err.best_ratio > err.threshold);
        assert!(err.to_string().contains("best ratio"));
    }
}
