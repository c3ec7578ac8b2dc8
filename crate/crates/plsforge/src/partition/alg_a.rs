//! The randomized carving algorithm `A`, its radius function, and FindMyCluster.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{log2_ceil, Graph, NodeId, INF};
use crate::partition::{check_ts, Ratio, TsPartition};
use crate::{Cluster, Error, Result};

/// Keyed map from node id to an even radius in `[2tL+2, 8tL]`, `L = ceil(log2 n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusFunction {
    pub seed: u64,
    pub t: u32,
    pub n: usize,
    key: [u8; 32],
}

impl RadiusFunction {
    pub fn new(seed: u64, t: u32, n: usize) -> RadiusFunction {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..12].copy_from_slice(&t.to_le_bytes());
        key[12..20].copy_from_slice(&(n as u64).to_le_bytes());
        key[20..32].copy_from_slice(b"radius-fn-v1");
        RadiusFunction { seed, t, n, key }
    }

    pub fn log_n(&self) -> u32 {
        log2_ceil(self.n)
    }

    pub fn min_radius(&self) -> u32 {
        2 * self.t * self.log_n() + 2
    }

    pub fn max_radius(&self) -> u32 {
        8 * self.t * self.log_n()
    }

    pub fn get(&self, id: NodeId) -> u32 {
        let choices = (self.max_radius() - self.min_radius()) / 2 + 1;
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(id);
        self.min_radius() + 2 * rng.gen_range(0..choices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgAOutcome {
    /// Accepted clusters in acceptance order, each with its center.
    pub clusters: Vec<(NodeId, Cluster)>,
    pub x: Cluster,
    /// Centers whose cluster was accepted.
    pub taken: Cluster,
    /// Nodes never clustered; the run failed iff this is non-empty.
    pub alive: Cluster,
}

impl AlgAOutcome {
    pub fn success(&self) -> bool {
        self.alive.is_empty()
    }

    pub fn partition(&self) -> Option<TsPartition> {
        self.success().then(|| TsPartition {
            clusters: self.clusters.iter().map(|(_, c)| c.clone()).collect(),
            x: self.x.clone(),
        })
    }
}

/// Runs `A` with radii from `r`. Every node is visited in id order; a node
/// with an alive node within `2tL` proposes `C = B_r(v) ∩ L`, accepted when
/// `|B_r(v) ∩ L| <= (1 + 1/t) |B_{r-2}(v) ∩ L|`.
pub fn algorithm_a(g: &Graph, t: u32, r: &RadiusFunction) -> Result<AlgAOutcome> {
    algorithm_a_capped(g, t, r, usize::MAX)
}

/// [`algorithm_a`] stopped after visiting `max_centers` nodes; anything not
/// yet clustered is reported alive.
pub fn algorithm_a_capped(g: &Graph, t: u32, r: &RadiusFunction, max_centers: usize) -> Result<AlgAOutcome> {
    if t < 1 {
        return Err(Error::InvalidParams("t must be at least 1".into()));
    }
    let l = log2_ceil(g.len());
    let near = 2 * t * l;
    let mut alive = vec![true; g.len()];
    let mut in_x = vec![false; g.len()];
    let mut clusters = Vec::new();
    let mut taken = BTreeSet::new();
    for v in (0..g.len()).take(max_centers) {
        let id = g.id(v);
        let radius = r.get(id);
        let dist = g.bfs_idx(v, radius.max(near));
        if !(0..g.len()).any(|i| alive[i] && dist[i] <= near) {
            continue;
        }
        let outer = (0..g.len()).filter(|&i| alive[i] && dist[i] <= radius).count();
        let inner = (0..g.len()).filter(|&i| alive[i] && dist[i] <= radius - 2).count();
        if outer == 0 || (t as usize) * outer > (t as usize + 1) * inner {
            continue;
        }
        let members: Vec<usize> = (0..g.len()).filter(|&i| alive[i] && dist[i] <= radius).collect();
        for &i in &members {
            alive[i] = false;
        }
        let d2 = g.multi_bfs_idx((0..g.len()).filter(|&i| alive[i]), 2);
        for &i in &members {
            if d2[i] != INF {
                in_x[i] = true;
            }
        }
        clusters.push((id, members.iter().map(|&i| g.id(i)).collect()));
        taken.insert(id);
    }
    let pick = |mask: &[bool]| (0..g.len()).filter(|&i| mask[i]).map(|i| g.id(i)).collect();
    Ok(AlgAOutcome { clusters, x: pick(&in_x), taken, alive: pick(&alive) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodSeed {
    pub seed: u64,
    /// Seeds tried, including the returned one.
    pub tries: usize,
    pub outcome: AlgAOutcome,
}

/// First seed of `seeds` (within `max_tries`) on which `A` succeeds and its
/// output passes `check_ts(16tL, 1/t)`.
pub fn find_good_seed<I: IntoIterator<Item = u64>>(g: &Graph, t: u32, seeds: I, max_tries: usize) -> Result<GoodSeed> {
    let bound = 16 * t * log2_ceil(g.len());
    for (k, seed) in seeds.into_iter().take(max_tries).enumerate() {
        let rf = RadiusFunction::new(seed, t, g.len());
        let outcome = algorithm_a(g, t, &rf)?;
        if let Some(p) = outcome.partition() {
            if check_ts(g, &p, bound, Ratio::new(1, t as i64))?.ok {
                return Ok(GoodSeed { seed, tries: k + 1, outcome });
            }
        }
    }
    Err(Error::Budget(format!("no good seed among {max_tries} tries")))
}

/// Smallest id `w` within `8tL` of `v` with `in_t(w)` and `dist(w, v) <= R(w)`.
pub fn find_my_cluster(g: &Graph, v: NodeId, r: &RadiusFunction, in_t: &Cluster) -> Result<Option<NodeId>> {
    let dist = g.bfs_idx(g.idx(v)?, r.max_radius());
    Ok((0..g.len())
        .filter(|&w| dist[w] != INF && in_t.contains(&g.id(w)))
        .find(|&w| dist[w] <= r.get(g.id(w)))
        .map(|w| g.id(w)))
}
