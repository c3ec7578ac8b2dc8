use crate::graph::{Graph, INF};
use crate::partition::OrderedPartition;
use crate::{Error, Result};

/// Repeatedly carves a non-expanding ball around the smallest alive id.
///
/// The radius grows through `2, 4, ...` until
/// `|B_j(v) ∩ L| <= (1 + 1/t) |B_{j-2}(v) ∩ L|`, where balls are measured in
/// `g` and `L` is the alive set.
pub fn warmup_carving(g: &Graph, t: u32) -> Result<OrderedPartition> {
    if t < 1 {
        return Err(Error::InvalidParams("t must be at least 1".into()));
    }
    let mut alive = vec![true; g.len()];
    let mut remaining = g.len();
    let mut clusters = Vec::new();
    while remaining > 0 {
        let v = alive.iter().position(|&a| a).unwrap();
        let dist = g.bfs_idx(v, INF);
        // count[d] = alive nodes at distance exactly d.
        let mut count: Vec<usize> = Vec::new();
        for (i, &d) in dist.iter().enumerate() {
            if alive[i] && d != INF {
                let d = d as usize;
                if count.len() <= d {
                    count.resize(d + 1, 0);
                }
                count[d] += 1;
            }
        }
        let within = |r: usize| count.iter().take(r + 1).sum::<usize>();
        let mut j = 2usize;
        while (t as usize) * within(j) > (t as usize + 1) * within(j - 2) {
            j += 2;
        }
        let cluster: crate::Cluster =
            (0..g.len()).filter(|&i| alive[i] && dist[i] != INF && dist[i] as usize <= j).map(|i| g.id(i)).collect();
        for &u in &cluster {
            alive[g.try_idx(u).unwrap()] = false;
        }
        remaining -= cluster.len();
        clusters.push(cluster);
    }
    Ok(OrderedPartition { clusters })
}
