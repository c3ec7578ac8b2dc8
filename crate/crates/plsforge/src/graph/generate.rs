use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Graph, NodeId};
use crate::rng::{keys, stream};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    /// A uniform random labelled tree plus `extra` random non-tree edges.
    RandomConnected {
        n: usize,
        extra: usize,
    },
    RandomTree {
        n: usize,
    },
    /// The layered equality gadget: `2t+3` layers, odd layers a single
    /// node, even layers `m` nodes, consecutive layers complete bipartite.
    Layered {
        t: usize,
        m: usize,
    },
}

/// Deterministic in `(kind, seed)`; ids are `0..n` except for layered graphs,
/// whose ids follow [`layered_layers`].
pub fn generate(kind: GraphKind, seed: u64) -> Result<Graph> {
    let mut rng = stream(seed, keys::GENERATE);
    let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
    match kind {
        GraphKind::Path { n } => {
            if n == 0 {
                return bad("path needs n >= 1");
            }
            Graph::from_edges(0..n as u64, (1..n as u64).map(|i| (i - 1, i)))
        }
        GraphKind::Cycle { n } => {
            if n < 3 {
                return bad("cycle needs n >= 3");
            }
            let n = n as u64;
            Graph::from_edges(0..n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        GraphKind::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return bad("grid needs positive dimensions");
            }
            let id = |r: usize, c: usize| (r * cols + c) as u64;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            Graph::from_edges(0..(rows * cols) as u64, edges)
        }
        GraphKind::RandomTree { n } => {
            if n == 0 {
                return bad("tree needs n >= 1");
            }
            Graph::from_edges(0..n as u64, random_tree_edges(n, &mut rng))
        }
        GraphKind::RandomConnected { n, extra } => {
            if n == 0 {
                return bad("graph needs n >= 1");
            }
            let mut edges: BTreeSet<(u64, u64)> =
                random_tree_edges(n, &mut rng).into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
            let max_edges = n * (n - 1) / 2;
            let target = (edges.len() + extra).min(max_edges);
            while edges.len() < target {
                let a = rng.gen_range(0..n as u64);
                let b = rng.gen_range(0..n as u64);
                if a != b {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
            Graph::from_edges(0..n as u64, edges)
        }
        GraphKind::Layered { t, m } => {
            if t < 1 || m < 3 || m % 2 == 0 {
                return bad("layered needs t >= 1 and odd m >= 3");
            }
            let layers = layered_layers(t, m);
            let mut edges = Vec::new();
            for pair in layers.windows(2) {
                for &a in &pair[0] {
                    for &b in &pair[1] {
                        edges.push((a, b));
                    }
                }
            }
            Graph::from_edges(layers.concat(), edges)
        }
    }
}

/// Node ids of the layered gadget, layer by layer (layer `j` is `out[j-1]`).
pub fn layered_layers(t: usize, m: usize) -> Vec<Vec<NodeId>> {
    let mut next = 0u64;
    (1..=2 * t + 3)
        .map(|j| {
            let size = if j % 2 == 1 { 1 } else { m };
            let layer = (next..next + size as u64).collect();
            next += size as u64;
            layer
        })
        .collect()
}

/// Decodes a uniformly random Pruefer sequence.
fn random_tree_edges<R: Rng>(n: usize, rng: &mut R) -> Vec<(u64, u64)> {
    if n < 2 {
        return Vec::new();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf as u64, s as u64));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0] as u64, rest[1] as u64));
    edges
}

/// Renames nodes to distinct random ids in `[0, 4n^2 + 16)`, keeping topology.
pub fn relabel_with_gaps(g: &Graph, seed: u64) -> Graph {
    let mut rng = stream(seed, keys::GENERATE ^ 0x9a95);
    let bound = 4 * (g.len() as u64).pow(2) + 16;
    let mut fresh: BTreeSet<u64> = BTreeSet::new();
    while fresh.len() < g.len() {
        fresh.insert(rng.gen_range(0..bound));
    }
    let mut fresh: Vec<u64> = fresh.into_iter().collect();
    fresh.shuffle(&mut rng);
    let map: HashMap<NodeId, NodeId> = g.ids().iter().copied().zip(fresh).collect();
    g.relabel(&map).expect("relabelling is a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layered_sizes() {
        let g = generate(GraphKind::Layered { t: 1, m: 3 }, 0).unwrap();
        assert_eq!(g.len(), 9);
        let sizes: Vec<usize> = layered_layers(1, 3).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 1, 3, 1]);
        assert_eq!(generate(GraphKind::Layered { t: 2, m: 5 }, 0).unwrap().len(), 19);
        assert!(generate(GraphKind::Layered { t: 1, m: 4 }, 0).is_err());
        assert!(generate(GraphKind::Layered { t: 0, m: 3 }, 0).is_err());
    }

    #[test]
    fn single_node_path() {
        let g = generate(GraphKind::Path { n: 1 }, 0).unwrap();
        assert_eq!((g.len(), g.num_edges()), (1, 0));
    }

    #[test]
    fn random_graphs_are_deterministic_and_connected() {
        for seed in 0..20 {
            let kind = GraphKind::RandomConnected { n: 20, extra: 10 };
            let a = generate(kind, seed).unwrap();
            assert_eq!(a, generate(kind, seed).unwrap());
            assert!(a.is_connected());
            assert_eq!(a.num_edges(), 29);
            let t = generate(GraphKind::RandomTree { n: 20 }, seed).unwrap();
            assert!(t.is_connected());
            assert_eq!(t.num_edges(), 19);
        }
    }

    #[test]
    fn grid_shape() {
        let g = generate(GraphKind::Grid { rows: 3, cols: 4 }, 0).unwrap();
        assert_eq!(g.num_edges(), 3 * 3 + 2 * 4);
    }

    #[test]
    fn gaps_preserve_structure() {
        let g = generate(GraphKind::RandomConnected { n: 15, extra: 5 }, 3).unwrap();
        let h = relabel_with_gaps(&g, 9);
        assert_eq!(h.num_edges(), g.num_edges());
        assert!(h.is_connected());
        let mut dg: Vec<usize> = g.ids().iter().map(|&v| g.degree(v).unwrap()).collect();
        let mut dh: Vec<usize> = h.ids().iter().map(|&v| h.degree(v).unwrap()).collect();
        dg.sort();
        dh.sort();
        assert_eq!(dg, dh);
    }
}
