//! Reference computations for integration tests. They rebuild adjacency from
//! the edge list and avoid the library's BFS and checkers.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use plsforge::{Cluster, Graph, NodeId};

pub const UNREACHABLE: usize = usize::MAX;

pub struct Oracle {
    pub ids: Vec<NodeId>,
    pub pos: HashMap<NodeId, usize>,
    /// All-pairs shortest path lengths.
    pub dist: Vec<Vec<usize>>,
}

impl Oracle {
    pub fn new(g: &Graph) -> Oracle {
        let ids: Vec<NodeId> = g.ids().to_vec();
        let pos: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b) in g.edges() {
            adj[pos[&a]].push(pos[&b]);
            adj[pos[&b]].push(pos[&a]);
        }
        let dist = (0..ids.len())
            .map(|s| {
                let mut d = vec![UNREACHABLE; ids.len()];
                d[s] = 0;
                let mut q = VecDeque::from([s]);
                while let Some(u) = q.pop_front() {
                    for &w in &adj[u] {
                        if d[w] == UNREACHABLE {
                            d[w] = d[u] + 1;
                            q.push_back(w);
                        }
                    }
                }
                d
            })
            .collect();
        Oracle { ids, pos, dist }
    }

    pub fn d(&self, a: NodeId, b: NodeId) -> usize {
        self.dist[self.pos[&a]][self.pos[&b]]
    }

    pub fn weak_diameter(&self, c: &Cluster) -> usize {
        c.iter().flat_map(|&a| c.iter().map(move |&b| (a, b))).map(|(a, b)| self.d(a, b)).max().unwrap_or(0)
    }

    /// Every node covered exactly once.
    pub fn is_partition(&self, clusters: &[Cluster]) -> bool {
        let mut seen = BTreeSet::new();
        clusters.iter().all(|c| !c.is_empty() && c.iter().all(|v| self.pos.contains_key(v) && seen.insert(*v)))
            && seen.len() == self.ids.len()
    }

    /// TS check with ratio bound `num/den`. Separation uses the distance-2
    /// form: non-X nodes of different clusters are never within distance 2.
    pub fn ts_ok(&self, clusters: &[Cluster], x: &Cluster, diameter: usize, num: i64, den: i64) -> bool {
        if !self.is_partition(clusters) {
            return false;
        }
        let mut owner = HashMap::new();
        for (k, c) in clusters.iter().enumerate() {
            if self.weak_diameter(c) > diameter {
                return false;
            }
            let nx = c.iter().filter(|v| x.contains(v)).count() as i64;
            if nx * den > num * c.len() as i64 {
                return false;
            }
            for &v in c {
                owner.insert(v, k);
            }
        }
        let outside: Vec<NodeId> = self.ids.iter().copied().filter(|v| !x.contains(v)).collect();
        for &a in &outside {
            for &b in &outside {
                if owner[&a] != owner[&b] && self.d(a, b) <= 2 {
                    return false;
                }
            }
        }
        true
    }

    /// Cluster degeneracy as an unreduced fraction `(num, den)` maximising
    /// `num/den`.
    pub fn degeneracy(&self, clusters: &[Cluster]) -> (i64, i64) {
        let mut best = (0i64, 1i64);
        for (k, c) in clusters.iter().enumerate() {
            let later: Vec<NodeId> = clusters[k + 1..].iter().flatten().copied().collect();
            let near = c.iter().filter(|&&v| later.iter().any(|&w| self.d(v, w) <= 2)).count() as i64;
            let len = c.len() as i64;
            if near * best.1 > best.0 * len {
                best = (near, len);
            }
        }
        best
    }

    /// Nodes within distance `r` of `v`.
    pub fn ball(&self, v: NodeId, r: usize) -> BTreeSet<NodeId> {
        self.ids.iter().copied().filter(|&u| self.d(u, v) <= r).collect()
    }
}

pub fn ceil_log2(n: usize) -> u32 {
    let mut l = 0;
    while (1usize << l) < n {
        l += 1;
    }
    l.max(1)
}
