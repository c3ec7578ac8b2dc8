//! Undirected simple graphs over arbitrary `u64` ids.
//!
//! Nodes are stored in increasing id order, so the internal index order is the
//! lexicographic order used throughout the crate. All distance queries are BFS.

mod generate;
mod io;

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::{BitString, Error, Result};

pub use generate::{generate, layered_layers, relabel_with_gaps, GraphKind};
pub use io::{read_graph, write_graph};

pub type NodeId = u64;

/// A set of nodes. Clusters handed to the partition checkers must be non-empty.
pub type Cluster = BTreeSet<NodeId>;

/// Marker for "unreachable" in index-level distance vectors.
pub const INF: u32 = u32::MAX;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph; rejects unknown endpoints, self-loops and repeated edges.
    pub fn from_edges<N, E>(nodes: N, edges: E) -> Result<Graph>
    where
        N: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate node id".into()));
        }
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b) in edges {
            let ia = *index.get(&a).ok_or(Error::UnknownNode(a))?;
            let ib = *index.get(&b).ok_or(Error::UnknownNode(b))?;
            if ia == ib {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("parallel edge at {}", ids[i])));
            }
        }
        Ok(Graph { ids, index, adj })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Node ids in increasing order.
    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn idx(&self, v: NodeId) -> Result<usize> {
        self.index.get(&v).copied().ok_or(Error::UnknownNode(v))
    }

    pub fn try_idx(&self, v: NodeId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn id(&self, i: usize) -> NodeId {
        self.ids[i]
    }

    /// Neighbour indices of index `i`, sorted.
    pub fn adj(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn neighbors(&self, v: NodeId) -> Result<Vec<NodeId>> {
        let i = self.idx(v)?;
        Ok(self.adj[i].iter().map(|&j| self.ids[j]).collect())
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        Ok(self.adj[self.idx(v)?].len())
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        match (self.try_idx(a), self.try_idx(b)) {
            (Some(i), Some(j)) => self.adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    /// Each edge once, as `(smaller id, larger id)`, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list {
                if i < j {
                    out.push((self.ids[i], self.ids[j]));
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Subgraph induced by `keep` (indices), with ids preserved.
    pub fn induced_by_idx(&self, keep: &[usize]) -> Graph {
        let mut mask = vec![false; self.len()];
        for &i in keep {
            mask[i] = true;
        }
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let local: HashMap<usize, usize> = sorted.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let ids: Vec<NodeId> = sorted.iter().map(|&i| self.ids[i]).collect();
        let index = ids.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let adj =
            sorted.iter().map(|&i| self.adj[i].iter().filter(|&&j| mask[j]).map(|j| local[j]).collect()).collect();
        Graph { ids, index, adj }
    }

    pub fn induced(&self, keep: &Cluster) -> Result<Graph> {
        let idx = keep.iter().map(|&v| self.idx(v)).collect::<Result<Vec<_>>>()?;
        Ok(self.induced_by_idx(&idx))
    }

    /// Same topology with ids renamed through `map` (must be injective).
    pub fn relabel(&self, map: &HashMap<NodeId, NodeId>) -> Result<Graph> {
        let rename = |v: NodeId| map.get(&v).copied().ok_or(Error::UnknownNode(v));
        let nodes = self.ids.iter().map(|&v| rename(v)).collect::<Result<Vec<_>>>()?;
        let edges = self.edges().into_iter().map(|(a, b)| Ok((rename(a)?, rename(b)?))).collect::<Result<Vec<_>>>()?;
        Graph::from_edges(nodes, edges)
    }

    /// BFS distances from index `src`, stopping after `limit` hops.
    pub fn bfs_idx(&self, src: usize, limit: u32) -> Vec<u32> {
        self.multi_bfs_idx(std::iter::once(src), limit)
    }

    /// Distances to the nearest source, stopping after `limit` hops.
    pub fn multi_bfs_idx<I: IntoIterator<Item = usize>>(&self, srcs: I, limit: u32) -> Vec<u32> {
        let mut dist = vec![INF; self.len()];
        let mut queue = VecDeque::new();
        for s in srcs {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            if du >= limit {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == INF {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Component label per index (labels are the smallest index of the component).
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.len()];
        for s in 0..self.len() {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = s;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = s;
                        stack.push(w);
                    }
                }
            }
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().iter().all(|&c| c == 0)
    }

    fn idx_set(&self, s: &Cluster) -> Result<Vec<usize>> {
        s.iter().map(|&v| self.idx(v)).collect()
    }

    fn to_ids(&self, dist: &[u32], t: u32) -> Cluster {
        dist.iter().enumerate().filter(|&(_, &d)| d <= t).map(|(i, _)| self.ids[i]).collect()
    }
}

/// Hop distance; `None` when `u` and `v` are in different components.
pub fn dist(g: &Graph, u: NodeId, v: NodeId) -> Result<Option<u32>> {
    let (iu, iv) = (g.idx(u)?, g.idx(v)?);
    let d = g.bfs_idx(iu, INF)[iv];
    Ok((d != INF).then_some(d))
}

pub fn ball(g: &Graph, v: NodeId, t: u32) -> Result<Cluster> {
    let d = g.bfs_idx(g.idx(v)?, t);
    Ok(g.to_ids(&d, t))
}

pub fn ball_of_set(g: &Graph, s: &Cluster, t: u32) -> Result<Cluster> {
    let d = g.multi_bfs_idx(g.idx_set(s)?, t);
    Ok(g.to_ids(&d, t))
}

/// Largest distance in `g` between members of `c`; `None` means infinite.
pub fn weak_diameter(g: &Graph, c: &Cluster) -> Result<Option<u32>> {
    if c.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let idx = g.idx_set(c)?;
    Ok(weak_diameter_idx(g, &idx))
}

pub(crate) fn weak_diameter_idx(g: &Graph, members: &[usize]) -> Option<u32> {
    let mut best = 0;
    for &s in members {
        let d = g.bfs_idx(s, INF);
        for &m in members {
            if d[m] == INF {
                return None;
            }
            best = best.max(d[m]);
        }
    }
    Some(best)
}

/// Connected components of `G[s]`, each sorted, ordered by smallest id.
pub fn induced_components(g: &Graph, s: &Cluster) -> Result<Vec<Cluster>> {
    let idx = g.idx_set(s)?;
    let mut mask = vec![false; g.len()];
    for &i in &idx {
        mask[i] = true;
    }
    Ok(components_of_mask(g, &mask).into_iter().map(|comp| comp.into_iter().map(|i| g.id(i)).collect()).collect())
}

/// Components of the subgraph induced by `mask`, as index lists.
pub(crate) fn components_of_mask(g: &Graph, mask: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for s in 0..g.len() {
        if !mask[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            k += 1;
            for &w in g.adj(u) {
                if mask[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// `ceil(log2 n)`, with the convention that it is at least 1.
pub fn log2_ceil(n: usize) -> u32 {
    if n <= 2 {
        1
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// A graph together with one input string per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub graph: Graph,
    inputs: Vec<BitString>,
}

impl Configuration {
    pub fn new(graph: Graph) -> Self {
        let inputs = vec![BitString::new(); graph.len()];
        Configuration { graph, inputs }
    }

    pub fn with_inputs(graph: Graph, inputs: &HashMap<NodeId, BitString>) -> Result<Self> {
        let mut cfg = Configuration::new(graph);
        for (&v, s) in inputs {
            cfg.set_input(v, s.clone())?;
        }
        Ok(cfg)
    }

    pub fn input(&self, v: NodeId) -> Result<&BitString> {
        Ok(&self.inputs[self.graph.idx(v)?])
    }

    pub fn set_input(&mut self, v: NodeId, s: BitString) -> Result<()> {
        let i = self.graph.idx(v)?;
        self.inputs[i] = s;
        Ok(())
    }

    /// Inputs aligned with the graph's index order.
    pub fn inputs(&self) -> &[BitString] {
        &self.inputs
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }
}
