//! Distance-to-root certification of a spanning tree given by node inputs.
//!
//! The input of a node lists its tree neighbors as increasing naturals. A label
//! is `nat(root) nat(parent) nat(dist)`, with the root its own parent.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use super::compiler::ExtensionHook;
use crate::graph::{generate, Configuration, Graph, GraphKind};
use crate::pls::encoding::{nat, push_nat, BitReader};
use crate::pls::{Labeling, LocalView, Scheme, Verdict, ViewFrame};
use crate::rng::{keys, stream};
use crate::{BitString, Error, NodeId, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeLabel {
    pub root: NodeId,
    pub parent: NodeId,
    pub dist: u64,
}

impl TreeLabel {
    pub fn encode(&self) -> BitString {
        let mut out = nat(self.root);
        push_nat(&mut out, self.parent);
        push_nat(&mut out, self.dist);
        out
    }

    pub fn parse(s: &BitString) -> Option<TreeLabel> {
        let mut r = BitReader::new(s);
        let l = TreeLabel { root: r.read_nat()?, parent: r.read_nat()?, dist: r.read_nat()? };
        r.is_done().then_some(l)
    }
}

pub fn encode_marks<I: IntoIterator<Item = NodeId>>(ids: I) -> BitString {
    let mut sorted: Vec<NodeId> = ids.into_iter().collect();
    sorted.sort_unstable();
    let mut out = BitString::new();
    for v in sorted {
        push_nat(&mut out, v);
    }
    out
}

/// Strictly increasing ids, or `None`.
pub fn decode_marks(s: &BitString) -> Option<Vec<NodeId>> {
    let mut r = BitReader::new(s);
    let mut out: Vec<NodeId> = Vec::new();
    while !r.is_done() {
        let v = r.read_nat()?;
        if out.last().is_some_and(|&p| p >= v) {
            return None;
        }
        out.push(v);
    }
    Some(out)
}

/// `g` with the given edges marked as the tree.
pub fn tree_config(g: Graph, edges: &[(NodeId, NodeId)]) -> Result<Configuration> {
    let mut marks: HashMap<NodeId, Vec<NodeId>> = g.ids().iter().map(|&v| (v, Vec::new())).collect();
    for &(a, b) in edges {
        if !g.has_edge(a, b) {
            return Err(Error::InvalidParams(format!("{a}-{b} is not an edge")));
        }
        marks.get_mut(&a).unwrap().push(b);
        marks.get_mut(&b).unwrap().push(a);
    }
    let inputs = marks.into_iter().map(|(v, m)| (v, encode_marks(m))).collect();
    Configuration::with_inputs(g, &inputs)
}

/// Marked edges, if every input is well formed, names only neighbors, and
/// marks are symmetric.
pub fn marked_edges(cfg: &Configuration) -> Option<Vec<(NodeId, NodeId)>> {
    let g = &cfg.graph;
    let marks: Vec<Vec<NodeId>> = cfg.inputs().iter().map(decode_marks).collect::<Option<_>>()?;
    let mut edges = Vec::new();
    for (i, m) in marks.iter().enumerate() {
        let v = g.id(i);
        for &u in m {
            let j = g.try_idx(u)?;
            if !g.has_edge(v, u) || marks[j].binary_search(&v).is_err() {
                return None;
            }
            if v < u {
                edges.push((v, u));
            }
        }
    }
    Some(edges)
}

/// The marked edges form a spanning tree of a connected graph.
pub fn is_spanning_tree(cfg: &Configuration) -> bool {
    let g = &cfg.graph;
    match marked_edges(cfg) {
        Some(edges) if !g.is_empty() && edges.len() == g.len() - 1 => {
            Graph::from_edges(g.ids().iter().copied(), edges).is_ok_and(|t| t.is_connected())
        }
        _ => false,
    }
}

/// `g` with the BFS tree from its smallest id marked (parents by smallest id).
pub fn bfs_tree_instance(g: Graph) -> Result<Configuration> {
    if g.is_empty() || !g.is_connected() {
        return Err(Error::InvalidGraph("a spanning tree needs a non-empty connected graph".into()));
    }
    let dist = g.bfs_idx(0, u32::MAX - 1);
    let edges: Vec<(NodeId, NodeId)> = (1..g.len())
        .map(|i| {
            let p = g.adj(i).iter().copied().find(|&j| dist[j] + 1 == dist[i]).expect("connected");
            (g.id(i), g.id(p))
        })
        .collect();
    tree_config(g, &edges)
}

/// Random connected graph with a BFS tree from a random root marked.
pub fn random_instance(n: usize, extra: usize, seed: u64) -> Result<Configuration> {
    let g = generate(GraphKind::RandomConnected { n, extra }, seed)?;
    let mut rng = stream(seed, keys::INSTANCE);
    let root = rng.gen_range(0..g.len());
    let dist = g.bfs_idx(root, u32::MAX - 1);
    let mut edges = Vec::new();
    for i in 0..g.len() {
        if i == root {
            continue;
        }
        let ups: Vec<usize> = g.adj(i).iter().copied().filter(|&j| dist[j] + 1 == dist[i]).collect();
        let p = *ups.choose(&mut rng).expect("connected");
        edges.push((g.id(i), g.id(p)));
    }
    tree_config(g, &edges)
}

/// Breaks a valid instance by dropping a tree edge or, when possible, adding a non-tree edge.
pub fn corrupt(cfg: &Configuration, seed: u64) -> Result<Configuration> {
    let mut edges = marked_edges(cfg).ok_or_else(|| Error::InvalidParams("malformed tree input".into()))?;
    edges.sort_unstable();
    let mut rng = stream(seed, keys::INSTANCE ^ 1);
    let extra: Vec<(NodeId, NodeId)> =
        cfg.graph.edges().into_iter().filter(|e| edges.binary_search(e).is_err()).collect();
    if !extra.is_empty() && rng.gen() {
        edges.push(*extra.choose(&mut rng).unwrap());
    } else if !edges.is_empty() {
        let k = rng.gen_range(0..edges.len());
        edges.remove(k);
    } else {
        return Err(Error::InvalidParams("nothing to corrupt".into()));
    }
    tree_config(cfg.graph.clone(), &edges)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SpanningTree;

impl Scheme for SpanningTree {
    fn name(&self) -> String {
        "spanning-tree".into()
    }

    fn radius(&self, _n: usize) -> u32 {
        1
    }

    fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
        if !is_spanning_tree(cfg) {
            return Err(Error::Prover("marked edges are not a spanning tree".into()));
        }
        let g = &cfg.graph;
        let tree = Graph::from_edges(g.ids().iter().copied(), marked_edges(cfg).unwrap())?;
        let mut labels = vec![None; g.len()];
        let root = g.id(0);
        labels[0] = Some(TreeLabel { root, parent: root, dist: 0 });
        let mut q = VecDeque::from([0]);
        while let Some(i) = q.pop_front() {
            let d = labels[i].unwrap().dist;
            for &j in tree.adj(i) {
                if labels[j].is_none() {
                    labels[j] = Some(TreeLabel { root, parent: g.id(i), dist: d + 1 });
                    q.push_back(j);
                }
            }
        }
        Ok(Labeling(labels.into_iter().map(|l| l.unwrap().encode()).collect()))
    }

    fn verify(&self, view: &LocalView) -> Result<Verdict> {
        let ok = accepts_at(view.frame(), view.center_idx(), |i| Some(view.label(i)));
        Ok(if ok { Verdict::accept() } else { Verdict::Reject })
    }

    fn admissible(&self, _frame: &ViewFrame, label: &BitString) -> bool {
        TreeLabel::parse(label).is_some()
    }
}

/// The verifier at local node `c`, whose neighbors must all be in `frame`.
fn accepts_at<'a, F>(frame: &ViewFrame, c: usize, label: F) -> bool
where
    F: Fn(usize) -> Option<&'a BitString>,
{
    let g = &frame.graph;
    let parse = |i: usize| label(i).and_then(TreeLabel::parse);
    let Some(me) = parse(c) else { return false };
    let Some(my_marks) = decode_marks(&frame.inputs[c]) else { return false };
    let v = g.id(c);
    let nbrs = g.adj(c);
    if my_marks.iter().any(|&u| !g.contains(u) || !g.has_edge(v, u)) {
        return false;
    }
    let mut parent_label = None;
    for &j in nbrs {
        let u = g.id(j);
        let (Some(l), Some(marks)) = (parse(j), decode_marks(&frame.inputs[j])) else { return false };
        if l.root != me.root {
            return false;
        }
        let marked = my_marks.binary_search(&u).is_ok();
        if marked != marks.binary_search(&v).is_ok() {
            return false;
        }
        if marked && me.parent != u && l.parent != v {
            return false;
        }
        if me.parent == u {
            parent_label = Some((marked, l));
        }
    }
    if me.root == v {
        me.dist == 0 && me.parent == v
    } else {
        matches!(parent_label, Some((true, p)) if me.dist >= 1 && p.dist == me.dist - 1)
    }
}

/// Orients each marked component of the free set from one anchor: the root,
/// or a free node hanging off a marked fixed neighbor.
impl ExtensionHook for SpanningTree {
    fn extend(
        &self,
        frame: &ViewFrame,
        free: &[usize],
        fixed: &HashMap<usize, BitString>,
    ) -> Option<HashMap<usize, BitString>> {
        let g = &frame.graph;
        let is_free: HashMap<usize, usize> = free.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let marks = |i: usize| decode_marks(&frame.inputs[i]);
        let fixed_label = |i: usize| fixed.get(&i).and_then(TreeLabel::parse);
        // Marked neighbors of each free node.
        let mut marked_nbrs = Vec::with_capacity(free.len());
        for &i in free {
            let m = marks(i)?;
            marked_nbrs
                .push(g.adj(i).iter().copied().filter(|&j| m.binary_search(&g.id(j)).is_ok()).collect::<Vec<_>>());
        }
        let mut roots: Vec<NodeId> = free
            .iter()
            .flat_map(|&i| g.adj(i).iter().copied())
            .filter_map(|j| fixed_label(j).map(|l| l.root))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() > 1 {
            return None;
        }
        if roots.is_empty() {
            roots = free.iter().map(|&i| g.id(i)).collect();
        }
        // Marked components of the free set.
        let mut comp = vec![usize::MAX; free.len()];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for s in 0..free.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = comps.len();
            let mut members = vec![s];
            let mut k = 0;
            while k < members.len() {
                for &j in &marked_nbrs[members[k]] {
                    if let Some(&kj) = is_free.get(&j) {
                        if comp[kj] == usize::MAX {
                            comp[kj] = comps.len();
                            members.push(kj);
                        }
                    }
                }
                k += 1;
            }
            comps.push(members);
        }
        'roots: for root in roots {
            let mut out: HashMap<usize, TreeLabel> = HashMap::new();
            for members in &comps {
                let mut anchors = Vec::new();
                for &k in members {
                    let i = free[k];
                    if g.id(i) == root {
                        anchors = vec![(k, TreeLabel { root, parent: root, dist: 0 })];
                        break;
                    }
                    for &j in &marked_nbrs[k] {
                        if let Some(l) = fixed_label(j).filter(|l| l.root == root) {
                            anchors.push((k, TreeLabel { root, parent: g.id(j), dist: l.dist + 1 }));
                        }
                    }
                }
                let found = anchors
                    .into_iter()
                    .find_map(|(k, top)| orient(g, free, &is_free, &marked_nbrs, members, k, top, &fixed_label));
                match found {
                    Some(part) => out.extend(part),
                    None => continue 'roots,
                }
            }
            return Some(out.into_iter().map(|(i, l)| (i, l.encode())).collect());
        }
        None
    }
}

/// BFS orientation of one marked component from `start`; `None` unless the
/// component is a tree and every marked edge to a fixed node is a parent edge.
#[allow(clippy::too_many_arguments)]
fn orient(
    g: &Graph,
    free: &[usize],
    is_free: &HashMap<usize, usize>,
    marked_nbrs: &[Vec<usize>],
    members: &[usize],
    start: usize,
    top: TreeLabel,
    fixed_label: &dyn Fn(usize) -> Option<TreeLabel>,
) -> Option<HashMap<usize, TreeLabel>> {
    let mut lab: HashMap<usize, TreeLabel> = HashMap::from([(free[start], top)]);
    let mut q = VecDeque::from([start]);
    let mut inner_edges = 0;
    while let Some(k) = q.pop_front() {
        let i = free[k];
        let me = lab[&i];
        for &j in &marked_nbrs[k] {
            match is_free.get(&j) {
                Some(&kj) => {
                    inner_edges += 1;
                    if let std::collections::hash_map::Entry::Vacant(e) = lab.entry(j) {
                        e.insert(TreeLabel { root: me.root, parent: g.id(i), dist: me.dist + 1 });
                        q.push_back(kj);
                    }
                }
                None => {
                    let l = fixed_label(j)?;
                    let up = me.parent == g.id(j) && me.dist == l.dist + 1;
                    let down = l.parent == g.id(i) && l.dist == me.dist + 1;
                    if !(up || down) {
                        return None;
                    }
                }
            }
        }
    }
    (inner_edges / 2 + 1 == members.len()).then_some(lab)
}
