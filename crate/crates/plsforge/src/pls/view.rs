use std::sync::Arc;

use crate::graph::{Configuration, Graph, NodeId, INF};
use crate::{BitString, Error, Result};

/// Topology and inputs of the ball `B_radius(center)`, without labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewFrame {
    pub center: NodeId,
    pub radius: u32,
    /// Declared size of the whole graph.
    pub n: usize,
    /// Induced subgraph on the ball, ids preserved.
    pub graph: Graph,
    /// Inputs aligned with `graph`'s index order.
    pub inputs: Vec<BitString>,
    /// Distance from the center, per local index.
    pub dist: Vec<u32>,
    center_idx: usize,
}

impl ViewFrame {
    /// Frame around `v` in `cfg`, declaring `n = cfg.len()`.
    pub fn extract(cfg: &Configuration, v: NodeId, radius: u32) -> Result<ViewFrame> {
        let (frame, _) = ViewFrame::extract_with_members(cfg, v, radius)?;
        Ok(frame)
    }

    /// Also returns the host index of every local node.
    pub fn extract_with_members(cfg: &Configuration, v: NodeId, radius: u32) -> Result<(ViewFrame, Vec<usize>)> {
        let g = &cfg.graph;
        let d = g.bfs_idx(g.idx(v)?, radius);
        let members: Vec<usize> = (0..g.len()).filter(|&i| d[i] != INF).collect();
        let graph = g.induced_by_idx(&members);
        let inputs = members.iter().map(|&i| cfg.inputs()[i].clone()).collect();
        let dist = members.iter().map(|&i| d[i]).collect();
        let center_idx = graph.idx(v)?;
        let frame = ViewFrame { center: v, radius, n: g.len(), graph, inputs, dist, center_idx };
        Ok((frame, members))
    }

    pub fn center_idx(&self) -> usize {
        self.center_idx
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Frame of radius `r` around local node `u`. Exact only when
    /// `dist(u) + r <= radius`, which is enforced.
    pub fn recenter(&self, u: usize, r: u32) -> Result<(ViewFrame, Vec<usize>)> {
        if self.dist[u].saturating_add(r) > self.radius {
            return Err(Error::Verifier(format!(
                "ball of radius {r} around {} leaves the view of radius {}",
                self.graph.id(u),
                self.radius
            )));
        }
        let d = self.graph.bfs_idx(u, r);
        let members: Vec<usize> = (0..self.len()).filter(|&i| d[i] != INF).collect();
        let graph = self.graph.induced_by_idx(&members);
        let inputs = members.iter().map(|&i| self.inputs[i].clone()).collect();
        let dist = members.iter().map(|&i| d[i]).collect();
        let center = self.graph.id(u);
        let center_idx = graph.idx(center)?;
        Ok((ViewFrame { center, radius: r, n: self.n, graph, inputs, dist, center_idx }, members))
    }
}

/// What a verifier sees at one node: a frame plus the labels on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalView {
    frame: Arc<ViewFrame>,
    labels: Vec<BitString>,
}

impl LocalView {
    pub fn new(frame: Arc<ViewFrame>, labels: Vec<BitString>) -> Result<LocalView> {
        if labels.len() != frame.len() {
            return Err(Error::InvalidParams(format!("{} labels for a view of {} nodes", labels.len(), frame.len())));
        }
        Ok(LocalView { frame, labels })
    }

    pub fn frame(&self) -> &Arc<ViewFrame> {
        &self.frame
    }

    pub fn center(&self) -> NodeId {
        self.frame.center
    }

    pub fn center_idx(&self) -> usize {
        self.frame.center_idx
    }

    pub fn radius(&self) -> u32 {
        self.frame.radius
    }

    pub fn n(&self) -> usize {
        self.frame.n
    }

    pub fn graph(&self) -> &Graph {
        &self.frame.graph
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn dist(&self, i: usize) -> u32 {
        self.frame.dist[i]
    }

    pub fn input(&self, i: usize) -> &BitString {
        &self.frame.inputs[i]
    }

    pub fn label(&self, i: usize) -> &BitString {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[BitString] {
        &self.labels
    }

    pub fn own_label(&self) -> &BitString {
        &self.labels[self.frame.center_idx]
    }

    /// Same frame, different labels.
    pub fn with_labels(&self, labels: Vec<BitString>) -> Result<LocalView> {
        LocalView::new(self.frame.clone(), labels)
    }

    /// View of radius `r` around local node `u` (see [`ViewFrame::recenter`]).
    pub fn recenter(&self, u: usize, r: u32) -> Result<LocalView> {
        let (frame, members) = self.frame.recenter(u, r)?;
        let labels = members.iter().map(|&i| self.labels[i].clone()).collect();
        LocalView::new(Arc::new(frame), labels)
    }

    /// The view shrunk to radius `r <= radius` around the same center.
    pub fn restrict(&self, r: u32) -> Result<LocalView> {
        if r == self.radius() {
            return Ok(self.clone());
        }
        self.recenter(self.center_idx(), r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> Configuration {
        Configuration::new(Graph::from_edges([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)]).unwrap())
    }

    #[test]
    fn radius_zero_and_one() {
        let cfg = path4();
        let f0 = ViewFrame::extract(&cfg, 2, 0).unwrap();
        assert_eq!(f0.graph.ids(), &[2]);
        let f1 = ViewFrame::extract(&cfg, 2, 1).unwrap();
        assert_eq!(f1.graph.ids(), &[1, 2, 3]);
        assert_eq!(f1.graph.edges(), vec![(1, 2), (2, 3)]);
        assert_eq!(f1.dist, vec![1, 0, 1]);
        assert_eq!(ViewFrame::extract(&cfg, 1, 10).unwrap().len(), 4);
    }

    #[test]
    fn restrict_matches_direct_extraction() {
        let cfg = path4();
        let frame = Arc::new(ViewFrame::extract(&cfg, 2, 2).unwrap());
        let labels: Vec<BitString> = (0..frame.len()).map(|i| BitString::from_uint(i as u64, 3)).collect();
        let view = LocalView::new(frame, labels).unwrap();
        let small = view.restrict(1).unwrap();
        assert_eq!(small.graph().ids(), &[1, 2, 3]);
        assert_eq!(small.labels(), &view.labels()[..3]);
        assert!(view.recenter(0, 2).is_err());
        assert_eq!(view.recenter(0, 1).unwrap().graph().ids(), &[1, 2]);
    }
}
