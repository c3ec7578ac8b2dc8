//! Proof labeling schemes: labelings, local views, verdicts and harnesses.

pub mod encoding;
mod harness;
mod view;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::graph::{Configuration, Graph, NodeId};
use crate::{BitString, Cluster, Error, Result};

pub use harness::{
    check_completeness, check_completeness_with, check_soundness_exhaustive, check_soundness_fuzz, exhaustive_search,
    scheme_cost, search_accepting, CompletenessFailure, CompletenessReport, FuzzReport, SearchSpace, SoundnessReport,
    DEFAULT_BUDGET,
};
pub use view::{LocalView, ViewFrame};

/// One label per node, aligned with the graph's index order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Labeling(pub Vec<BitString>);

impl Labeling {
    pub fn empty(n: usize) -> Labeling {
        Labeling(vec![BitString::new(); n])
    }

    pub fn from_map(g: &Graph, labels: &HashMap<NodeId, BitString>) -> Result<Labeling> {
        g.ids()
            .iter()
            .map(|v| labels.get(v).cloned().ok_or_else(|| Error::InvalidParams(format!("no label for node {v}"))))
            .collect::<Result<Vec<_>>>()
            .map(Labeling)
    }

    pub fn get(&self, g: &Graph, v: NodeId) -> Result<&BitString> {
        Ok(&self.0[g.idx(v)?])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Longest label, in bits.
    pub fn max_len(&self) -> usize {
        self.0.iter().map(BitString::len).max().unwrap_or(0)
    }

    /// `l <id> <hex> <bitlen>` per node.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        for (i, s) in self.0.iter().enumerate() {
            writeln!(out, "l {} {} {}", g.id(i), s.to_hex(), s.len()).unwrap();
        }
        out
    }

    pub fn from_text(g: &Graph, text: &str) -> Result<Labeling> {
        let mut labels = HashMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("bad label line {line:?}"));
            if f.len() != 4 || f[0] != "l" {
                return Err(bad());
            }
            let v: NodeId = f[1].parse().map_err(|_| bad())?;
            let len: usize = f[3].parse().map_err(|_| bad())?;
            if labels.insert(v, BitString::from_hex(f[2], Some(len))?).is_some() {
                return Err(Error::Parse(format!("repeated label for {v}")));
            }
        }
        if labels.len() != g.len() {
            return Err(Error::Parse(format!("{} labels for {} nodes", labels.len(), g.len())));
        }
        Labeling::from_map(g, &labels)
    }
}

/// What a TS-certifying verifier outputs at a node: each known cluster with
/// its part of `X`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TsOutput {
    pub comp: Vec<(Cluster, Cluster)>,
}

impl TsOutput {
    /// The entry whose cluster contains `v`.
    pub fn cluster_of(&self, v: NodeId) -> Option<&(Cluster, Cluster)> {
        self.comp.iter().find(|(c, _)| c.contains(&v))
    }
}

/// Auxiliary output of an accepting verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Output {
    None,
    Str(BitString),
    Ts(TsOutput),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept(Output),
    Reject,
}

impl Verdict {
    pub fn accept() -> Verdict {
        Verdict::Accept(Output::None)
    }

    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept(_))
    }

    pub fn output(&self) -> Option<&Output> {
        match self {
            Verdict::Accept(o) => Some(o),
            Verdict::Reject => None,
        }
    }
}

/// A prover together with a deterministic local verifier.
///
/// `verify` returns `Err` only for a verifier abort (for instance a search
/// budget running out), never to signal rejection.
pub trait Scheme: Send + Sync {
    fn name(&self) -> String;

    /// View radius on graphs of `n` nodes.
    fn radius(&self, n: usize) -> u32;

    fn prove(&self, cfg: &Configuration) -> Result<Labeling>;

    fn verify(&self, view: &LocalView) -> Result<Verdict>;

    /// Cheap necessary condition on the center's own label. The verifier must
    /// reject whenever this is false, so exhaustive search may skip such labels.
    fn admissible(&self, _frame: &ViewFrame, _label: &BitString) -> bool {
        true
    }

    fn metadata(&self) -> Value {
        json!({ "name": self.name() })
    }
}

impl<S: Scheme + ?Sized> Scheme for Arc<S> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn radius(&self, n: usize) -> u32 {
        (**self).radius(n)
    }
    fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
        (**self).prove(cfg)
    }
    fn verify(&self, view: &LocalView) -> Result<Verdict> {
        (**self).verify(view)
    }
    fn admissible(&self, frame: &ViewFrame, label: &BitString) -> bool {
        (**self).admissible(frame, label)
    }
    fn metadata(&self) -> Value {
        (**self).metadata()
    }
}

/// Ground truth for a configuration family.
pub trait Predicate: Send + Sync {
    fn holds(&self, cfg: &Configuration) -> bool;
}

impl<F: Fn(&Configuration) -> bool + Send + Sync> Predicate for F {
    fn holds(&self, cfg: &Configuration) -> bool {
        self(cfg)
    }
}

/// Labeled view of radius `t` at `v`.
pub fn extract_view(cfg: &Configuration, labeling: &Labeling, v: NodeId, t: u32) -> Result<LocalView> {
    if labeling.len() != cfg.len() {
        return Err(Error::InvalidParams(format!("{} labels for {} nodes", labeling.len(), cfg.len())));
    }
    let (frame, members) = ViewFrame::extract_with_members(cfg, v, t)?;
    let labels = members.iter().map(|&i| labeling.0[i].clone()).collect();
    LocalView::new(Arc::new(frame), labels)
}

/// Verdicts of every node, aligned with the graph's index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub verdicts: Vec<Verdict>,
}

impl RunOutcome {
    pub fn all_accept(&self) -> bool {
        self.verdicts.iter().all(Verdict::is_accept)
    }

    pub fn rejecting(&self, g: &Graph) -> Vec<NodeId> {
        (0..g.len()).filter(|&i| !self.verdicts[i].is_accept()).map(|i| g.id(i)).collect()
    }

    /// `{"per_node": {id: "accept"|"reject"}, "all_accept": bool}` in id order.
    pub fn to_json(&self, g: &Graph) -> Value {
        let per_node: serde_json::Map<String, Value> = (0..g.len())
            .map(|i| {
                let v = if self.verdicts[i].is_accept() { "accept" } else { "reject" };
                (g.id(i).to_string(), Value::from(v))
            })
            .collect();
        json!({ "per_node": per_node, "all_accept": self.all_accept() })
    }
}

pub fn run_scheme(s: &dyn Scheme, cfg: &Configuration, labeling: &Labeling) -> Result<RunOutcome> {
    let r = s.radius(cfg.len());
    let verdicts =
        cfg.graph.ids().iter().map(|&v| run_at(s, &extract_view(cfg, labeling, v, r)?)).collect::<Result<Vec<_>>>()?;
    Ok(RunOutcome { verdicts })
}

/// Verdict at one view, applying the admissibility contract first.
pub fn run_at(s: &dyn Scheme, view: &LocalView) -> Result<Verdict> {
    if !s.admissible(view.frame(), view.own_label()) {
        return Ok(Verdict::Reject);
    }
    s.verify(view)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct AlwaysAccept;
    impl Scheme for AlwaysAccept {
        fn name(&self) -> String {
            "accept".into()
        }
        fn radius(&self, _: usize) -> u32 {
            1
        }
        fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
            Ok(Labeling::empty(cfg.len()))
        }
        fn verify(&self, _: &LocalView) -> Result<Verdict> {
            Ok(Verdict::accept())
        }
    }

    struct EmptyOnly;
    impl Scheme for EmptyOnly {
        fn name(&self) -> String {
            "empty-only".into()
        }
        fn radius(&self, _: usize) -> u32 {
            0
        }
        fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
            Ok(Labeling::empty(cfg.len()))
        }
        fn verify(&self, view: &LocalView) -> Result<Verdict> {
            Ok(if view.own_label().is_empty() { Verdict::accept() } else { Verdict::Reject })
        }
    }

    fn cfg() -> Configuration {
        Configuration::new(Graph::from_edges([3, 5, 9], [(3, 5), (5, 9)]).unwrap())
    }

    #[test]
    fn trivial_verifiers() {
        let c = cfg();
        let empty = Labeling::empty(3);
        assert!(run_scheme(&AlwaysAccept, &c, &empty).unwrap().all_accept());
        assert!(run_scheme(&EmptyOnly, &c, &empty).unwrap().all_accept());
        let mut one = empty.clone();
        one.0[1] = BitString::parse01("1").unwrap();
        let out = run_scheme(&EmptyOnly, &c, &one).unwrap();
        assert_eq!(out.rejecting(&c.graph), vec![5]);
        let json = out.to_json(&c.graph);
        assert_eq!(json["per_node"]["5"], "reject");
        assert_eq!(json["all_accept"], false);
    }

    #[test]
    fn labeling_text_round_trip() {
        let c = cfg();
        let l =
            Labeling(vec![BitString::new(), BitString::parse01("10110").unwrap(), BitString::parse01("1").unwrap()]);
        assert_eq!(Labeling::from_text(&c.graph, &l.to_text(&c.graph)).unwrap(), l);
        assert!(Labeling::from_text(&c.graph, "l 3 - 0\n").is_err());
    }

    #[test]
    fn missing_label_is_error() {
        let c = cfg();
        assert!(extract_view(&c, &Labeling::empty(2), 3, 1).is_err());
    }
}
