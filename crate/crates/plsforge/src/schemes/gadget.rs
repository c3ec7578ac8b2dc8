//! The layered equality gadget, its 1-PLS, and the two-player reduction.
//!
//! Even-layer nodes carry `(i, I_i)`: the index in `ceil(log2 m)` bits
//! followed by the `i`-th segment of the left endpoint's input. Odd-layer
//! nodes carry nothing.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::graph::{generate, layered_layers, log2_ceil, Configuration, Graph, GraphKind, INF};
use crate::pls::encoding::{decode_tuple_exact, encode_tuple};
use crate::pls::{exhaustive_search, run_at, Labeling, LocalView, Predicate, Scheme, Verdict, ViewFrame};
use crate::rng::{keys, stream};
use crate::{BitString, Error, NodeId, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityGadget {
    pub t: usize,
    pub m: usize,
    layers: Vec<Vec<NodeId>>,
}

impl EqualityGadget {
    pub fn new(t: usize, m: usize) -> Result<EqualityGadget> {
        if t < 1 || m < 3 || m % 2 == 0 {
            return Err(Error::InvalidParams("gadget needs t >= 1 and odd m >= 3".into()));
        }
        Ok(EqualityGadget { t, m, layers: layered_layers(t, m) })
    }

    pub fn graph(&self) -> Graph {
        generate(GraphKind::Layered { t: self.t, m: self.m }, 0).expect("valid parameters")
    }

    /// Layer `j` is `layers()[j - 1]`.
    pub fn layers(&self) -> &[Vec<NodeId>] {
        &self.layers
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.layers[0][0], self.layers.last().unwrap()[0])
    }

    /// Nodes simulated by Alice: layers `1..=t+1`.
    pub fn alice_side(&self) -> Vec<NodeId> {
        self.layers[..=self.t].concat()
    }

    pub fn bob_side(&self) -> Vec<NodeId> {
        self.layers[self.t + 1..].concat()
    }

    pub fn config(&self, x: &BitString, y: &BitString) -> Result<Configuration> {
        if x.len() != self.m * self.m || y.len() != self.m * self.m {
            return Err(Error::InvalidParams(format!("endpoint inputs need {} bits", self.m * self.m)));
        }
        self.config_unchecked(x, y)
    }

    fn config_unchecked(&self, x: &BitString, y: &BitString) -> Result<Configuration> {
        let (a, b) = self.endpoints();
        let mut cfg = Configuration::new(self.graph());
        cfg.set_input(a, x.clone())?;
        cfg.set_input(b, y.clone())?;
        Ok(cfg)
    }

    /// `(X, X)` for a random `X`.
    pub fn random_yes(&self, seed: u64) -> Configuration {
        let mut rng = stream(seed, keys::INSTANCE);
        let x: BitString = (0..self.m * self.m).map(|_| rng.gen::<bool>()).collect();
        self.config(&x, &x).expect("lengths match")
    }

    /// A yes-instance with one bit of `Y` flipped.
    pub fn random_no(&self, seed: u64) -> Configuration {
        let mut cfg = self.random_yes(seed);
        let (_, b) = self.endpoints();
        let mut y = cfg.input(b).unwrap().clone();
        let k = stream(seed, keys::INSTANCE ^ 1).gen_range(0..y.len());
        y.flip(k);
        cfg.set_input(b, y).unwrap();
        cfg
    }
}

/// Both endpoints hold `m^2` bits and they are equal.
impl Predicate for EqualityGadget {
    fn holds(&self, cfg: &Configuration) -> bool {
        let (a, b) = self.endpoints();
        match (cfg.input(a), cfg.input(b)) {
            (Ok(x), Ok(y)) => x.len() == self.m * self.m && x == y,
            _ => false,
        }
    }
}

/// The 1-PLS of the gadget; it reads only degrees, so it needs no parameters.
#[derive(Clone, Copy, Debug, Default)]
pub struct GadgetPls;

fn parse_pair(l: &BitString, m: usize) -> Option<(usize, BitString)> {
    let b = log2_ceil(m) as usize;
    if l.len() < b {
        return None;
    }
    let i = l.slice(0, b).to_uint()? as usize;
    (i < m).then(|| (i, l.slice(b, l.len())))
}

pub fn gadget_label(i: usize, m: usize, segment: &BitString) -> BitString {
    let mut out = BitString::from_uint(i as u64, log2_ceil(m) as usize);
    out.extend(segment);
    out
}

impl Scheme for GadgetPls {
    fn name(&self) -> String {
        "equality-gadget".into()
    }

    fn radius(&self, _n: usize) -> u32 {
        1
    }

    fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
        let g = &cfg.graph;
        let first = g.id(0);
        let degree = g.degree(first)?;
        let m = degree;
        let x = cfg.input(first)?;
        if m < 3 || x.len() != m * m {
            return Err(Error::Prover("not a gadget yes-instance".into()));
        }
        let mut labels = Labeling::empty(g.len());
        // Even-layer nodes in id order are `v_1..v_m` of their layer.
        let mut rank = 0;
        for i in 0..g.len() {
            if g.adj(i).len() == 2 {
                let k = rank % m;
                labels.0[i] = gadget_label(k, m, &x.slice(k * m, (k + 1) * m));
                rank += 1;
            }
        }
        Ok(labels)
    }

    fn verify(&self, view: &LocalView) -> Result<Verdict> {
        let c = view.center_idx();
        let nbrs = view.graph().adj(c);
        let deg = nbrs.len();
        let ok = if deg == 2 {
            true
        } else if deg > 2 && deg % 2 == 0 {
            let m = deg / 2;
            let mut seen: Vec<Vec<BitString>> = vec![Vec::new(); m];
            let parsed = nbrs.iter().all(|&j| match parse_pair(view.label(j), m) {
                Some((i, s)) => {
                    seen[i].push(s);
                    true
                }
                None => false,
            });
            parsed && seen.iter().all(|s| s.len() == 2 && s[0] == s[1])
        } else if deg > 2 {
            let m = deg;
            let mut seen: Vec<Option<BitString>> = vec![None; m];
            let parsed = nbrs.iter().all(|&j| match parse_pair(view.label(j), m) {
                Some((i, s)) => seen[i].replace(s).is_none(),
                None => false,
            });
            parsed && {
                let mut joined = BitString::new();
                seen.iter().flatten().for_each(|s| joined.extend(s));
                seen.iter().all(Option::is_some) && joined == *view.input(c)
            }
        } else {
            false
        };
        Ok(if ok { Verdict::accept() } else { Verdict::Reject })
    }

    /// Odd-layer nodes must carry the empty label.
    fn admissible(&self, frame: &ViewFrame, label: &BitString) -> bool {
        frame.graph.adj(frame.center_idx()).len() == 2 || label.is_empty()
    }
}

/// What each player saw and concluded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommTranscript {
    pub alice_input: String,
    pub bob_input: String,
    pub witness_bits: usize,
    pub alice: bool,
    pub bob: bool,
    pub parse_failure: bool,
}

/// Per-node frames as seen by the player simulating that node. Errors if a
/// frame would contain the other player's endpoint.
fn player_frames(
    s: &dyn Scheme,
    gadget: &EqualityGadget,
    x: &BitString,
    y: &BitString,
) -> Result<Vec<(ViewFrame, Vec<usize>)>> {
    let blank = BitString::new();
    let alice_cfg = gadget.config_unchecked(x, &blank)?;
    let bob_cfg = gadget.config_unchecked(&blank, y)?;
    let (a, b) = gadget.endpoints();
    let alice: Vec<NodeId> = gadget.alice_side();
    let r = s.radius(alice_cfg.len());
    alice_cfg
        .graph
        .ids()
        .iter()
        .map(|&v| {
            let (cfg, hidden) = if alice.contains(&v) { (&alice_cfg, b) } else { (&bob_cfg, a) };
            let out = ViewFrame::extract_with_members(cfg, v, r)?;
            if out.0.graph.contains(hidden) {
                return Err(Error::Verifier(format!("view of node {v} reaches the other player's endpoint {hidden}")));
            }
            Ok(out)
        })
        .collect()
}

/// Runs both players on `witness`, read as one label per node in id order.
pub fn reduce_to_eq(
    s: &dyn Scheme,
    gadget: &EqualityGadget,
    x: &BitString,
    y: &BitString,
    witness: &BitString,
) -> Result<CommTranscript> {
    let frames = player_frames(s, gadget, x, y)?;
    let n = frames.len();
    let mut out = CommTranscript {
        alice_input: x.to_string(),
        bob_input: y.to_string(),
        witness_bits: witness.len(),
        alice: false,
        bob: false,
        parse_failure: false,
    };
    let Some(labels) = decode_tuple_exact(witness, n) else {
        out.parse_failure = true;
        return Ok(out);
    };
    let alice: Vec<NodeId> = gadget.alice_side();
    out.alice = true;
    out.bob = true;
    for (frame, members) in frames {
        let view = LocalView::new(Arc::new(frame), members.iter().map(|&i| labels[i].clone()).collect())?;
        let accept = run_at(s, &view)?.is_accept();
        if alice.contains(&view.center()) {
            out.alice &= accept;
        } else {
            out.bob &= accept;
        }
    }
    Ok(out)
}

/// The witness an honest prover would send for `(x, x)`.
pub fn honest_witness(s: &dyn Scheme, gadget: &EqualityGadget, x: &BitString) -> Result<BitString> {
    Ok(encode_tuple(&s.prove(&gadget.config(x, x)?)?.0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionSearch {
    pub explored: u64,
    /// A witness both players accept, if any.
    pub both_accept: Option<String>,
}

/// Every witness whose labels are at most `max_bits` long, evaluated by the
/// two players with pruning on the first rejecting node.
pub fn reduce_exhaustive(
    s: &dyn Scheme,
    gadget: &EqualityGadget,
    x: &BitString,
    y: &BitString,
    max_bits: usize,
    budget: u64,
) -> Result<ReductionSearch> {
    let frames: Vec<(Arc<ViewFrame>, Vec<usize>)> =
        player_frames(s, gadget, x, y)?.into_iter().map(|(f, m)| (Arc::new(f), m)).collect();
    let g = gadget.graph();
    let all = BitString::all_up_to(max_bits);
    let candidates: Vec<Vec<BitString>> =
        frames.iter().map(|(f, _)| all.iter().filter(|l| s.admissible(f, l)).cloned().collect()).collect();
    let members: Vec<Vec<usize>> = frames.iter().map(|(_, m)| m.clone()).collect();
    let mut both = None;
    let explored = exhaustive_search(
        &g,
        &members,
        &candidates,
        budget,
        |v, labels| {
            let (f, m) = &frames[v];
            let view = LocalView::new(f.clone(), m.iter().map(|&i| labels[i].clone()).collect())?;
            Ok(s.verify(&view)?.is_accept())
        },
        |labels| {
            both = Some(encode_tuple(labels).to_string());
            Ok(false)
        },
    )?;
    Ok(ReductionSearch { explored, both_accept: both })
}

/// Distance between the two endpoints, for geometry checks.
pub fn endpoint_distance(gadget: &EqualityGadget) -> u32 {
    let g = gadget.graph();
    let (a, b) = gadget.endpoints();
    let d = g.bfs_idx(g.idx(a).unwrap(), INF - 1);
    d[g.idx(b).unwrap()]
}
