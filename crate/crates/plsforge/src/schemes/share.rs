//! Sharing one string with every node at constant cost.
//!
//! A label is a bit `InU` followed by `PartS`. Nodes outside `U` form
//! connected 0-clusters of exactly `r` nodes, each holding the string spread
//! over it with the cluster codec; `U` nodes carry only their bit.

use std::collections::VecDeque;

use serde_json::{json, Value};

use super::codec::{decode_blocks, lex_blocks};
use crate::graph::{Configuration, Graph, INF};
use crate::pls::{Labeling, LocalView, Output, Scheme, Verdict, ViewFrame};
use crate::{BitString, Cluster, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringShare {
    pub r: usize,
    pub s: BitString,
}

impl StringShare {
    pub fn new(r: usize, s: BitString) -> Result<StringShare> {
        if r == 0 {
            return Err(Error::InvalidParams("r must be positive".into()));
        }
        Ok(StringShare { r, s })
    }
}

/// Connected `r`-subsets peeled from the graph, plus the leftover set `U`.
/// Each subset is a BFS prefix from the smallest id of a large enough
/// component of the remaining nodes; its remaining neighbors join `U`.
pub fn decompose(g: &Graph, r: usize) -> (Vec<Vec<usize>>, Vec<bool>) {
    let mut active = vec![true; g.len()];
    let mut clusters = Vec::new();
    loop {
        let mut start = None;
        let mut seen = vec![false; g.len()];
        for s in 0..g.len() {
            if !active[s] || seen[s] {
                continue;
            }
            let comp = bfs_within(g, s, &active, usize::MAX);
            for &u in &comp {
                seen[u] = true;
            }
            if comp.len() >= r {
                start = Some(s);
                break;
            }
        }
        let Some(s) = start else { break };
        let c = bfs_within(g, s, &active, r);
        for &u in &c {
            active[u] = false;
        }
        for &u in &c {
            for &w in g.adj(u) {
                active[w] = false;
            }
        }
        clusters.push(c);
    }
    let mut in_u = vec![true; g.len()];
    for c in &clusters {
        for &u in c {
            in_u[u] = false;
        }
    }
    (clusters, in_u)
}

/// First `limit` nodes of a BFS from `s` through active nodes.
fn bfs_within(g: &Graph, s: usize, active: &[bool], limit: usize) -> Vec<usize> {
    let mut seen = vec![false; g.len()];
    seen[s] = true;
    let mut out = vec![s];
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in g.adj(u) {
            if out.len() >= limit {
                return out;
            }
            if active[w] && !seen[w] {
                seen[w] = true;
                out.push(w);
                q.push_back(w);
            }
        }
    }
    out
}

/// Share labels carrying `s`, for a connected graph with more than `r` nodes.
pub fn share_labels(g: &Graph, r: usize, s: &BitString) -> Result<Vec<BitString>> {
    if !g.is_connected() || g.len() <= r {
        return Err(Error::Prover(format!("string sharing needs a connected graph with more than {r} nodes")));
    }
    let (clusters, in_u) = decompose(g, r);
    let mut labels: Vec<BitString> = in_u.iter().map(|&u| BitString::from_bools([u])).collect();
    for c in clusters {
        let ids: Cluster = c.iter().map(|&i| g.id(i)).collect();
        let mut sorted = c.clone();
        sorted.sort_unstable();
        for (i, block) in sorted.into_iter().zip(lex_blocks(&ids, s)) {
            labels[i].extend(&block);
        }
    }
    Ok(labels)
}

/// The shared string as seen from the center, or `None` to reject. Looks at
/// the ball of radius `4r + 2`, which must lie inside the view.
pub fn share_verify(view: &LocalView, r: usize) -> Option<BitString> {
    let r32 = r as u32;
    let view = view.restrict(4 * r32 + 2).ok()?;
    let g = view.graph();
    for l in view.labels() {
        match l.get(0) {
            None => return None,
            Some(true) if l.len() > 1 => return None,
            _ => {}
        }
    }
    let zero: Vec<bool> = view.labels().iter().map(|l| l.get(0) == Some(false)).collect();
    let mut comp = vec![usize::MAX; g.len()];
    let mut nearest = INF;
    let mut shared: Option<BitString> = None;
    for s in 0..g.len() {
        if !zero[s] || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut members = vec![s];
        let mut k = 0;
        while k < members.len() {
            for &w in g.adj(members[k]) {
                if zero[w] && comp[w] == usize::MAX {
                    comp[w] = s;
                    members.push(w);
                }
            }
            k += 1;
        }
        let d_min = members.iter().map(|&u| view.dist(u)).min().unwrap();
        let inside = members.iter().all(|&u| view.dist(u) <= 4 * r32 + 1);
        if d_min <= r32 && (!inside || members.len() != r) {
            return None;
        }
        if !inside {
            continue;
        }
        nearest = nearest.min(d_min);
        members.sort_unstable();
        let blocks: Vec<BitString> = members.iter().map(|&u| view.label(u).slice(1, view.label(u).len())).collect();
        let decoded = decode_blocks(&blocks)?;
        match &shared {
            Some(prev) if *prev != decoded => return None,
            _ => shared = Some(decoded),
        }
    }
    if nearest > r32 {
        return None;
    }
    shared
}

impl Scheme for StringShare {
    fn name(&self) -> String {
        "string-share".into()
    }

    fn radius(&self, _n: usize) -> u32 {
        4 * self.r as u32 + 2
    }

    fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
        if self.s.len() > self.r {
            return Err(Error::Prover(format!("string of {} bits exceeds r = {}", self.s.len(), self.r)));
        }
        Ok(Labeling(share_labels(&cfg.graph, self.r, &self.s)?))
    }

    fn verify(&self, view: &LocalView) -> Result<Verdict> {
        Ok(match share_verify(view, self.r) {
            Some(s) => Verdict::Accept(Output::Str(s)),
            None => Verdict::Reject,
        })
    }

    fn admissible(&self, _frame: &ViewFrame, label: &BitString) -> bool {
        matches!(label.get(0), Some(false)) || label.len() == 1
    }

    fn metadata(&self) -> Value {
        json!({ "name": self.name(), "r": self.r, "s": self.s.to_string() })
    }
}
