//! TS certification with a cluster id and an `X` bit per node.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::TsScheme;
use crate::graph::{log2_ceil, Configuration, Graph, INF};
use crate::partition::{check_ts, degeneracy_to_ts, find_good_seed, warmup_carving, Ratio, TsPartition};
use crate::pls::encoding::{push_nat, BitReader};
use crate::pls::{Labeling, LocalView, Output, Scheme, TsOutput, Verdict, ViewFrame};
use crate::{BitString, Cluster, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiameterBound {
    Fixed(u32),
    /// `16 t ceil(log2 n)`.
    Log {
        t: u32,
    },
}

impl DiameterBound {
    pub fn at(&self, n: usize) -> u32 {
        match *self {
            DiameterBound::Fixed(d) => d,
            DiameterBound::Log { t } => 16 * t * log2_ceil(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TsSource {
    /// Warm-up carving with parameter `t`, converted to a TS partition.
    Warmup {
        t: u32,
    },
    /// Algorithm `A` with the first good seed among `max_tries`.
    AlgA {
        t: u32,
        max_tries: usize,
    },
    Fixed(TsPartition),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsCertLogn {
    pub bound: DiameterBound,
    pub eps: Ratio,
    pub source: TsSource,
}

impl TsCertLogn {
    pub fn warmup(t: u32) -> TsCertLogn {
        TsCertLogn { bound: DiameterBound::Log { t }, eps: Ratio::new(1, t as i64), source: TsSource::Warmup { t } }
    }

    pub fn alg_a(t: u32) -> TsCertLogn {
        TsCertLogn {
            bound: DiameterBound::Log { t },
            eps: Ratio::new(1, t as i64),
            source: TsSource::AlgA { t, max_tries: 1000 },
        }
    }

    pub fn fixed(p: TsPartition, diameter: u32, eps: Ratio) -> TsCertLogn {
        TsCertLogn { bound: DiameterBound::Fixed(diameter), eps, source: TsSource::Fixed(p) }
    }

    fn partition(&self, cfg: &Configuration) -> Result<TsPartition> {
        let g = &cfg.graph;
        match &self.source {
            TsSource::Warmup { t } => degeneracy_to_ts(g, &warmup_carving(g, *t)?),
            TsSource::AlgA { t, max_tries } => {
                let good = find_good_seed(g, *t, 0.., *max_tries)?;
                Ok(good.outcome.partition().expect("good seed succeeded"))
            }
            TsSource::Fixed(p) => Ok(p.clone()),
        }
    }
}

pub fn encode_label(in_x: bool, comp_id: u64) -> BitString {
    let mut out = BitString::from_bools([in_x]);
    push_nat(&mut out, comp_id);
    out
}

pub fn parse_label(s: &BitString) -> Option<(bool, u64)> {
    let mut r = BitReader::new(s);
    let x = r.read_bit()?;
    let id = r.read_nat()?;
    r.is_done().then_some((x, id))
}

impl TsScheme for TsCertLogn {
    fn prove_ts(&self, cfg: &Configuration) -> Result<(Labeling, TsPartition)> {
        let g = &cfg.graph;
        let p = self.partition(cfg)?;
        let report = check_ts(g, &p, self.bound.at(g.len()), self.eps)?;
        if !report.ok {
            return Err(Error::Prover(format!("partition is not a TS partition: {:?}", report.violations)));
        }
        let owners = p.owners(g)?;
        let labels = (0..g.len())
            .map(|i| {
                let id = *p.clusters[owners[i]].first().expect("non-empty cluster");
                encode_label(p.x.contains(&g.id(i)), id)
            })
            .collect();
        Ok((Labeling(labels), p))
    }

    fn diameter_bound(&self, n: usize) -> u32 {
        self.bound.at(n)
    }

    fn eps(&self, _n: usize) -> Ratio {
        self.eps
    }
}

impl Scheme for TsCertLogn {
    fn name(&self) -> String {
        "ts-cert-logn".into()
    }

    fn radius(&self, n: usize) -> u32 {
        3 * self.bound.at(n) + 2
    }

    fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
        Ok(self.prove_ts(cfg)?.0)
    }

    fn verify(&self, view: &LocalView) -> Result<Verdict> {
        let mut key = Vec::with_capacity(view.len());
        let mut in_x = Vec::with_capacity(view.len());
        for l in view.labels() {
            let Some((x, id)) = parse_label(l) else { return Ok(Verdict::Reject) };
            key.push(Some(id));
            in_x.push(x);
        }
        let d = self.bound.at(view.n());
        let rule = ClusterRule { reach: view.radius(), diameter: d, eps: self.eps, check_all: true };
        Ok(match reconstruct(view.graph(), view.center_idx(), &key, &in_x, &rule) {
            Some(out) => Verdict::Accept(Output::Ts(out)),
            None => Verdict::Reject,
        })
    }

    fn admissible(&self, _frame: &ViewFrame, label: &BitString) -> bool {
        parse_label(label).is_some()
    }

    fn metadata(&self) -> Value {
        let source = match &self.source {
            TsSource::Warmup { t } => json!({ "warmup": t }),
            TsSource::AlgA { t, max_tries } => json!({ "alg_a": t, "max_tries": max_tries }),
            TsSource::Fixed(_) => json!("fixed"),
        };
        let bound = match self.bound {
            DiameterBound::Fixed(d) => json!(d),
            DiameterBound::Log { t } => json!(format!("16*{t}*ceil(log2 n)")),
        };
        json!({ "name": self.name(), "diameter": bound, "eps": self.eps.to_string(), "source": source })
    }
}

/// How a TS verifier turns per-node cluster keys into clusters.
pub(crate) struct ClusterRule {
    /// `C_u` is the set of same-key nodes within this view distance of `u`.
    pub reach: u32,
    pub diameter: u32,
    pub eps: Ratio,
    /// Check diameter and ratio on every output cluster, not only the own one.
    pub check_all: bool,
}

/// Shared reconstruction: builds `C_v` and the clusters around it from keys,
/// asserts the TS properties, and returns the output. `None` means reject.
pub(crate) fn reconstruct(
    g: &Graph,
    c: usize,
    key: &[Option<u64>],
    in_x: &[bool],
    rule: &ClusterRule,
) -> Option<TsOutput> {
    let cluster_at = |u: usize| -> Option<Vec<usize>> {
        let k = key[u]?;
        let d = g.bfs_idx(u, rule.reach);
        Some((0..g.len()).filter(|&w| d[w] != INF && key[w] == Some(k)).collect())
    };
    let own = cluster_at(c)?;
    let mut mine = vec![false; g.len()];
    for &u in &own {
        mine[u] = true;
    }
    let good = |members: &[usize]| -> bool {
        let x = members.iter().filter(|&&u| in_x[u]).count() as i64;
        if Ratio::new(x, members.len() as i64) > rule.eps {
            return false;
        }
        members.iter().all(|&u| {
            let d = g.bfs_idx(u, rule.diameter);
            members.iter().all(|&w| d[w] != INF)
        })
    };
    if !good(&own) {
        return None;
    }
    // Non-X members must be more than two hops from non-X outsiders.
    let near = g.multi_bfs_idx(own.iter().copied().filter(|&u| !in_x[u]), 2);
    if (0..g.len()).any(|w| near[w] != INF && !mine[w] && !in_x[w]) {
        return None;
    }
    let around = g.multi_bfs_idx(own.iter().copied(), 2);
    let mut comp: BTreeMap<Cluster, Cluster> = BTreeMap::new();
    for u in (0..g.len()).filter(|&u| around[u] != INF) {
        let members = cluster_at(u)?;
        let ids: Cluster = members.iter().map(|&w| g.id(w)).collect();
        if comp.contains_key(&ids) {
            continue;
        }
        if rule.check_all && !good(&members) {
            return None;
        }
        let xs: Cluster = members.iter().filter(|&&w| in_x[w]).map(|&w| g.id(w)).collect();
        comp.insert(ids, xs);
    }
    Some(TsOutput { comp: comp.into_iter().collect() })
}
