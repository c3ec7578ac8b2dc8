//! Constant-size TS certification: the seed of a good run of `A` is shared
//! with every node, and each node recomputes cluster centers from the seed and
//! the `InT` bits around it.
//!
//! Label layout: `InT`, `InX`, then a string-share label carrying `nat(seed)`.

use serde_json::{json, Value};

use super::share::{share_labels, share_verify};
use super::ts_logn::{reconstruct, ClusterRule};
use super::TsScheme;
use crate::graph::{log2_ceil, Configuration, INF};
use crate::partition::{find_good_seed, RadiusFunction, Ratio, TsPartition};
use crate::pls::encoding::{nat, nat_len, BitReader};
use crate::pls::{Labeling, LocalView, Output, Scheme, Verdict, ViewFrame};
use crate::{BitString, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TsCertConst {
    pub t: u32,
    pub max_tries: usize,
}

impl TsCertConst {
    pub fn new(t: u32) -> TsCertConst {
        TsCertConst { t, max_tries: 1000 }
    }

    /// Cluster size used for sharing the seed on `n` nodes.
    pub fn share_r(n: usize) -> usize {
        (n.saturating_sub(1)).min(2 * log2_ceil(n) as usize)
    }
}

impl TsScheme for TsCertConst {
    fn prove_ts(&self, cfg: &Configuration) -> Result<(Labeling, TsPartition)> {
        let g = &cfg.graph;
        let n = g.len();
        if n < 2 || !g.is_connected() {
            return Err(Error::Prover("needs a connected graph with at least two nodes".into()));
        }
        let r = Self::share_r(n);
        let seeds = (0u64..).take_while(|&s| nat_len(s) <= r);
        let good = find_good_seed(g, self.t, seeds, self.max_tries)?;
        let share = share_labels(g, r, &nat(good.seed))?;
        let labels = (0..n)
            .map(|i| {
                let id = g.id(i);
                let mut l = BitString::from_bools([good.outcome.taken.contains(&id), good.outcome.x.contains(&id)]);
                l.extend(&share[i]);
                l
            })
            .collect();
        let p = good.outcome.partition().expect("good seed succeeded");
        Ok((Labeling(labels), p))
    }

    fn diameter_bound(&self, n: usize) -> u32 {
        16 * self.t * log2_ceil(n)
    }

    fn eps(&self, _n: usize) -> Ratio {
        Ratio::new(1, self.t as i64)
    }
}

impl Scheme for TsCertConst {
    fn name(&self) -> String {
        "ts-cert-const".into()
    }

    fn radius(&self, n: usize) -> u32 {
        40 * self.t * log2_ceil(n) + 2
    }

    fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
        Ok(self.prove_ts(cfg)?.0)
    }

    fn verify(&self, view: &LocalView) -> Result<Verdict> {
        if view.labels().iter().any(|l| l.len() < 3) {
            return Ok(Verdict::Reject);
        }
        let share = view.with_labels(view.labels().iter().map(|l| l.slice(2, l.len())).collect())?;
        let Some(s) = share_verify(&share, Self::share_r(view.n())) else { return Ok(Verdict::Reject) };
        let mut rd = BitReader::new(&s);
        let Some(seed) = rd.read_nat().filter(|_| rd.is_done()) else { return Ok(Verdict::Reject) };

        let g = view.graph();
        let l = log2_ceil(view.n());
        let rf = RadiusFunction::new(seed, self.t, view.n());
        let in_t: Vec<bool> = view.labels().iter().map(|l| l.get(0) == Some(true)).collect();
        let in_x: Vec<bool> = view.labels().iter().map(|l| l.get(1) == Some(true)).collect();
        // Centers are scanned in id order, so the first claim is the smallest.
        let needed = 32 * self.t * l + 2;
        let mut key: Vec<Option<u64>> = vec![None; g.len()];
        for w in (0..g.len()).filter(|&w| in_t[w]) {
            let d = g.bfs_idx(w, rf.get(g.id(w)));
            for u in 0..g.len() {
                if d[u] != INF && key[u].is_none() && view.dist(u) <= needed {
                    key[u] = Some(g.id(w));
                }
            }
        }
        if key[view.center_idx()].is_none() {
            return Ok(Verdict::Reject);
        }
        let d = self.diameter_bound(view.n());
        let rule = ClusterRule { reach: d, diameter: d, eps: self.eps(view.n()), check_all: false };
        Ok(match reconstruct(g, view.center_idx(), &key, &in_x, &rule) {
            Some(out) => Verdict::Accept(Output::Ts(out)),
            None => Verdict::Reject,
        })
    }

    fn admissible(&self, _frame: &ViewFrame, label: &BitString) -> bool {
        label.len() >= 3 && (label.get(2) == Some(false) || label.len() == 3)
    }

    fn metadata(&self) -> Value {
        json!({ "name": self.name(), "t": self.t, "max_tries": self.max_tries })
    }
}
