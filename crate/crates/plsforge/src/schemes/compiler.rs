//! Compiling a 1-PLS into a scheme with shorter labels and a larger radius.
//!
//! Only nodes in `X` keep their base label, and the base labels of each
//! cluster's `X` nodes are spread over the whole cluster. The leader of each
//! cluster (largest id outside `X`) reconstructs labels for the rest of its
//! cluster with an [`ExtensionSolver`] and checks the base verifier on every
//! node that depends on them.
//!
//! Label layout: `encode_tuple([ts_label, proof_part])`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};

use super::codec::{lex_decode, lex_encode};
use super::{ts_output, TsScheme};
use crate::graph::{Configuration, NodeId};
use crate::pls::encoding::{decode_tuple, decode_tuple_exact, encode_tuple};
use crate::pls::{exhaustive_search, run_at, Labeling, LocalView, Scheme, Verdict, ViewFrame};
use crate::{BitString, Error, Result};

/// Finds base labels for `free` nodes consistent with `fixed` ones.
/// Indices are local to `frame`. Any answer is re-checked by the caller.
pub trait ExtensionHook: Send + Sync {
    fn extend(
        &self,
        frame: &ViewFrame,
        free: &[usize],
        fixed: &HashMap<usize, BitString>,
    ) -> Option<HashMap<usize, BitString>>;
}

#[derive(Clone)]
pub enum ExtensionSolver {
    /// Every string of at most `max_bits` bits at every free node.
    Exhaustive {
        max_bits: usize,
        budget: u64,
    },
    /// The given candidates at every free node.
    Listed {
        candidates: Vec<BitString>,
        budget: u64,
    },
    Hook(Arc<dyn ExtensionHook>),
}

impl std::fmt::Debug for ExtensionSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtensionSolver::Exhaustive { max_bits, budget } => {
                write!(f, "Exhaustive {{ max_bits: {max_bits}, budget: {budget} }}")
            }
            ExtensionSolver::Listed { candidates, budget } => {
                write!(f, "Listed {{ {} candidates, budget: {budget} }}", candidates.len())
            }
            ExtensionSolver::Hook(_) => write!(f, "Hook"),
        }
    }
}

#[derive(Clone)]
pub struct Compiled {
    pub base: Arc<dyn Scheme>,
    pub ts: Arc<dyn TsScheme>,
    pub solver: ExtensionSolver,
}

impl Compiled {
    pub fn new(base: Arc<dyn Scheme>, ts: Arc<dyn TsScheme>, solver: ExtensionSolver) -> Compiled {
        Compiled { base, ts, solver }
    }

    pub fn encode_label(ts_label: &BitString, proof_part: &BitString) -> BitString {
        encode_tuple([ts_label, proof_part])
    }

    /// `encode_tuple` of the given base labels, in the order given.
    pub fn x_label<'a, I: IntoIterator<Item = &'a BitString>>(labels: I) -> BitString {
        encode_tuple(labels)
    }

    /// Labels of `H_C` nodes and the verdict of the base verifier on each.
    fn validate(&self, view: &LocalView, h: &[usize], base: &HashMap<usize, BitString>) -> Result<bool> {
        for &u in h {
            let (frame, members) = view.frame().recenter(u, 1)?;
            let Some(labels) = members.iter().map(|i| base.get(i).cloned()).collect::<Option<Vec<_>>>() else {
                return Ok(false);
            };
            if !run_at(self.base.as_ref(), &LocalView::new(Arc::new(frame), labels)?)?.is_accept() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn search(
        &self,
        view: &LocalView,
        free: &[usize],
        h: &[usize],
        fixed: &HashMap<usize, BitString>,
        pool: &[BitString],
        budget: u64,
    ) -> Result<bool> {
        let g = view.graph();
        let mut candidates = vec![vec![BitString::new()]; g.len()];
        for (&i, l) in fixed {
            candidates[i] = vec![l.clone()];
        }
        for &i in free {
            candidates[i] = pool.to_vec();
        }
        let mut views = vec![Vec::new(); g.len()];
        let mut checked = vec![false; g.len()];
        for &u in h {
            views[u] = std::iter::once(u).chain(g.adj(u).iter().copied()).collect();
            checked[u] = true;
        }
        let mut found = false;
        exhaustive_search(
            g,
            &views,
            &candidates,
            budget,
            |u, labels| {
                if !checked[u] {
                    return Ok(true);
                }
                let base: HashMap<usize, BitString> = views[u].iter().map(|&i| (i, labels[i].clone())).collect();
                self.validate(view, &[u], &base)
            },
            |_| {
                found = true;
                Ok(false)
            },
        )?;
        Ok(found)
    }
}

impl Scheme for Compiled {
    fn name(&self) -> String {
        format!("compiled:{}:{}", self.base.name(), self.ts.name())
    }

    fn radius(&self, n: usize) -> u32 {
        self.ts.radius(n).max(2 * self.ts.diameter_bound(n) + 2)
    }

    fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
        if self.base.radius(cfg.len()) != 1 {
            return Err(Error::InvalidParams("base scheme must have radius 1".into()));
        }
        let g = &cfg.graph;
        let base = self.base.prove(cfg)?;
        let (ts, p) = self.ts.prove_ts(cfg)?;
        let mut proof = vec![BitString::new(); g.len()];
        for c in &p.clusters {
            let xs = c.iter().filter(|v| p.x.contains(v)).map(|&v| base.get(g, v)).collect::<Result<Vec<_>>>()?;
            let x_label = Self::x_label(xs);
            for &v in c {
                proof[g.idx(v)?] = lex_encode(c, &x_label, v)?;
            }
        }
        Ok(Labeling(ts.0.iter().zip(&proof).map(|(a, b)| Self::encode_label(a, b)).collect()))
    }

    fn verify(&self, view: &LocalView) -> Result<Verdict> {
        let g = view.graph();
        let mut ts_labels = Vec::with_capacity(view.len());
        let mut proof: BTreeMap<NodeId, BitString> = BTreeMap::new();
        for (i, l) in view.labels().iter().enumerate() {
            let Some(mut parts) = decode_tuple_exact(l, 2) else { return Ok(Verdict::Reject) };
            proof.insert(g.id(i), parts.pop().unwrap());
            ts_labels.push(parts.pop().unwrap());
        }
        let ts_view = view.with_labels(ts_labels)?.restrict(self.ts.radius(view.n()).min(view.radius()))?;
        let ts_verdict = run_at(self.ts.as_ref(), &ts_view)?;
        let Some(ts) = ts_output(&ts_verdict) else { return Ok(Verdict::Reject) };

        // Base labels of every X node in the surrounding clusters.
        let mut in_x: HashMap<usize, bool> = HashMap::new();
        let mut fixed: HashMap<usize, BitString> = HashMap::new();
        for (c, xs) in &ts.comp {
            if c.iter().any(|&u| !g.contains(u)) {
                return Ok(Verdict::Reject);
            }
            let Ok(x_label) = lex_decode(c, &c.iter().map(|&u| (u, proof[&u].clone())).collect()) else {
                return Ok(Verdict::Reject);
            };
            let Some(parts) = decode_tuple(&x_label).filter(|p| p.len() == xs.len()) else {
                return Ok(Verdict::Reject);
            };
            for &u in c {
                in_x.insert(g.idx(u)?, xs.contains(&u));
            }
            for (&u, l) in xs.iter().zip(parts) {
                fixed.insert(g.idx(u)?, l);
            }
        }

        let c = view.center_idx();
        let around: Vec<usize> = std::iter::once(c).chain(g.adj(c).iter().copied()).collect();
        if around.iter().all(|u| in_x.get(u) == Some(&true)) && !self.validate(view, &[c], &fixed)? {
            return Ok(Verdict::Reject);
        }

        let Some((own, own_x)) = ts.cluster_of(view.center()) else { return Ok(Verdict::Reject) };
        let free: Vec<usize> = own.difference(own_x).map(|&u| g.idx(u)).collect::<Result<Vec<_>>>()?;
        if free.last() != Some(&c) {
            return Ok(Verdict::accept());
        }
        // Leader: nodes whose base verdict depends on a free label.
        let mut h: Vec<usize> = free.iter().flat_map(|&u| std::iter::once(u).chain(g.adj(u).iter().copied())).collect();
        h.sort_unstable();
        h.dedup();
        let ok = match &self.solver {
            ExtensionSolver::Hook(hook) => match hook.extend(view.frame(), &free, &fixed) {
                Some(sol) if free.iter().all(|u| sol.contains_key(u)) => {
                    let mut base = fixed.clone();
                    base.extend(free.iter().map(|u| (*u, sol[u].clone())));
                    self.validate(view, &h, &base)?
                }
                _ => false,
            },
            ExtensionSolver::Exhaustive { max_bits, budget } => {
                self.search(view, &free, &h, &fixed, &BitString::all_up_to(*max_bits), *budget)?
            }
            ExtensionSolver::Listed { candidates, budget } => {
                self.search(view, &free, &h, &fixed, candidates, *budget)?
            }
        };
        Ok(if ok { Verdict::accept() } else { Verdict::Reject })
    }

    fn admissible(&self, _frame: &ViewFrame, label: &BitString) -> bool {
        decode_tuple_exact(label, 2).is_some()
    }

    fn metadata(&self) -> Value {
        json!({
            "name": self.name(),
            "base": self.base.metadata(),
            "ts": self.ts.metadata(),
            "solver": format!("{:?}", self.solver),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::partition::{Ratio, TsPartition};
    use crate::pls::run_scheme;
    use crate::schemes::spanning_tree::{random_instance, tree_config};
    use crate::schemes::{Bipartite, SpanningTree, TsCertLogn};
    use crate::Cluster;

    fn seven_path_ts() -> Arc<dyn TsScheme> {
        let clusters: Vec<Cluster> = vec![[0, 1, 2].into(), [3, 4, 5, 6].into()];
        let x: Cluster = [2, 3].into();
        Arc::new(TsCertLogn::fixed(TsPartition { clusters, x }, 3, Ratio::new(1, 3)))
    }

    #[test]
    fn spanning_tree_through_hook() {
        let g = generate(GraphKind::Path { n: 7 }, 0).unwrap();
        let edges = g.edges();
        let cfg = tree_config(g, &edges).unwrap();
        let s = Compiled::new(Arc::new(SpanningTree), seven_path_ts(), ExtensionSolver::Hook(Arc::new(SpanningTree)));
        let l = s.prove(&cfg).unwrap();
        assert!(run_scheme(&s, &cfg, &l).unwrap().all_accept());
        let broken = tree_config(cfg.graph.clone(), &edges[1..]).unwrap();
        let l = s.prove(&cfg).unwrap();
        assert!(!run_scheme(&s, &broken, &l).unwrap().all_accept());
    }

    #[test]
    fn bipartite_through_exhaustive_solver() {
        let cfg = Configuration::new(generate(GraphKind::Path { n: 7 }, 0).unwrap());
        let solver = ExtensionSolver::Exhaustive { max_bits: 1, budget: 1 << 16 };
        let s = Compiled::new(Arc::new(Bipartite), seven_path_ts(), solver);
        let l = s.prove(&cfg).unwrap();
        assert!(run_scheme(&s, &cfg, &l).unwrap().all_accept());
    }

    #[test]
    fn warmup_compiled_spanning_tree() {
        for seed in 0..3 {
            let cfg = random_instance(30, 10, seed).unwrap();
            let ts: Arc<dyn TsScheme> = Arc::new(TsCertLogn::warmup(2));
            let s = Compiled::new(Arc::new(SpanningTree), ts, ExtensionSolver::Hook(Arc::new(SpanningTree)));
            let l = s.prove(&cfg).unwrap();
            assert!(run_scheme(&s, &cfg, &l).unwrap().all_accept());
        }
    }

    #[test]
    fn tampered_proof_part_rejects() {
        let g = generate(GraphKind::Path { n: 7 }, 0).unwrap();
        let edges = g.edges();
        let cfg = tree_config(g, &edges).unwrap();
        let s = Compiled::new(Arc::new(SpanningTree), seven_path_ts(), ExtensionSolver::Hook(Arc::new(SpanningTree)));
        let mut l = s.prove(&cfg).unwrap();
        let mut parts = decode_tuple_exact(&l.0[0], 2).unwrap();
        parts[1].flip(0);
        l.0[0] = Compiled::encode_label(&parts[0], &parts[1]);
        assert!(!run_scheme(&s, &cfg, &l).unwrap().all_accept());
    }
}
