//! Named schemes with their predicates and instance generators, for the CLI
//! and the Python bindings.

use std::sync::Arc;

use serde::Serialize;

use super::bipartite::is_bipartite;
use super::spanning_tree::{corrupt, is_spanning_tree, random_instance};
use super::{Bipartite, Compiled, EqualityGadget, ExtensionSolver, GadgetPls, SpanningTree, StringShare};
use super::{TsCertConst, TsCertLogn, TsScheme};
use crate::graph::{generate, Configuration, GraphKind};
use crate::pls::{Predicate, Scheme};
use crate::{BitString, Error, Result};

/// Instance generator taking `(n, seed)`.
pub type Generator = Box<dyn Fn(usize, u64) -> Result<Configuration> + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub t: u32,
    /// Cluster size for `string-share`.
    pub r: usize,
    /// Gadget width.
    pub m: usize,
    /// String shared by `string-share`.
    pub s: BitString,
}

impl Default for Params {
    fn default() -> Params {
        Params { t: 1, r: 3, m: 3, s: BitString::parse01("101").unwrap() }
    }
}

pub struct Entry {
    pub scheme: Arc<dyn Scheme>,
    pub predicate: Arc<dyn Predicate>,
    /// Yes-instances.
    pub valid: Generator,
    /// No-instances, when the predicate has any on this family.
    pub invalid: Option<Generator>,
}

const BASES: [&str; 2] = ["spanning-tree", "bipartite"];
const TS: [&str; 2] = ["ts-cert-logn", "ts-cert-const"];

pub fn registered_names() -> Vec<String> {
    let mut out: Vec<String> =
        ["ts-cert-logn", "ts-cert-const", "string-share", "spanning-tree", "bipartite", "equality-gadget"]
            .map(String::from)
            .to_vec();
    for b in BASES {
        for t in TS {
            out.push(format!("compiled:{b}:{t}"));
        }
    }
    out
}

fn connected(n: usize, seed: u64) -> Result<Configuration> {
    Ok(Configuration::new(generate(GraphKind::RandomConnected { n, extra: n / 2 }, seed)?))
}

fn ts_scheme(name: &str, t: u32) -> Result<Arc<dyn TsScheme>> {
    match name {
        "ts-cert-logn" => Ok(Arc::new(TsCertLogn::warmup(t))),
        "ts-cert-const" => Ok(Arc::new(TsCertConst::new(t))),
        _ => Err(Error::InvalidParams(format!("unknown TS scheme {name:?}"))),
    }
}

fn tree_entry(scheme: Arc<dyn Scheme>) -> Entry {
    Entry {
        scheme,
        predicate: Arc::new(is_spanning_tree),
        valid: Box::new(|n, seed| random_instance(n, n / 2, seed)),
        invalid: Some(Box::new(|n, seed| corrupt(&random_instance(n, n / 2, seed)?, seed))),
    }
}

fn bipartite_entry(scheme: Arc<dyn Scheme>) -> Entry {
    Entry {
        scheme,
        predicate: Arc::new(is_bipartite),
        valid: Box::new(|n, seed| Ok(Configuration::new(generate(GraphKind::RandomTree { n }, seed)?))),
        invalid: Some(Box::new(|n, _| Ok(Configuration::new(generate(GraphKind::Cycle { n: n.max(3) | 1 }, 0)?)))),
    }
}

pub fn lookup(name: &str, params: &Params) -> Result<Entry> {
    if params.t == 0 {
        return Err(Error::InvalidParams("t must be at least 1".into()));
    }
    let t = params.t;
    Ok(match name {
        "ts-cert-logn" | "ts-cert-const" => Entry {
            scheme: ts_scheme(name, t)?,
            predicate: Arc::new(|c: &Configuration| c.graph.is_connected()),
            valid: Box::new(connected),
            invalid: None,
        },
        "string-share" => {
            let r = params.r;
            Entry {
                scheme: Arc::new(StringShare::new(r, params.s.clone())?),
                predicate: Arc::new(move |c: &Configuration| c.graph.is_connected() && c.len() > r),
                valid: Box::new(connected),
                invalid: None,
            }
        }
        "spanning-tree" => tree_entry(Arc::new(SpanningTree)),
        "bipartite" => bipartite_entry(Arc::new(Bipartite)),
        "equality-gadget" => {
            let gadget = EqualityGadget::new(t as usize, params.m)?;
            let (yes, no) = (gadget.clone(), gadget.clone());
            Entry {
                scheme: Arc::new(GadgetPls),
                predicate: Arc::new(gadget),
                valid: Box::new(move |_, seed| Ok(yes.random_yes(seed))),
                invalid: Some(Box::new(move |_, seed| Ok(no.random_no(seed)))),
            }
        }
        _ => {
            let parts: Vec<&str> = name.split(':').collect();
            let ["compiled", base, ts] = parts[..] else {
                return Err(Error::InvalidParams(format!("unknown scheme {name:?}")));
            };
            let ts = ts_scheme(ts, t)?;
            match base {
                "spanning-tree" => tree_entry(Arc::new(Compiled::new(
                    Arc::new(SpanningTree),
                    ts,
                    ExtensionSolver::Hook(Arc::new(SpanningTree)),
                ))),
                "bipartite" => bipartite_entry(Arc::new(Compiled::new(
                    Arc::new(Bipartite),
                    ts,
                    ExtensionSolver::Hook(Arc::new(Bipartite)),
                ))),
                _ => return Err(Error::InvalidParams(format!("unknown base scheme {base:?}"))),
            }
        }
    })
}

/// One point of the cost-versus-`t` curve of a compiled scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TradeoffRow {
    pub t: u32,
    pub radius: u32,
    /// Honest cost of the compiled scheme.
    pub cost_bits: usize,
    /// Honest cost of the TS part alone.
    pub ts_overhead_bits: usize,
}

/// Compiles `base` through the TS scheme `ts` with parameter `t` and
/// measures honest costs on `cfg`.
pub fn tradeoff_row(base: &str, ts: &str, cfg: &Configuration, t: u32) -> Result<TradeoffRow> {
    let entry = lookup(&format!("compiled:{base}:{ts}"), &Params { t, ..Params::default() })?;
    let ts = ts_scheme(ts, t)?;
    Ok(TradeoffRow {
        t,
        radius: entry.scheme.radius(cfg.len()),
        cost_bits: entry.scheme.prove(cfg)?.max_len(),
        ts_overhead_bits: ts.prove(cfg)?.max_len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pls::check_completeness;

    #[test]
    fn tradeoff_rows_on_a_path() {
        let cfg =
            crate::schemes::spanning_tree::bfs_tree_instance(generate(GraphKind::Path { n: 64 }, 0).unwrap()).unwrap();
        let rows: Vec<TradeoffRow> =
            [1, 4].iter().map(|&t| tradeoff_row("spanning-tree", "ts-cert-const", &cfg, t).unwrap()).collect();
        assert!(rows[1].cost_bits <= rows[0].cost_bits);
        assert!(rows.iter().all(|r| r.ts_overhead_bits < r.cost_bits));
        assert!(tradeoff_row("nope", "ts-cert-const", &cfg, 1).is_err());
    }

    #[test]
    fn every_name_resolves() {
        for name in registered_names() {
            let e = lookup(&name, &Params::default()).unwrap();
            assert_eq!(e.scheme.name(), name);
        }
        assert!(lookup("nope", &Params::default()).is_err());
        assert!(lookup("compiled:nope:ts-cert-logn", &Params::default()).is_err());
    }

    #[test]
    fn generated_instances_match_predicates() {
        for name in registered_names() {
            let e = lookup(&name, &Params::default()).unwrap();
            let cfgs: Vec<Configuration> = (0..2).map(|s| (e.valid)(12, s).unwrap()).collect();
            assert!(check_completeness(e.scheme.as_ref(), e.predicate.as_ref(), &cfgs).unwrap().ok, "{name}");
            if let Some(bad) = &e.invalid {
                assert!(!e.predicate.holds(&bad(12, 0).unwrap()), "{name}");
            }
        }
    }
}
