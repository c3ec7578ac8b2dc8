//! `plsforge` command-line front-end.
//!
//! Exit codes: 0 pass, 1 suite or construction failure, 2 budget, parse or
//! parameter error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plsforge::graph::{generate, log2_ceil, read_graph, write_graph, GraphKind};
use plsforge::partition::{
    algorithm_a_capped, check_ts, cluster_degeneracy, degeneracy_to_ts, padded_carving, padded_threshold,
    warmup_carving, OrderedPartition, RadiusFunction, Ratio, TsPartition,
};
use plsforge::pls::{
    check_completeness, check_soundness_exhaustive, check_soundness_fuzz, scheme_cost, DEFAULT_BUDGET,
};
use plsforge::schemes::spanning_tree::bfs_tree_instance;
use plsforge::schemes::{lookup, registered_names, tradeoff_row, Params};
use plsforge::{BitString, Configuration, Error, Graph};

#[derive(Parser)]
#[command(name = "plsforge", version, about = "TS partitions and proof labeling schemes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    /// `path N`
    Path,
    /// `cycle N`
    Cycle,
    /// `grid ROWS COLS`
    Grid,
    /// `random N [EXTRA]`: random tree plus EXTRA edges (default N/2)
    Random,
    /// `tree N`
    Tree,
    /// `layered T M`: the equality gadget graph
    Layered,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algorithm {
    Warmup,
    Padded,
    #[value(name = "algA", alias = "alg-a")]
    AlgA,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Completeness,
    SoundExhaustive,
    SoundFuzz,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph file.
    Gen {
        kind: Kind,
        params: Vec<usize>,
        #[arg(long, env = "PLSFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a partition and report its metrics as JSON.
    Partition {
        algorithm: Algorithm,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        t: u32,
        #[arg(long, env = "PLSFORGE_SEED", default_value_t = 0)]
        seed: u64,
        /// Resamples per step (padded) or visited centers (algA).
        #[arg(long)]
        budget: Option<usize>,
        /// Padding parameter for `padded`; defaults to ln n.
        #[arg(long)]
        beta: Option<f64>,
        /// Where to write the partition file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a completeness or soundness suite and print a JSON report.
    Verify {
        #[arg(long)]
        scheme: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Instance file; generated instances are used when absent.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Gadget width for `equality-gadget`.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Cluster size for `string-share`.
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Size of generated instances.
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Number of generated instances for completeness.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Label length bound for exhaustive search; defaults to the honest cost.
        #[arg(long)]
        max_bits: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Search-node budget for exhaustive search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, env = "PLSFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Honest cost of a compiled scheme for each t, as CSV.
    TradeoffCurve {
        /// Base 1-PLS: spanning-tree or bipartite.
        #[arg(long, default_value = "spanning-tree")]
        scheme: String,
        #[arg(long, default_value = "ts-cert-const")]
        ts: String,
        #[arg(long, value_enum, default_value = "path")]
        family: Kind,
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Comma-separated values of t; may be empty.
        #[arg(long, default_value = "1,2,4,8,16")]
        t_list: String,
        #[arg(long, env = "PLSFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Suite,
    Error(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Error(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Error(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load(path: &Path) -> Result<Configuration, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    Ok(read_graph(&text)?)
}

fn family(kind: Kind, params: &[usize], seed: u64) -> Result<Graph, Failure> {
    let want = |k: usize| -> Result<(), Failure> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Failure::Error(format!("{kind:?} takes {k} parameter(s), got {}", params.len())))
        }
    };
    let g = match kind {
        Kind::Path => want(1).and_then(|_| Ok(generate(GraphKind::Path { n: params[0] }, seed)?)),
        Kind::Cycle => want(1).and_then(|_| Ok(generate(GraphKind::Cycle { n: params[0] }, seed)?)),
        Kind::Grid => want(2).and_then(|_| Ok(generate(GraphKind::Grid { rows: params[0], cols: params[1] }, seed)?)),
        Kind::Tree => want(1).and_then(|_| Ok(generate(GraphKind::RandomTree { n: params[0] }, seed)?)),
        Kind::Layered => want(2).and_then(|_| Ok(generate(GraphKind::Layered { t: params[0], m: params[1] }, seed)?)),
        Kind::Random => match params {
            [n] => Ok(generate(GraphKind::RandomConnected { n: *n, extra: n / 2 }, seed)?),
            [n, extra] => Ok(generate(GraphKind::RandomConnected { n: *n, extra: *extra }, seed)?),
            _ => Err(Failure::Error("random takes N [EXTRA]".into())),
        },
    }?;
    Ok(g)
}

fn cmd_gen(kind: Kind, params: &[usize], seed: u64, out: &Option<PathBuf>) -> CmdResult {
    let g = family(kind, params, seed)?;
    emit(out, &write_graph(&Configuration::new(g)))
}

fn ratio_json(r: Ratio) -> Value {
    json!(r.to_string())
}

fn ts_metrics(g: &Graph, p: &TsPartition, diameter: u32, eps: Ratio) -> Result<Value, Failure> {
    let rep = check_ts(g, p, diameter, eps)?;
    Ok(json!({
        "ok": rep.ok,
        "diameter_bound": diameter,
        "eps": ratio_json(eps),
        "violations": rep.violations,
    }))
}

fn cmd_partition(
    algorithm: Algorithm,
    graph: &Path,
    t: u32,
    seed: u64,
    budget: Option<usize>,
    beta: Option<f64>,
    out: &Option<PathBuf>,
) -> CmdResult {
    let cfg = load(graph)?;
    let g = &cfg.graph;
    let n = g.len();
    let log_bound = 16 * t * log2_ceil(n);
    let mut report = json!({
        "algorithm": format!("{algorithm:?}"),
        "graph": graph.display().to_string(),
        "n": n,
        "t": t,
        "seed": seed,
    });
    let ordered_metrics = |p: &OrderedPartition| -> Result<Value, Failure> {
        Ok(json!({
            "clusters": p.clusters.len(),
            "max_weak_diameter": p.max_weak_diameter(g)?,
            "cluster_degeneracy": ratio_json(cluster_degeneracy(g, p)?),
        }))
    };
    let (ts, ok) = match algorithm {
        Algorithm::Warmup => {
            let p = warmup_carving(g, t)?;
            let ts = degeneracy_to_ts(g, &p)?;
            let m = ordered_metrics(&p)?;
            let check = ts_metrics(g, &ts, log_bound, Ratio::new(1, t as i64))?;
            let ok = check["ok"] == json!(true);
            merge(&mut report, m);
            report["ts_check"] = check;
            (Some(ts), ok)
        }
        Algorithm::Padded => {
            let beta = beta.unwrap_or((n.max(2) as f64).ln());
            report["beta"] = json!(beta);
            match padded_carving(g, t, beta, seed, budget.unwrap_or(50)) {
                Ok(p) => {
                    let ts = degeneracy_to_ts(g, &p)?;
                    merge(&mut report, ordered_metrics(&p)?);
                    let check = ts_metrics(g, &ts, t, padded_threshold(beta, t))?;
                    let ok = check["ok"] == json!(true);
                    report["ts_check"] = check;
                    (Some(ts), ok)
                }
                Err(f) => {
                    report["failure"] = json!({
                        "step": f.step,
                        "alive": f.alive,
                        "best_ratio": ratio_json(f.best_ratio),
                        "threshold": ratio_json(f.threshold),
                        "message": f.to_string(),
                    });
                    (None, false)
                }
            }
        }
        Algorithm::AlgA => {
            let rf = RadiusFunction::new(seed, t, n);
            let outcome = algorithm_a_capped(g, t, &rf, budget.unwrap_or(usize::MAX))?;
            let ordered = OrderedPartition { clusters: outcome.clusters.iter().map(|(_, c)| c.clone()).collect() };
            report["clusters"] = json!(ordered.clusters.len());
            report["centers"] = json!(outcome.taken);
            report["alive"] = json!(outcome.alive);
            match outcome.partition() {
                Some(ts) => {
                    report["max_weak_diameter"] = json!(ordered.max_weak_diameter(g)?);
                    report["cluster_degeneracy"] = ratio_json(cluster_degeneracy(g, &ordered)?);
                    let check = ts_metrics(g, &ts, log_bound, Ratio::new(1, t as i64))?;
                    let ok = check["ok"] == json!(true);
                    report["ts_check"] = check;
                    (Some(ts), ok)
                }
                None => (None, false),
            }
        }
    };
    report["success"] = json!(ts.is_some());
    if let Some(ts) = &ts {
        report["cost_ratio"] = ratio_json(check_ts(g, ts, u32::MAX, Ratio::from_integer(1))?.cost_ratio);
        if let Some(path) = out {
            fs::write(path, ts.to_text())?;
        }
    }
    print!("{}", pretty(&report));
    if ok {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    scheme: &str,
    mode: Mode,
    graph: &Option<PathBuf>,
    params: Params,
    n: usize,
    count: usize,
    max_bits: Option<usize>,
    trials: usize,
    budget: u64,
    seed: u64,
    out: &Option<PathBuf>,
) -> CmdResult {
    let entry = lookup(scheme, &params)?;
    let s = entry.scheme.as_ref();
    let pred = entry.predicate.as_ref();
    let descriptor = match graph {
        Some(p) => p.display().to_string(),
        None => format!("generated n={n}"),
    };
    let fixed = graph.as_deref().map(load).transpose()?;
    let mut report = json!({
        "scheme": s.name(),
        "graph": descriptor,
        "mode": format!("{mode:?}"),
        "t": params.t,
        "seed": seed,
    });
    let (suite, pass) = match mode {
        Mode::Completeness => {
            let cfgs = match fixed {
                Some(c) => vec![c],
                None => (0..count as u64).map(|k| (entry.valid)(n, seed.wrapping_add(k))).collect::<Result<_, _>>()?,
            };
            report["n"] = json!(cfgs.iter().map(Configuration::len).max());
            let rep = check_completeness(s, pred, &cfgs)?;
            report["honest_cost_bits"] = json!(rep.cost);
            let pass = rep.ok;
            (serde_json::to_value(&rep).expect("serializable"), pass)
        }
        Mode::SoundExhaustive | Mode::SoundFuzz => {
            let cfg = match fixed {
                Some(c) => c,
                None => match &entry.invalid {
                    Some(make) => make(n, seed)?,
                    None => return Err(Failure::Error(format!("{scheme} has no generated no-instances"))),
                },
            };
            let nearby = vec![(entry.valid)(n, seed)?];
            let honest = scheme_cost(s, &nearby)?;
            report["n"] = json!(cfg.len());
            report["honest_cost_bits"] = json!(honest);
            if matches!(mode, Mode::SoundExhaustive) {
                let bits = max_bits.unwrap_or(honest);
                let rep = check_soundness_exhaustive(s, pred, &cfg, bits, budget)?;
                (json!({ "ok": rep.ok, "explored": rep.explored, "max_bits": bits, "budget": budget }), rep.ok)
            } else {
                let rep = check_soundness_fuzz(s, pred, &cfg, &nearby, trials, seed)?;
                (serde_json::to_value(&rep).expect("serializable"), rep.ok)
            }
        }
    };
    report["suites"] = json!({ format!("{mode:?}"): { "pass": pass, "report": suite } });
    report["metadata"] = s.metadata();
    emit(out, &pretty(&report))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}

fn cmd_tradeoff(
    base: &str,
    ts: &str,
    kind: Kind,
    n: usize,
    t_list: &str,
    seed: u64,
    out: &Option<PathBuf>,
) -> CmdResult {
    let ts_values = t_list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|e| Failure::Error(format!("bad t {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let params: Vec<usize> = match kind {
        Kind::Grid => {
            let side = (n as f64).sqrt().round() as usize;
            vec![side, side]
        }
        Kind::Layered => return Err(Failure::Error("layered graphs are not a tradeoff family".into())),
        _ => vec![n],
    };
    let g = family(kind, &params, seed)?;
    let cfg = match base {
        "spanning-tree" => bfs_tree_instance(g)?,
        _ => Configuration::new(g),
    };
    let mut csv = String::from("t,radius,cost_bits,ts_overhead_bits,error\n");
    let mut failed = false;
    for t in ts_values {
        match tradeoff_row(base, ts, &cfg, t) {
            Ok(r) => csv.push_str(&format!("{},{},{},{},\n", r.t, r.radius, r.cost_bits, r.ts_overhead_bits)),
            Err(e) => {
                failed = true;
                let msg = e.to_string().replace([',', '\n'], ";");
                csv.push_str(&format!("{t},,,,{msg}\n"));
            }
        }
    }
    emit(out, &csv)?;
    if failed {
        Err(Failure::Suite)
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Gen { kind, params, seed, out } => cmd_gen(kind, &params, seed, &out),
        Cmd::Partition { algorithm, graph, t, seed, budget, beta, out } => {
            cmd_partition(algorithm, &graph, t, seed, budget, beta, &out)
        }
        Cmd::Verify { scheme, mode, graph, t, m, r, n, count, max_bits, trials, budget, seed, out } => {
            if !registered_names().contains(&scheme) {
                return Err(Failure::Error(format!(
                    "unknown scheme {scheme:?}; known: {}",
                    registered_names().join(", ")
                )));
            }
            let params = Params { t, m, r, s: BitString::parse01("101").unwrap() };
            cmd_verify(&scheme, mode, &graph, params, n, count, max_bits, trials, budget, seed, &out)
        }
        Cmd::TradeoffCurve { scheme, ts, family, n, t_list, seed, out } => {
            cmd_tradeoff(&scheme, &ts, family, n, &t_list, seed, &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
