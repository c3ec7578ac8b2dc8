//! Python bindings. Graphs, partitions and labelings cross the boundary in
//! their text formats; labels are `0`/`1` strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use plsforge::graph::{generate, read_graph, write_graph, GraphKind};
use plsforge::partition::{check_ts, degeneracy_to_ts, warmup_carving, Ratio, TsPartition};
use plsforge::pls::{check_completeness, check_soundness_fuzz, run_scheme, Labeling};
use plsforge::schemes::{lookup, registered_names, Entry, Params};
use plsforge::{BitString, Configuration};

fn err(e: plsforge::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn entry(scheme: &str, t: u32) -> PyResult<Entry> {
    lookup(scheme, &Params { t, ..Params::default() }).map_err(err)
}

fn config(text: &str) -> PyResult<Configuration> {
    read_graph(text).map_err(err)
}

#[pyfunction]
fn scheme_names() -> Vec<String> {
    registered_names()
}

/// Graph text for `kind` in {path, cycle, grid, random, tree}.
#[pyfunction]
#[pyo3(signature = (kind, params, seed=0))]
fn generate_graph(kind: &str, params: Vec<usize>, seed: u64) -> PyResult<String> {
    let gk = match (kind, params.as_slice()) {
        ("path", [n]) => GraphKind::Path { n: *n },
        ("cycle", [n]) => GraphKind::Cycle { n: *n },
        ("grid", [rows, cols]) => GraphKind::Grid { rows: *rows, cols: *cols },
        ("random", [n]) => GraphKind::RandomConnected { n: *n, extra: n / 2 },
        ("random", [n, extra]) => GraphKind::RandomConnected { n: *n, extra: *extra },
        ("tree", [n]) => GraphKind::RandomTree { n: *n },
        _ => return Err(PyValueError::new_err(format!("bad graph kind {kind:?} with {params:?}"))),
    };
    let g = generate(gk, seed).map_err(err)?;
    Ok(write_graph(&Configuration::new(g)))
}

/// Warmup carving turned into a TS partition; returns the partition text.
#[pyfunction]
fn warmup_partition(graph: &str, t: u32) -> PyResult<String> {
    let cfg = config(graph)?;
    let p = warmup_carving(&cfg.graph, t).map_err(err)?;
    Ok(degeneracy_to_ts(&cfg.graph, &p).map_err(err)?.to_text())
}

/// Whether `partition` is a TS partition of `graph` with the given weak
/// diameter bound and cost `eps_num / eps_den`.
#[pyfunction]
fn is_ts_partition(graph: &str, partition: &str, diameter: u32, eps_num: i64, eps_den: i64) -> PyResult<bool> {
    if eps_den <= 0 {
        return Err(PyValueError::new_err("eps_den must be positive"));
    }
    let cfg = config(graph)?;
    let p = TsPartition::from_text(partition).map_err(err)?;
    Ok(check_ts(&cfg.graph, &p, diameter, Ratio::new(eps_num, eps_den)).map_err(err)?.ok)
}

#[pyfunction]
#[pyo3(signature = (scheme, graph, t=1))]
fn prove(scheme: &str, graph: &str, t: u32) -> PyResult<Vec<String>> {
    let e = entry(scheme, t)?;
    let l = e.scheme.prove(&config(graph)?).map_err(err)?;
    Ok(l.0.iter().map(BitString::to_string).collect())
}

/// Per-node verdicts, in node order.
#[pyfunction]
#[pyo3(signature = (scheme, graph, labels, t=1))]
fn verify(scheme: &str, graph: &str, labels: Vec<String>, t: u32) -> PyResult<Vec<bool>> {
    let e = entry(scheme, t)?;
    let cfg = config(graph)?;
    let labels = labels
        .iter()
        .map(|s| BitString::parse01(s).ok_or_else(|| PyValueError::new_err(format!("bad label {s:?}"))))
        .collect::<PyResult<Vec<_>>>()?;
    let out = run_scheme(e.scheme.as_ref(), &cfg, &Labeling(labels)).map_err(err)?;
    Ok(out.verdicts.iter().map(|v| v.is_accept()).collect())
}

/// `(ok, honest cost in bits)` over `count` generated yes-instances.
#[pyfunction]
#[pyo3(signature = (scheme, n=16, count=10, seed=0, t=1))]
fn completeness(scheme: &str, n: usize, count: u64, seed: u64, t: u32) -> PyResult<(bool, usize)> {
    let e = entry(scheme, t)?;
    let cfgs = (0..count).map(|k| (e.valid)(n, seed.wrapping_add(k))).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let rep = check_completeness(e.scheme.as_ref(), e.predicate.as_ref(), &cfgs).map_err(err)?;
    Ok((rep.ok, rep.cost))
}

/// Fuzzed soundness on a generated no-instance.
#[pyfunction]
#[pyo3(signature = (scheme, n=16, trials=200, seed=0, t=1))]
fn soundness_fuzz(scheme: &str, n: usize, trials: usize, seed: u64, t: u32) -> PyResult<bool> {
    let e = entry(scheme, t)?;
    let make = e.invalid.as_ref().ok_or_else(|| PyValueError::new_err(format!("{scheme} has no no-instances")))?;
    let cfg = make(n, seed).map_err(err)?;
    let nearby = vec![(e.valid)(n, seed).map_err(err)?];
    let rep =
        check_soundness_fuzz(e.scheme.as_ref(), e.predicate.as_ref(), &cfg, &nearby, trials, seed).map_err(err)?;
    Ok(rep.ok)
}

#[pymodule]
fn plsforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(scheme_names, m)?)?;
    m.add_function(wrap_pyfunction!(generate_graph, m)?)?;
    m.add_function(wrap_pyfunction!(warmup_partition, m)?)?;
    m.add_function(wrap_pyfunction!(is_ts_partition, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(completeness, m)?)?;
    m.add_function(wrap_pyfunction!(soundness_fuzz, m)?)?;
    Ok(())
}
