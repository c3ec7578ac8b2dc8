//! Text format:
//!
//! ```text
//! # comment
//! n 3
//! v 0
//! v 1
//! v 7
//! e 0 1
//! e 1 7
//! i 7 a 3
//! ```
//!
//! `i <id> <hex> [bitlen]` attaches an input string; without `bitlen` every hex
//! digit counts four bits, and `-` is the empty string. An edge may be listed
//! in one direction or both; listing the same direction twice is an error.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::{Configuration, Graph, NodeId};
use crate::{BitString, Error, Result};

pub fn write_graph(cfg: &Configuration) -> String {
    let g = &cfg.graph;
    let mut out = String::new();
    writeln!(out, "n {}", g.len()).unwrap();
    for &v in g.ids() {
        writeln!(out, "v {v}").unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "e {a} {b}").unwrap();
    }
    for (i, s) in cfg.inputs().iter().enumerate() {
        if !s.is_empty() {
            writeln!(out, "i {} {} {}", g.id(i), s.to_hex(), s.len()).unwrap();
        }
    }
    out
}

pub fn read_graph(text: &str) -> Result<Configuration> {
    let mut declared: Option<usize> = None;
    let mut nodes = Vec::new();
    let mut arcs: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut inputs: HashMap<NodeId, BitString> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |k: usize| -> Result<u64> {
            fields
                .get(k)
                .ok_or_else(|| err(format!("missing field {k}")))?
                .parse::<u64>()
                .map_err(|e| err(e.to_string()))
        };
        match fields[0] {
            "n" if fields.len() == 2 => {
                if declared.is_some() {
                    return Err(err("repeated n line".into()));
                }
                declared = Some(num(1)? as usize);
            }
            "v" if fields.len() == 2 => nodes.push(num(1)?),
            "e" if fields.len() == 3 => {
                let (a, b) = (num(1)?, num(2)?);
                if !arcs.insert((a, b)) {
                    return Err(err(format!("duplicate edge {a} {b}")));
                }
            }
            "i" if fields.len() == 3 || fields.len() == 4 => {
                let v = num(1)?;
                let bitlen = if fields.len() == 4 { Some(num(3)? as usize) } else { None };
                let s = BitString::from_hex(fields[2], bitlen).map_err(|e| err(e.to_string()))?;
                if inputs.insert(v, s).is_some() {
                    return Err(err(format!("repeated input for {v}")));
                }
            }
            _ => return Err(err(format!("unrecognised line {line:?}"))),
        }
    }
    let declared = declared.ok_or_else(|| Error::Parse("missing n line".into()))?;
    if declared != nodes.len() {
        return Err(Error::Parse(format!("n says {declared} but {} nodes listed", nodes.len())));
    }
    let edges: BTreeSet<(NodeId, NodeId)> = arcs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    let graph = Graph::from_edges(nodes, edges)?;
    Configuration::with_inputs(graph, &inputs)
}
