//! Two-coloring certificate for bipartiteness; a one-bit 1-PLS used to
//! exercise exhaustive extension search.

use std::collections::{HashMap, VecDeque};

use super::compiler::ExtensionHook;
use crate::graph::Configuration;
use crate::pls::{Labeling, LocalView, Scheme, Verdict, ViewFrame};
use crate::{BitString, Error, Graph, Result};

fn two_coloring(g: &Graph) -> Option<Vec<bool>> {
    let mut color = vec![None; g.len()];
    for s in 0..g.len() {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let c = color[u].unwrap();
            for &w in g.adj(u) {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        q.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    _ => {}
                }
            }
        }
    }
    color.into_iter().collect()
}

pub fn is_bipartite(cfg: &Configuration) -> bool {
    two_coloring(&cfg.graph).is_some()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Bipartite;

impl Scheme for Bipartite {
    fn name(&self) -> String {
        "bipartite".into()
    }

    fn radius(&self, _n: usize) -> u32 {
        1
    }

    fn prove(&self, cfg: &Configuration) -> Result<Labeling> {
        let colors = two_coloring(&cfg.graph).ok_or_else(|| Error::Prover("graph has an odd cycle".into()))?;
        Ok(Labeling(colors.into_iter().map(|c| BitString::from_bools([c])).collect()))
    }

    fn verify(&self, view: &LocalView) -> Result<Verdict> {
        let me = view.own_label();
        let ok = me.len() == 1
            && view.graph().adj(view.center_idx()).iter().all(|&j| {
                let l = view.label(j);
                l.len() == 1 && l.get(0) != me.get(0)
            });
        Ok(if ok { Verdict::accept() } else { Verdict::Reject })
    }

    fn admissible(&self, _frame: &ViewFrame, label: &BitString) -> bool {
        label.len() == 1
    }
}

/// Propagates colors from fixed neighbors through each free component.
impl ExtensionHook for Bipartite {
    fn extend(
        &self,
        frame: &ViewFrame,
        free: &[usize],
        fixed: &HashMap<usize, BitString>,
    ) -> Option<HashMap<usize, BitString>> {
        let g = &frame.graph;
        let in_free: HashMap<usize, ()> = free.iter().map(|&i| (i, ())).collect();
        let mut color: HashMap<usize, bool> = HashMap::new();
        for &s in free {
            if color.contains_key(&s) {
                continue;
            }
            // Two-color the component relative to `s`, then flip it to agree
            // with the first fixed neighbor found.
            color.insert(s, false);
            let mut comp = vec![s];
            let mut flip = None;
            let mut k = 0;
            while k < comp.len() {
                let u = comp[k];
                let c = color[&u];
                for &w in g.adj(u) {
                    if in_free.contains_key(&w) {
                        match color.get(&w) {
                            None => {
                                color.insert(w, !c);
                                comp.push(w);
                            }
                            Some(&cw) if cw == c => return None,
                            _ => {}
                        }
                    } else if let Some(fc) = fixed.get(&w).and_then(|l| l.get(0)) {
                        flip.get_or_insert(fc == c);
                    }
                }
                k += 1;
            }
            let flip = flip.unwrap_or(false);
            for u in &comp {
                *color.get_mut(u).unwrap() ^= flip;
            }
        }
        Some(color.into_iter().map(|(i, c)| (i, BitString::from_bools([c]))).collect())
    }
}
