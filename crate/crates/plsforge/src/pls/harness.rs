use std::collections::VecDeque;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{run_scheme, Labeling, LocalView, Predicate, Scheme, ViewFrame};
use crate::graph::{Configuration, Graph, NodeId};
use crate::rng::{keys, stream};
use crate::{BitString, Error, Result};

/// Default cap on search nodes for exhaustive enumeration.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessFailure {
    /// Index into the configuration list.
    pub config: usize,
    pub rejecting: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub ok: bool,
    pub checked: usize,
    /// Longest honest label seen, in bits.
    pub cost: usize,
    pub failures: Vec<CompletenessFailure>,
}

pub fn check_completeness(s: &dyn Scheme, pred: &dyn Predicate, cfgs: &[Configuration]) -> Result<CompletenessReport> {
    check_completeness_with(s, pred, cfgs, |c| s.prove(c))
}

/// Completeness with a substitute prover, e.g. a deliberately corrupted one.
pub fn check_completeness_with<P>(
    s: &dyn Scheme,
    pred: &dyn Predicate,
    cfgs: &[Configuration],
    prover: P,
) -> Result<CompletenessReport>
where
    P: Fn(&Configuration) -> Result<Labeling>,
{
    let mut failures = Vec::new();
    let mut cost = 0;
    for (k, cfg) in cfgs.iter().enumerate() {
        if !pred.holds(cfg) {
            return Err(Error::InvalidParams(format!("configuration {k} is not in the predicate")));
        }
        let labeling = prover(cfg)?;
        cost = cost.max(labeling.max_len());
        let out = run_scheme(s, cfg, &labeling)?;
        if !out.all_accept() {
            failures.push(CompletenessFailure { config: k, rejecting: out.rejecting(&cfg.graph) });
        }
    }
    Ok(CompletenessReport { ok: failures.is_empty(), checked: cfgs.len(), cost, failures })
}

/// Maximum honest label length over `cfgs`.
pub fn scheme_cost(s: &dyn Scheme, cfgs: &[Configuration]) -> Result<usize> {
    cfgs.iter().try_fold(0, |acc, c| Ok(acc.max(s.prove(c)?.max_len())))
}

/// Precomputed views and per-node candidate labels for exhaustive search.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    frames: Vec<Arc<ViewFrame>>,
    members: Vec<Vec<usize>>,
    /// Candidate labels per node (graph index order), admissible ones only.
    pub candidates: Vec<Vec<BitString>>,
}

impl SearchSpace {
    /// Every admissible label of at most `max_bits` bits at every node.
    pub fn new(s: &dyn Scheme, cfg: &Configuration, max_bits: usize) -> Result<SearchSpace> {
        let all = BitString::all_up_to(max_bits);
        SearchSpace::with_candidates(s, cfg, vec![all; cfg.len()])
    }

    pub fn with_candidates(
        s: &dyn Scheme,
        cfg: &Configuration,
        candidates: Vec<Vec<BitString>>,
    ) -> Result<SearchSpace> {
        if candidates.len() != cfg.len() {
            return Err(Error::InvalidParams("one candidate list per node required".into()));
        }
        let r = s.radius(cfg.len());
        let mut frames = Vec::with_capacity(cfg.len());
        let mut members = Vec::with_capacity(cfg.len());
        for &v in cfg.graph.ids() {
            let (f, m) = ViewFrame::extract_with_members(cfg, v, r)?;
            frames.push(Arc::new(f));
            members.push(m);
        }
        let candidates = candidates
            .into_iter()
            .zip(&frames)
            .map(|(list, f)| list.into_iter().filter(|l| s.admissible(f, l)).collect())
            .collect();
        Ok(SearchSpace { frames, members, candidates })
    }

    /// `log2` of the number of labelings in the space.
    pub fn log2_size(&self) -> f64 {
        self.candidates.iter().map(|c| (c.len() as f64).log2()).sum()
    }

    pub fn view_members(&self) -> &[Vec<usize>] {
        &self.members
    }

    fn view(&self, v: usize, labels: &[BitString]) -> Result<LocalView> {
        LocalView::new(self.frames[v].clone(), self.members[v].iter().map(|&i| labels[i].clone()).collect())
    }
}

/// Backtracking over labelings. Nodes are assigned in BFS order from the
/// smallest id; `eval(v, labels)` runs as soon as every node of `views[v]` is
/// assigned, and a `false` prunes the branch. `visit` sees each complete
/// labeling that survives and returns `false` to stop. Returns the number of
/// search nodes explored; exceeding `budget` is an error.
pub fn exhaustive_search<E, V>(
    g: &Graph,
    views: &[Vec<usize>],
    candidates: &[Vec<BitString>],
    budget: u64,
    mut eval: E,
    mut visit: V,
) -> Result<u64>
where
    E: FnMut(usize, &[BitString]) -> Result<bool>,
    V: FnMut(&[BitString]) -> Result<bool>,
{
    let order = bfs_order(g);
    let mut pos = vec![0; g.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut ready = vec![Vec::new(); g.len()];
    for v in 0..g.len() {
        let last = views[v].iter().map(|&u| pos[u]).max().unwrap_or(0);
        ready[last].push(v);
    }
    let mut labels = vec![BitString::new(); g.len()];
    let mut explored = 0u64;
    struct Ctx<'a, E, V> {
        order: &'a [usize],
        ready: &'a [Vec<usize>],
        candidates: &'a [Vec<BitString>],
        budget: u64,
        eval: &'a mut E,
        visit: &'a mut V,
    }
    fn rec<E, V>(cx: &mut Ctx<'_, E, V>, k: usize, labels: &mut Vec<BitString>, explored: &mut u64) -> Result<bool>
    where
        E: FnMut(usize, &[BitString]) -> Result<bool>,
        V: FnMut(&[BitString]) -> Result<bool>,
    {
        if k == cx.order.len() {
            return (cx.visit)(labels);
        }
        let v = cx.order[k];
        for cand in &cx.candidates[v] {
            *explored += 1;
            if *explored > cx.budget {
                return Err(Error::Budget(format!("exhaustive search exceeded {} search nodes", cx.budget)));
            }
            labels[v] = cand.clone();
            let mut ok = true;
            for &u in &cx.ready[k] {
                if !(cx.eval)(u, labels)? {
                    ok = false;
                    break;
                }
            }
            if ok && !rec(cx, k + 1, labels, explored)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    if g.is_empty() {
        visit(&labels)?;
        return Ok(0);
    }
    let mut cx = Ctx { order: &order, ready: &ready, candidates, budget, eval: &mut eval, visit: &mut visit };
    rec(&mut cx, 0, &mut labels, &mut explored)?;
    Ok(explored)
}

/// BFS from the smallest id of each component in turn.
fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.len()];
    let mut order = Vec::with_capacity(g.len());
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for &w in g.adj(u) {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    order
}

/// Calls `visit` on every labeling in `space` under which all nodes accept.
pub fn search_accepting<V>(
    s: &dyn Scheme,
    cfg: &Configuration,
    space: &SearchSpace,
    budget: u64,
    mut visit: V,
) -> Result<u64>
where
    V: FnMut(&Labeling) -> bool,
{
    exhaustive_search(
        &cfg.graph,
        &space.members,
        &space.candidates,
        budget,
        |v, labels| Ok(s.verify(&space.view(v, labels)?)?.is_accept()),
        |labels| Ok(visit(&Labeling(labels.to_vec()))),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub ok: bool,
    pub explored: u64,
    /// An all-accepting labeling, when one exists.
    #[serde(skip)]
    pub accepting: Option<Labeling>,
}

/// Searches every labeling with labels of at most `max_bits` bits for one
/// that all nodes accept; `ok` iff none exists.
pub fn check_soundness_exhaustive(
    s: &dyn Scheme,
    pred: &dyn Predicate,
    cfg: &Configuration,
    max_bits: usize,
    budget: u64,
) -> Result<SoundnessReport> {
    if pred.holds(cfg) {
        return Err(Error::InvalidParams("soundness needs a configuration outside the predicate".into()));
    }
    let space = SearchSpace::new(s, cfg, max_bits)?;
    let mut accepting = None;
    let explored = search_accepting(s, cfg, &space, budget, |l| {
        accepting = Some(l.clone());
        false
    })?;
    Ok(SoundnessReport { ok: accepting.is_none(), explored, accepting })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub ok: bool,
    pub trials: usize,
    pub note: &'static str,
    #[serde(skip)]
    pub counterexample: Option<Labeling>,
}

/// Random labelings of three kinds (fresh random bits, mutated honest
/// labelings of `nearby` valid configurations, labels spliced across nodes);
/// `ok` iff each one has a rejecting node.
pub fn check_soundness_fuzz(
    s: &dyn Scheme,
    pred: &dyn Predicate,
    cfg: &Configuration,
    nearby: &[Configuration],
    trials: usize,
    seed: u64,
) -> Result<FuzzReport> {
    if pred.holds(cfg) {
        return Err(Error::InvalidParams("soundness needs a configuration outside the predicate".into()));
    }
    let note = if trials == 0 { "vacuous: zero trials" } else { "statistical evidence, not a proof" };
    let honest: Vec<Labeling> = nearby.iter().filter_map(|c| s.prove(c).ok().map(|l| transplant(c, &l, cfg))).collect();
    let max_len = honest.iter().map(Labeling::max_len).max().unwrap_or(8).max(1);
    let mut rng = stream(seed, keys::FUZZ);
    for k in 0..trials {
        let labeling = match (k % 3, honest.choose(&mut rng)) {
            (1, Some(base)) => mutate(base, max_len, &mut rng),
            (2, Some(base)) => splice(base, &mut rng),
            _ => Labeling((0..cfg.len()).map(|_| random_bits(rng.gen_range(0..=max_len), &mut rng)).collect()),
        };
        if run_scheme(s, cfg, &labeling)?.all_accept() {
            return Ok(FuzzReport { ok: false, trials: k + 1, note, counterexample: Some(labeling) });
        }
    }
    Ok(FuzzReport { ok: true, trials, note, counterexample: None })
}

/// Carries a labeling of `from` onto `to`, by id where possible and by index otherwise.
fn transplant(from: &Configuration, l: &Labeling, to: &Configuration) -> Labeling {
    Labeling(
        (0..to.len())
            .map(|i| match from.graph.try_idx(to.graph.id(i)) {
                Some(j) => l.0[j].clone(),
                None => l.0[i % l.len().max(1)].clone(),
            })
            .collect(),
    )
}

fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> BitString {
    (0..len).map(|_| rng.gen::<bool>()).collect()
}

fn mutate(base: &Labeling, max_len: usize, rng: &mut ChaCha8Rng) -> Labeling {
    let mut l = base.clone();
    if l.is_empty() {
        return l;
    }
    for _ in 0..rng.gen_range(1..=3) {
        let v = rng.gen_range(0..l.len());
        let s = &mut l.0[v];
        match rng.gen_range(0..4) {
            0 if !s.is_empty() => {
                let i = rng.gen_range(0..s.len());
                s.flip(i);
            }
            1 if !s.is_empty() => {
                let keep = rng.gen_range(0..s.len());
                s.truncate(keep);
            }
            2 => s.push(rng.gen()),
            _ => *s = random_bits(rng.gen_range(0..=max_len), rng),
        }
    }
    l
}

fn splice(base: &Labeling, rng: &mut ChaCha8Rng) -> Labeling {
    let mut l = base.clone();
    if l.len() < 2 {
        return l;
    }
    for _ in 0..rng.gen_range(1..=3) {
        let a = rng.gen_range(0..l.len());
        let b = rng.gen_range(0..l.len());
        if rng.gen() {
            l.0.swap(a, b);
        } else {
            l.0[b] = l.0[a].clone();
        }
    }
    l
}
