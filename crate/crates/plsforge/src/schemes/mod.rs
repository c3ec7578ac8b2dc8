//! Concrete schemes: TS certification, string sharing, the tradeoff compiler,
//! example 1-PLSs and the equality gadget.

pub mod bipartite;
pub mod codec;
pub mod compiler;
pub mod gadget;
pub mod registry;
pub mod share;
pub mod spanning_tree;
pub mod ts_const;
pub mod ts_logn;

use crate::graph::Configuration;
use crate::partition::{Ratio, TsPartition};
use crate::pls::{Labeling, Output, Scheme, TsOutput, Verdict};
use crate::Result;

pub use bipartite::Bipartite;
pub use codec::{lex_decode, lex_encode};
pub use compiler::{Compiled, ExtensionHook, ExtensionSolver};
pub use gadget::{reduce_exhaustive, reduce_to_eq, CommTranscript, EqualityGadget, GadgetPls};
pub use registry::{lookup, registered_names, tradeoff_row, Entry, Params, TradeoffRow};
pub use share::StringShare;
pub use spanning_tree::SpanningTree;
pub use ts_const::TsCertConst;
pub use ts_logn::{DiameterBound, TsCertLogn, TsSource};

/// A scheme whose accepting nodes output their part of a TS partition.
pub trait TsScheme: Scheme {
    /// Labels together with the partition they encode.
    fn prove_ts(&self, cfg: &Configuration) -> Result<(Labeling, TsPartition)>;

    /// Weak-diameter bound of certified clusters on `n` nodes.
    fn diameter_bound(&self, n: usize) -> u32;

    /// Cost-ratio bound on `n` nodes.
    fn eps(&self, n: usize) -> Ratio;
}

/// The TS output of an accepting verdict.
pub fn ts_output(v: &Verdict) -> Option<&TsOutput> {
    match v.output() {
        Some(Output::Ts(o)) => Some(o),
        _ => None,
    }
}
