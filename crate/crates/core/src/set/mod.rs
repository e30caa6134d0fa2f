//! The result set: its update procedure and the covering loop that fills it.

mod algebra;
mod miner;
mod update;

pub use algebra::{is_in, merge, root};
pub use miner::{run_esmamds, ColonyLog, RunReport, StopReason};
pub use update::{update_set, update_set_traced, UpdateEvent};

use crate::data::{Dataset, Extent};
use crate::stats::{BaselineMode, ScoredSubgroup};

/// Discovered subgroups in insertion order, with the level and baseline
/// they were admitted under.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupSet {
    pub members: Vec<ScoredSubgroup>,
    pub alpha: f64,
    pub baseline: BaselineMode,
}

impl SubgroupSet {
    pub fn new(alpha: f64, baseline: BaselineMode) -> Self {
        SubgroupSet {
            members: Vec::new(),
            alpha,
            baseline,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn extents(&self) -> Vec<Extent> {
        self.members.iter().map(|m| m.extent().clone()).collect()
    }

    /// Records covered by at least one member.
    pub fn covered(&self, dataset: &Dataset) -> Extent {
        let mut out = Extent::empty(dataset.n_records());
        for m in &self.members {
            out.union_with(m.extent());
        }
        out
    }
}
