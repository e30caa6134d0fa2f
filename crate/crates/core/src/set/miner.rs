use log::debug;

use crate::data::{Dataset, Description};
use crate::error::Result;
use crate::search::{init_heuristics, seeded_rng, subgroup_search, PheromoneTable, SearchParams};

use super::{update_set, SubgroupSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// Every record is covered by some member.
    AllCovered,
    /// The uncovered set stayed the same for more than `max_stag` colonies.
    Stagnation,
}

/// What one colony did to the run state.
#[derive(Clone, Debug, PartialEq)]
pub struct ColonyLog {
    pub ants: usize,
    pub converged: bool,
    /// The colony's best subgroup, if any.
    pub found: Option<Description>,
    pub set_size: usize,
    /// Uncovered records before minus after this colony.
    pub delta_uncovered: i64,
    pub uncovered: usize,
    pub stagnation: usize,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub set: SubgroupSet,
    pub colonies: Vec<ColonyLog>,
    pub stop: StopReason,
    /// How many colony results used each item, indexed by item id.
    pub usage_counts: Vec<usize>,
}

/// Runs colonies until every record is covered or the uncovered set
/// stagnates, offering each colony's best subgroup to the result set.
pub fn run_esmamds(dataset: &Dataset, params: &SearchParams) -> Result<RunReport> {
    params.validate()?;
    let mut rng = seeded_rng(params.seed);
    let mut set = SubgroupSet::new(params.alpha, params.baseline);
    let mut uncovered = dataset.all();
    let mut usage_counts = vec![0usize; dataset.n_items()];
    let mut stagnation = 0;
    let mut colonies = Vec::new();

    while !uncovered.is_empty() && stagnation <= params.max_stag {
        let heur = init_heuristics(dataset, &uncovered, &usage_counts, &set.extents(), params);
        let mut tau = PheromoneTable::uniform(dataset.n_items());
        let outcome = subgroup_search(dataset, &heur, &mut tau, params, &mut rng);
        if let Some(best) = &outcome.best {
            for &item in best.description().items() {
                usage_counts[dataset.item_id(item)] += 1;
            }
            set = update_set(best, &set, dataset)?;
        }
        let next = set.covered(dataset).complement();
        let delta = uncovered.len() as i64 - next.len() as i64;
        if next == uncovered {
            stagnation += 1;
        } else {
            stagnation = 0;
        }
        uncovered = next;
        let log = ColonyLog {
            ants: outcome.ants,
            converged: outcome.converged,
            found: outcome.best.map(|b| b.subgroup.description),
            set_size: set.len(),
            delta_uncovered: delta,
            uncovered: uncovered.len(),
            stagnation,
        };
        debug!("colony {}: {:?}", colonies.len(), log);
        colonies.push(log);
    }

    let stop = if uncovered.is_empty() {
        StopReason::AllCovered
    } else {
        StopReason::Stagnation
    };
    Ok(RunReport {
        set,
        colonies,
        stop,
        usage_counts,
    })
}
