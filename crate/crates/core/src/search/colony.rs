use crate::data::{Dataset, Description};
use crate::stats::ScoredSubgroup;

use super::{
    build_description, prune_description, HeuristicState, PheromoneTable, SearchParams, SearchRng,
};

/// Result of one colony.
#[derive(Clone, Debug)]
pub struct ColonyOutcome {
    /// Highest-quality subgroup seen, first one on ties. `None` when no ant
    /// found a subgroup with positive quality.
    pub best: Option<ScoredSubgroup>,
    pub ants: usize,
    /// True when the colony stopped on consecutive identical ants rather
    /// than on the ant budget.
    pub converged: bool,
}

/// Runs ants until the budget is spent or `n_converg` consecutive ants
/// return the same item set. `tau` is updated in place after every ant.
pub fn subgroup_search(
    dataset: &Dataset,
    heur: &HeuristicState,
    tau: &mut PheromoneTable,
    params: &SearchParams,
    rng: &mut SearchRng,
) -> ColonyOutcome {
    let min_cov = params.min_cov_count(dataset.n_records());
    let mut best: Option<ScoredSubgroup> = None;
    // the ant before the first one counts as the empty description
    let mut previous = Description::universal();
    let mut converg = 0;
    let mut ants = 0;
    while ants < params.n_ants && converg < params.n_converg {
        let built = build_description(dataset, heur, tau, min_cov, rng);
        let ant = prune_description(&built, params.baseline, dataset);
        tau.update(
            ant.description()
                .items()
                .iter()
                .map(|&i| dataset.item_id(i)),
            ant.quality(),
        );
        let incumbent = best.as_ref().map_or(0.0, |b| b.score.statistic);
        if ant.score.statistic > incumbent {
            best = Some(ant.clone());
        }
        if previous == *ant.description() {
            converg += 1;
        } else {
            converg = 0;
        }
        previous = ant.subgroup.description;
        ants += 1;
    }
    ColonyOutcome {
        best,
        ants,
        converged: converg >= params.n_converg,
    }
}
