use rand::Rng;

use crate::data::{Dataset, Description, Extent, Item};
use crate::stats::{BaselineMode, ScoredSubgroup};

use super::{HeuristicState, PheromoneTable, SearchRng};

/// Selection probability of each candidate, proportional to `x·η·τ` where
/// `x` is 0 for items on an already constrained attribute.
///
/// Returns `None` when no candidate has positive mass.
pub fn transition_probabilities(
    partial: &Description,
    candidates: &[Item],
    heur: &HeuristicState,
    tau: &PheromoneTable,
    dataset: &Dataset,
) -> Option<Vec<(Item, f64)>> {
    let masses: Vec<(Item, f64)> = candidates
        .iter()
        .map(|&item| {
            let mass = if partial.constrains(item.attribute) {
                0.0
            } else {
                let id = dataset.item_id(item);
                heur.eta(id) * tau.get(id)
            };
            (item, mass)
        })
        .collect();
    let total: f64 = masses.iter().map(|(_, m)| m).sum();
    if total <= 0.0 || !total.is_finite() {
        return None;
    }
    Some(masses.into_iter().map(|(i, m)| (i, m / total)).collect())
}

/// Items carried by at least one record of `extent`, in canonical order.
fn gamma(extent: &Extent, dataset: &Dataset) -> Vec<Item> {
    dataset
        .items()
        .iter()
        .filter(|&&item| dataset.item_extent(item).intersects(extent))
        .copied()
        .collect()
}

/// Roulette-wheel draw over `(item, probability)` pairs.
fn sample(probabilities: &[(Item, f64)], rng: &mut SearchRng) -> Item {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = None;
    for &(item, p) in probabilities {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = Some(item);
        if r < acc {
            return item;
        }
    }
    // r fell into the rounding gap above the final cumulative sum
    last.expect("at least one positive probability")
}

/// One ant's stochastic construction of a singleton-valued conjunction.
///
/// Stops when every attribute is constrained, when no candidate has mass,
/// or when the sampled item would leave fewer than `min_cov` records. The
/// result covers at least `min_cov` records, or is empty.
pub fn build_description(
    dataset: &Dataset,
    heur: &HeuristicState,
    tau: &PheromoneTable,
    min_cov: usize,
    rng: &mut SearchRng,
) -> Description {
    let mut partial = Description::universal();
    let mut extent = dataset.all();
    while partial.len() < dataset.n_attributes() {
        let candidates = gamma(&extent, dataset);
        let Some(probabilities) =
            transition_probabilities(&partial, &candidates, heur, tau, dataset)
        else {
            break;
        };
        let item = sample(&probabilities, rng);
        let narrowed = extent.intersection(dataset.item_extent(item));
        if narrowed.len() < min_cov {
            break;
        }
        partial.insert(item);
        extent = narrowed;
    }
    partial
}

/// Greedy generalization: repeatedly drops the condition whose removal
/// gives the highest quality, as long as quality does not fall, until one
/// condition is left. Ties go to the lowest attribute index.
pub fn prune_description(
    description: &Description,
    mode: BaselineMode,
    dataset: &Dataset,
) -> ScoredSubgroup {
    let mut current = ScoredSubgroup::evaluate(description, mode, dataset);
    while current.description().len() > 1 {
        let mut best: Option<ScoredSubgroup> = None;
        for attribute in current.description().attributes() {
            let candidate = ScoredSubgroup::evaluate(
                &current.description().without_attribute(attribute),
                mode,
                dataset,
            );
            if best
                .as_ref()
                .is_none_or(|b| candidate.score.beats(&b.score))
            {
                best = Some(candidate);
            }
        }
        match best {
            Some(b) if b.score.at_least(&current.score) => current = b,
            _ => break,
        }
    }
    current
}
