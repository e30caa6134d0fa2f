use crate::data::{Dataset, Extent};

use super::SearchParams;

/// Per-item heuristic factors for one colony, indexed by item id.
#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicState {
    /// Normalized entropy score over the uncovered records.
    pub entropy: Vec<f64>,
    /// Logistic attenuation by how often the item was returned before.
    pub usage: Vec<f64>,
    /// Mean multiplicative cover weight of the item's records.
    pub cover: Vec<f64>,
    /// Product of the three factors.
    pub combined: Vec<f64>,
}

impl HeuristicState {
    pub fn eta(&self, item_id: usize) -> f64 {
        self.combined[item_id]
    }
}

/// Entropy-based relevance of each item over `uncovered`.
///
/// Records split into two survival groups at the full-data mean time (a
/// time equal to the mean counts as long). Each item scores `1 - H` where
/// `H` is the entropy of that split among the uncovered records holding the
/// item; scores are divided by their sum, or are all zero when every item
/// scores zero.
pub fn entropy_scores(dataset: &Dataset, uncovered: &Extent) -> Vec<f64> {
    let mean = dataset.mean_time();
    let long = Extent::from_indices(
        dataset.n_records(),
        (0..dataset.n_records()).filter(|&r| dataset.times()[r] >= mean),
    );
    let long_uncovered = long.intersection(uncovered);
    let raw: Vec<f64> = dataset
        .items()
        .iter()
        .map(|&item| {
            let extent = dataset.item_extent(item);
            let n = extent.intersection_len(uncovered);
            if n == 0 {
                return 0.0;
            }
            let p = extent.intersection_len(&long_uncovered) as f64 / n as f64;
            (1.0 - binary_entropy(p)).max(0.0)
        })
        .collect();
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        raw.iter().map(|s| s / total).collect()
    } else {
        vec![0.0; raw.len()]
    }
}

fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// `1 - 1/(1 + e^-(c - l))`: one half exactly at `c = l`.
pub fn usage_attenuation(count: usize, l: f64) -> f64 {
    1.0 - 1.0 / (1.0 + (-(count as f64 - l)).exp())
}

/// Number of member extents covering each record.
pub fn cover_counts(n_records: usize, members: &[Extent]) -> Vec<usize> {
    let mut counts = vec![0; n_records];
    for extent in members {
        for r in extent.iter() {
            counts[r] += 1;
        }
    }
    counts
}

/// Builds the heuristic table for the next colony.
///
/// `usage_counts[i]` counts how many colony results used item `i`;
/// `members` are the extents currently in the result set.
pub fn init_heuristics(
    dataset: &Dataset,
    uncovered: &Extent,
    usage_counts: &[usize],
    members: &[Extent],
    params: &SearchParams,
) -> HeuristicState {
    let entropy = entropy_scores(dataset, uncovered);
    let usage: Vec<f64> = usage_counts
        .iter()
        .map(|&c| usage_attenuation(c, params.attenuation))
        .collect();
    let g = cover_counts(dataset.n_records(), members);
    let cover: Vec<f64> = dataset
        .items()
        .iter()
        .map(|&item| {
            let extent = dataset.item_extent(item);
            if extent.is_empty() {
                return 1.0;
            }
            let sum: f64 = extent
                .iter()
                .map(|r| params.cover_weight.powi(g[r] as i32))
                .sum();
            sum / extent.len() as f64
        })
        .collect();
    let combined = entropy
        .iter()
        .zip(&usage)
        .zip(&cover)
        .map(|((h, l), w)| h * l * w)
        .collect();
    HeuristicState {
        entropy,
        usage,
        cover,
        combined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Item;
    use crate::search::Preset;

    fn ds() -> Dataset {
        // mean time 4.5: records 2 and 3 are long
        Dataset::from_labels(
            &["a", "b"],
            &[
                vec!["x", "p"],
                vec!["x", "q"],
                vec!["y", "p"],
                vec!["y", "q"],
            ],
            vec![1.0, 2.0, 7.0, 8.0],
            vec![true; 4],
        )
        .unwrap()
    }

    #[test]
    fn pure_items_get_all_mass_and_mixed_items_none() {
        let ds = ds();
        let h = entropy_scores(&ds, &ds.all());
        let x = ds.item_id(Item::new(0, 0));
        let y = ds.item_id(Item::new(0, 1));
        assert_eq!(h[x], 0.5);
        assert_eq!(h[y], 0.5);
        assert_eq!(h[ds.item_id(Item::new(1, 0))], 0.0);
    }

    #[test]
    fn entropy_ignores_covered_records() {
        let ds = ds();
        // records 0 and 2 remain: `p` is mixed, `x` and `y` hold one record
        // each, `q` holds none
        let u = Extent::from_indices(4, [0, 2]);
        let h = entropy_scores(&ds, &u);
        assert_eq!(h[ds.item_id(Item::new(1, 0))], 0.0);
        assert_eq!(h[ds.item_id(Item::new(1, 1))], 0.0);
        assert_eq!(h[ds.item_id(Item::new(0, 0))], 0.5);
    }

    #[test]
    fn attenuation_midpoint_and_first_colony() {
        assert_eq!(usage_attenuation(5, 5.0), 0.5);
        let params = SearchParams::preset(Preset::Pop);
        let ds = ds();
        let h = init_heuristics(&ds, &ds.all(), &vec![0; ds.n_items()], &[], &params);
        let expected = 1.0 - 1.0 / (1.0 + 5f64.exp());
        assert!(h.usage.iter().all(|&l| l == expected));
        assert!(h.cover.iter().all(|&w| w == 1.0));
    }

    #[test]
    fn covered_records_lower_cover_weight() {
        let ds = ds();
        let params = SearchParams::preset(Preset::Pop);
        let members = vec![Extent::from_indices(4, [0])];
        let h = init_heuristics(&ds, &ds.all(), &vec![0; ds.n_items()], &members, &params);
        // item a=x holds records 0 and 1: (0.9 + 1) / 2
        assert!((h.cover[ds.item_id(Item::new(0, 0))] - 0.95).abs() < 1e-15);
        assert_eq!(h.cover[ds.item_id(Item::new(0, 1))], 1.0);
    }
}
