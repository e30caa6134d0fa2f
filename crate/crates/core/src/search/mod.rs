//! Ant-colony search for a single exceptional subgroup.

mod colony;
mod construct;
mod heuristics;
mod pheromone;

pub use colony::{subgroup_search, ColonyOutcome};
pub use construct::{build_description, prune_description, transition_probabilities};
pub use heuristics::{
    cover_counts, entropy_scores, init_heuristics, usage_attenuation, HeuristicState,
};
pub use pheromone::PheromoneTable;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::BaselineMode;

/// The run's random stream. ChaCha8 seeded through `seed_from_u64`, so a
/// seed reproduces the same run on every platform.
pub type SearchRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SearchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every knob of one mining run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    /// Ants per colony.
    pub n_ants: usize,
    /// Consecutive identical ants that end a colony early.
    pub n_converg: usize,
    /// Minimum subgroup coverage as a fraction of the dataset.
    pub min_cov: f64,
    /// Consecutive colonies without coverage change before the run stops.
    pub max_stag: usize,
    /// Significance level for exceptionality and model comparison.
    pub alpha: f64,
    pub baseline: BaselineMode,
    /// Usage count at which the description-attenuation factor is 1/2.
    pub attenuation: f64,
    /// Weight of the multiplicative weighted-covering factor.
    pub cover_weight: f64,
    pub seed: u64,
}

/// Published configurations for the two baselines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Pop,
    Cpm,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pop" => Ok(Preset::Pop),
            "cpm" => Ok(Preset::Cpm),
            other => Err(Error::InvalidParameter(format!(
                "unknown preset `{other}` (pop or cpm)"
            ))),
        }
    }
}

impl SearchParams {
    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Pop => SearchParams {
                n_ants: 100,
                n_converg: 5,
                min_cov: 0.1,
                max_stag: 40,
                alpha: 0.05,
                baseline: BaselineMode::Population,
                attenuation: 5.0,
                cover_weight: 0.9,
                seed: 0,
            },
            Preset::Cpm => SearchParams {
                n_ants: 100,
                n_converg: 5,
                min_cov: 0.05,
                max_stag: 40,
                alpha: 0.05,
                baseline: BaselineMode::Complement,
                attenuation: 10.0,
                cover_weight: 0.9,
                seed: 0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n_ants == 0 {
            return bad("n_ants must be at least 1".into());
        }
        if self.n_converg == 0 {
            return bad("n_converg must be at least 1".into());
        }
        if !(self.min_cov > 0.0 && self.min_cov < 1.0) {
            return bad(format!("min_cov must lie in (0, 1), got {}", self.min_cov));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.cover_weight > 0.0 && self.cover_weight <= 1.0) {
            return bad(format!(
                "cover_weight must lie in (0, 1], got {}",
                self.cover_weight
            ));
        }
        if !self.attenuation.is_finite() {
            return bad("attenuation must be finite".into());
        }
        Ok(())
    }

    /// Minimum coverage as a record count, `ceil(min_cov * n)` and at least 1.
    pub fn min_cov_count(&self, n_records: usize) -> usize {
        // 0.1 * 30 evaluates to 3.0000000000000004
        let exact = self.min_cov * n_records as f64;
        ((exact - 1e-9).ceil() as usize).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for p in [Preset::Pop, Preset::Cpm] {
            SearchParams::preset(p).validate().unwrap();
        }
        // (n_ants, min_cov, n_converg, max_stag, W, L, alpha) as published
        let row = |p: SearchParams| {
            (
                p.n_ants,
                p.min_cov,
                p.n_converg,
                p.max_stag,
                p.cover_weight,
                p.attenuation,
                p.alpha,
            )
        };
        assert_eq!(
            row(SearchParams::preset(Preset::Pop)),
            (100, 0.1, 5, 40, 0.9, 5.0, 0.05)
        );
        assert_eq!(
            row(SearchParams::preset(Preset::Cpm)),
            (100, 0.05, 5, 40, 0.9, 10.0, 0.05)
        );
    }

    #[test]
    fn validation_catches_out_of_range() {
        let mut p = SearchParams::preset(Preset::Pop);
        p.min_cov = 1.5;
        assert!(p.validate().is_err());
        p.min_cov = 0.1;
        p.n_ants = 0;
        assert!(p.validate().is_err());
        p.n_ants = 10;
        p.cover_weight = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn min_cov_rounds_up() {
        let p = SearchParams::preset(Preset::Pop);
        assert_eq!(p.min_cov_count(137), 14);
        assert_eq!(p.min_cov_count(500), 50);
        assert_eq!(p.min_cov_count(3), 1);
        assert_eq!(p.min_cov_count(30), 3);
    }
}
