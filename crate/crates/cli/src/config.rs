//! Run configuration: a TOML file plus command-line overrides.
//!
//! ```toml
//! preset = "pop"            # or "cpm"
//! repeats = 30
//! seed_base = 0
//! output = "out"
//!
//! [dataset]
//! path = "veteran.csv"      # relative to this file
//!
//! [schema]
//! time = "time"
//! event = "status"
//! exclude = [""]
//!
//! [discretize]
//! columns = ["age", "karno"]  # or auto = true
//! bins = 5
//!
//! [search]                  # any field overrides the preset
//! n_ants = 100
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use esmamds::data::{
    discretize_equal_frequency, load_dataset, numeric_attributes, Dataset, Schema,
};
use esmamds::search::{Preset, SearchParams};
use esmamds::stats::BaselineMode;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscretizeConfig {
    /// Columns to bin.
    pub columns: Vec<String>,
    /// Also bin every all-numeric column with more distinct values than
    /// `bins`.
    pub auto: bool,
    pub bins: usize,
}

impl Default for DiscretizeConfig {
    fn default() -> Self {
        DiscretizeConfig {
            columns: Vec::new(),
            auto: false,
            bins: 5,
        }
    }
}

/// Per-field overrides of the preset.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchOverrides {
    pub n_ants: Option<usize>,
    pub n_converg: Option<usize>,
    pub min_cov: Option<f64>,
    pub max_stag: Option<usize>,
    pub alpha: Option<f64>,
    pub baseline: Option<BaselineMode>,
    pub attenuation: Option<f64>,
    pub cover_weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Preset,
    pub repeats: usize,
    pub seed_base: u64,
    pub output: PathBuf,
    pub dataset: DatasetConfig,
    pub schema: Schema,
    pub discretize: Option<DiscretizeConfig>,
    pub search: SearchOverrides,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: Preset::Pop,
            repeats: 1,
            seed_base: 0,
            output: PathBuf::from("esmamds-out"),
            dataset: DatasetConfig::default(),
            schema: Schema::default(),
            discretize: None,
            search: SearchOverrides::default(),
        }
    }
}

impl RunConfig {
    /// Reads a config file; a relative dataset path is taken relative to
    /// the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config: RunConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        if config.dataset.path.is_relative() && !config.dataset.path.as_os_str().is_empty() {
            if let Some(dir) = path.parent() {
                config.dataset.path = dir.join(&config.dataset.path);
            }
        }
        Ok(config)
    }

    /// Preset values with the `[search]` overrides applied; the seed is
    /// `seed_base`.
    pub fn search_params(&self) -> SearchParams {
        let mut p = SearchParams::preset(self.preset);
        let o = &self.search;
        p.n_ants = o.n_ants.unwrap_or(p.n_ants);
        p.n_converg = o.n_converg.unwrap_or(p.n_converg);
        p.min_cov = o.min_cov.unwrap_or(p.min_cov);
        p.max_stag = o.max_stag.unwrap_or(p.max_stag);
        p.alpha = o.alpha.unwrap_or(p.alpha);
        p.baseline = o.baseline.unwrap_or(p.baseline);
        p.attenuation = o.attenuation.unwrap_or(p.attenuation);
        p.cover_weight = o.cover_weight.unwrap_or(p.cover_weight);
        p.seed = self.seed_base;
        p
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            bail!("repeats must be at least 1");
        }
        if self.dataset.path.as_os_str().is_empty() {
            bail!("no dataset path given");
        }
        if let Some(d) = &self.discretize {
            if d.bins < 2 {
                bail!("discretize.bins must be at least 2, got {}", d.bins);
            }
        }
        self.search_params().validate()?;
        Ok(())
    }
}

/// A dataset ready for mining, with what preprocessing did to it.
#[derive(Clone, Debug)]
pub struct PreparedData {
    pub dataset: Dataset,
    pub dropped_rows: usize,
    pub discretized: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn prepare_dataset(config: &RunConfig) -> Result<PreparedData> {
    let path = &config.dataset.path;
    let file =
        std::fs::File::open(path).with_context(|| format!("opening dataset {}", path.display()))?;
    let report = load_dataset(file, &config.schema)
        .with_context(|| format!("loading {}", path.display()))?;
    let mut dataset = report.dataset;
    let mut discretized = Vec::new();
    let mut warnings = Vec::new();
    if let Some(d) = &config.discretize {
        discretized = d.columns.clone();
        if d.auto {
            for c in numeric_attributes(&dataset, d.bins) {
                if !discretized.contains(&c) {
                    discretized.push(c);
                }
            }
        }
        let (binned, w) = discretize_equal_frequency(&dataset, &discretized, d.bins)?;
        dataset = binned;
        warnings = w;
    }
    Ok(PreparedData {
        dataset,
        dropped_rows: report.dropped_rows,
        discretized,
        warnings,
    })
}
