//! Synthetic survival data with planted exceptional subgroups.
//!
//! Attribute values are drawn independently per record. A record takes the
//! survival distribution of the first planted description covering it, or
//! the baseline distribution otherwise. Times are Weibull; a censored record
//! keeps a uniform fraction of its drawn time.

use rand::Rng;
use rand_distr::{weighted::WeightedIndex, Distribution, Weibull};
use serde::{Deserialize, Serialize};

use crate::data::{cover, Dataset, Description};
use crate::error::{Error, Result};
use crate::search::seeded_rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthAttribute {
    pub name: String,
    pub values: Vec<String>,
    /// Sampling weights per value; uniform when absent.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedGroup {
    /// `(attribute, allowed values)` conjunction.
    pub conditions: Vec<(String, Vec<String>)>,
    /// Weibull scale of the group's survival times.
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub records: usize,
    pub attributes: Vec<SynthAttribute>,
    pub planted: Vec<PlantedGroup>,
    pub baseline_scale: f64,
    /// Weibull shape shared by all groups; 1 gives exponential times.
    #[serde(default = "one")]
    pub shape: f64,
    /// Probability that a record is censored.
    pub censoring: f64,
}

fn one() -> f64 {
    1.0
}

impl SynthSpec {
    /// Two disjoint planted groups on `x0`: value `a` dies early, value `b`
    /// lives long. `noise` further binary attributes carry no signal.
    pub fn two_planted(records: usize, noise: usize, censoring: f64) -> Self {
        let mut attributes = vec![SynthAttribute {
            name: "x0".into(),
            values: vec!["a".into(), "b".into()],
            weights: None,
        }];
        for k in 1..=noise {
            attributes.push(SynthAttribute {
                name: format!("x{k}"),
                values: vec!["u".into(), "v".into(), "w".into()],
                weights: None,
            });
        }
        SynthSpec {
            records,
            attributes,
            planted: vec![
                PlantedGroup {
                    conditions: vec![("x0".into(), vec!["a".into()])],
                    scale: 0.25,
                },
                PlantedGroup {
                    conditions: vec![("x0".into(), vec!["b".into()])],
                    scale: 4.0,
                },
            ],
            baseline_scale: 1.0,
            shape: 1.0,
            censoring,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedTruth {
    pub description: String,
    pub scale: f64,
    /// Records drawn from this group's distribution.
    pub records: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub planted: Vec<PlantedTruth>,
}

#[derive(Clone, Debug)]
pub struct SynthOutput {
    pub dataset: Dataset,
    /// Planted descriptions resolved against `dataset`, in spec order.
    pub planted: Vec<Description>,
    pub truth: GroundTruth,
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

pub fn generate_synthetic(spec: &SynthSpec, seed: u64) -> Result<SynthOutput> {
    if spec.records == 0 {
        return Err(invalid("records must be at least 1".into()));
    }
    if spec.attributes.is_empty() {
        return Err(invalid("at least one attribute is required".into()));
    }
    if !(0.0..1.0).contains(&spec.censoring) {
        return Err(invalid(format!(
            "censoring must lie in [0, 1), got {}",
            spec.censoring
        )));
    }
    let scales = spec
        .planted
        .iter()
        .map(|p| p.scale)
        .chain([spec.baseline_scale]);
    for s in scales.chain([spec.shape]) {
        if !(s.is_finite() && s > 0.0) {
            return Err(invalid(format!(
                "scales and shape must be positive, got {s}"
            )));
        }
    }

    let mut samplers = Vec::with_capacity(spec.attributes.len());
    for a in &spec.attributes {
        if a.values.is_empty() {
            return Err(invalid(format!("attribute `{}` has no values", a.name)));
        }
        let weights = a
            .weights
            .clone()
            .unwrap_or_else(|| vec![1.0; a.values.len()]);
        if weights.len() != a.values.len() {
            return Err(invalid(format!(
                "attribute `{}`: weight count differs from value count",
                a.name
            )));
        }
        let sampler = WeightedIndex::new(&weights)
            .map_err(|e| invalid(format!("attribute `{}` weights: {e}", a.name)))?;
        samplers.push((sampler, weights));
    }

    // planted conditions as (attribute index, allowed value indices)
    let mut planted_idx: Vec<Vec<(usize, Vec<usize>)>> = Vec::new();
    for (g, p) in spec.planted.iter().enumerate() {
        let mut conds = Vec::new();
        for (name, values) in &p.conditions {
            let a = spec
                .attributes
                .iter()
                .position(|x| x.name == *name)
                .ok_or_else(|| invalid(format!("planted group {g}: unknown attribute `{name}`")))?;
            let mut allowed = Vec::new();
            for v in values {
                let idx = spec.attributes[a]
                    .values
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| {
                        invalid(format!(
                            "planted group {g}: `{v}` not in the domain of `{name}`"
                        ))
                    })?;
                if samplers[a].1[idx] > 0.0 {
                    allowed.push(idx);
                }
            }
            if allowed.is_empty() {
                return Err(invalid(format!(
                    "planted group {g}: no reachable value for `{name}`"
                )));
            }
            conds.push((a, allowed));
        }
        planted_idx.push(conds);
    }

    let dists = spec
        .planted
        .iter()
        .map(|p| p.scale)
        .chain([spec.baseline_scale])
        .map(|s| Weibull::new(s, spec.shape).map_err(|e| invalid(format!("weibull: {e}"))))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = seeded_rng(seed);
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(spec.records);
    let mut times = Vec::with_capacity(spec.records);
    let mut events = Vec::with_capacity(spec.records);
    let mut group_sizes = vec![0usize; spec.planted.len()];
    for _ in 0..spec.records {
        let values: Vec<usize> = samplers.iter().map(|(s, _)| s.sample(&mut rng)).collect();
        let group = planted_idx.iter().position(|conds| {
            conds
                .iter()
                .all(|(a, allowed)| allowed.contains(&values[*a]))
        });
        if let Some(g) = group {
            group_sizes[g] += 1;
        }
        let t: f64 = dists[group.unwrap_or(spec.planted.len())].sample(&mut rng);
        let censored = rng.random::<f64>() < spec.censoring;
        let observed = if censored { t * rng.random::<f64>() } else { t };
        rows.push(
            values
                .iter()
                .zip(&spec.attributes)
                .map(|(&v, a)| a.values[v].clone())
                .collect(),
        );
        times.push(observed);
        events.push(!censored);
    }

    let names: Vec<&str> = spec.attributes.iter().map(|a| a.name.as_str()).collect();
    let dataset = Dataset::from_labels(&names, &rows, times, events)?;
    let mut planted = Vec::new();
    let mut truth = Vec::new();
    for (g, p) in spec.planted.iter().enumerate() {
        let mut desc = Description::universal();
        for (name, values) in &p.conditions {
            for v in values {
                // values never drawn are absent from the dataset domain
                if let Some(item) = dataset.item_by_label(name, v) {
                    desc.insert(item);
                }
            }
        }
        if group_sizes[g] == 0 || cover(&desc, &dataset).extent.is_empty() {
            return Err(invalid(format!("planted group {g} matched no record")));
        }
        truth.push(PlantedTruth {
            description: desc.render(&dataset),
            scale: p.scale,
            records: group_sizes[g],
        });
        planted.push(desc);
    }
    Ok(SynthOutput {
        dataset,
        planted,
        truth: GroundTruth {
            seed,
            planted: truth,
        },
    })
}
