//! JSON and text forms of a subgroup set.
//!
//! The JSON document is
//!
//! ```text
//! { "schema_version": 1,
//!   "baseline": "population" | "complement",
//!   "alpha": 0.05,
//!   "metadata": { ... free-form run metadata ... },
//!   "subgroups": [ { "description": "a IN {\"x\"} AND ...",
//!                    "conditions": [ { "attribute": "a", "values": ["x"] } ],
//!                    "coverage": 12, "fraction": 0.1,
//!                    "quality": 0.99, "p_value": 0.01 } ] }
//! ```
//!
//! On import only `conditions` (or, when it is absent, `description`) is
//! read; extents and scores are recomputed from the dataset.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::data::{cover, Dataset, Description};
use crate::error::{Error, Result};
use crate::set::SubgroupSet;
use crate::stats::{BaselineMode, ScoredSubgroup};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub attribute: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupRecord {
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub conditions: Option<Vec<ConditionRecord>>,
    #[serde(default)]
    pub coverage: Option<usize>,
    #[serde(default)]
    pub fraction: Option<f64>,
    #[serde(default)]
    pub quality: Option<f64>,
    #[serde(default)]
    pub p_value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupFile {
    pub schema_version: u32,
    pub baseline: BaselineMode,
    pub alpha: f64,
    #[serde(default)]
    pub metadata: serde_json::Value,
    pub subgroups: Vec<SubgroupRecord>,
}

pub fn subgroup_record(member: &ScoredSubgroup, dataset: &Dataset) -> SubgroupRecord {
    let desc = member.description();
    SubgroupRecord {
        description: Some(desc.render(dataset)),
        conditions: Some(
            desc.conditions()
                .into_iter()
                .map(|(a, values)| {
                    let attr = dataset.attribute(a);
                    ConditionRecord {
                        attribute: attr.name.clone(),
                        values: values.into_iter().map(|v| attr.values[v].clone()).collect(),
                    }
                })
                .collect(),
        ),
        coverage: Some(member.subgroup.coverage()),
        fraction: Some(member.subgroup.coverage() as f64 / dataset.n_records() as f64),
        quality: Some(member.score.quality),
        p_value: Some(member.score.p_value),
    }
}

pub fn export_subgroup_set(
    set: &SubgroupSet,
    dataset: &Dataset,
    metadata: serde_json::Value,
) -> SubgroupFile {
    SubgroupFile {
        schema_version: SCHEMA_VERSION,
        baseline: set.baseline,
        alpha: set.alpha,
        metadata,
        subgroups: set
            .members
            .iter()
            .map(|m| subgroup_record(m, dataset))
            .collect(),
    }
}

fn parse_record(record: &SubgroupRecord, index: usize, dataset: &Dataset) -> Result<Description> {
    let location = format!("subgroups[{index}]");
    let wrap = |e: Error| match e {
        Error::Import {
            location: inner,
            message,
        } => Error::import(format!("{location} {inner}"), message),
        other => Error::import(location.clone(), other.to_string()),
    };
    if let Some(conditions) = &record.conditions {
        let mut desc = Description::universal();
        for (c, cond) in conditions.iter().enumerate() {
            let here = format!("{location}.conditions[{c}]");
            if dataset.attribute_index(&cond.attribute).is_none() {
                return Err(Error::import(
                    here,
                    format!("unknown attribute `{}`", cond.attribute),
                ));
            }
            if cond.values.is_empty() {
                return Err(Error::import(here, "empty value set"));
            }
            for v in &cond.values {
                let item = dataset.item_by_label(&cond.attribute, v).ok_or_else(|| {
                    Error::import(
                        here.clone(),
                        format!("unknown value `{v}` for attribute `{}`", cond.attribute),
                    )
                })?;
                desc.insert(item);
            }
        }
        return Ok(desc);
    }
    match &record.description {
        Some(text) => Description::parse(text, dataset).map_err(wrap),
        None => Err(Error::import(
            location,
            "neither `conditions` nor `description` given",
        )),
    }
}

/// Reads a subgroup file against `dataset`, recomputing extents and scores
/// under the file's baseline.
pub fn import_subgroup_set(text: &str, dataset: &Dataset) -> Result<SubgroupSet> {
    let file: SubgroupFile = serde_json::from_str(text).map_err(|e| {
        Error::import(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::import(
            "schema_version",
            format!(
                "unsupported version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            ),
        ));
    }
    let members = file
        .subgroups
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let desc = parse_record(r, i, dataset)?;
            Ok(ScoredSubgroup::from_subgroup(
                cover(&desc, dataset),
                file.baseline,
                dataset,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(SubgroupSet {
        members,
        alpha: file.alpha,
        baseline: file.baseline,
    })
}

/// Fixed-width table, one line per member.
pub fn render_table(set: &SubgroupSet, dataset: &Dataset) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>3}  {:>8}  {:>8}  {:>12}  description",
        "#", "coverage", "fraction", "p_value"
    );
    for (i, m) in set.members.iter().enumerate() {
        let cov = m.subgroup.coverage();
        let _ = writeln!(
            out,
            "{:>3}  {:>8}  {:>8.4}  {:>12.4e}  {}",
            i,
            cov,
            cov as f64 / dataset.n_records() as f64,
            m.score.p_value,
            m.description().render(dataset)
        );
    }
    out
}
