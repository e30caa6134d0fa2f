//! Metrics on an existing subgroup file and side-by-side comparison of two.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::json;

use esmamds::data::{Attribute, Dataset};
use esmamds::eval::{
    compute_metrics, cross_similarity, import_subgroup_set, MetricsReport, SimilarityMeasure,
};
use esmamds::set::SubgroupSet;

use crate::campaign::METRIC_NOTES;

/// Fails on the first attribute or value where the vocabulary recorded in
/// the file's metadata differs from the dataset's.
pub fn check_vocabulary(file_text: &str, dataset: &Dataset, source: &str) -> Result<()> {
    let value: serde_json::Value =
        serde_json::from_str(file_text).with_context(|| format!("parsing {source}"))?;
    let Some(recorded) = value.pointer("/metadata/attributes") else {
        return Ok(());
    };
    let recorded: Vec<Attribute> = serde_json::from_value(recorded.clone())
        .with_context(|| format!("{source}: metadata.attributes"))?;
    for (i, r) in recorded.iter().enumerate() {
        let Some(a) = dataset.attributes().get(i) else {
            bail!("{source}: attribute `{}` is not in the dataset", r.name);
        };
        if a.name != r.name {
            bail!(
                "{source}: attribute {i} is `{}` in the file but `{}` in the dataset",
                r.name,
                a.name
            );
        }
        if let Some(v) = r.values.iter().zip(&a.values).find(|(x, y)| x != y) {
            bail!(
                "{source}: attribute `{}` value `{}` differs from dataset value `{}`",
                r.name,
                v.0,
                v.1
            );
        }
        if r.values.len() != a.values.len() {
            bail!(
                "{source}: attribute `{}` has {} values in the file but {} in the dataset",
                r.name,
                r.values.len(),
                a.values.len()
            );
        }
    }
    if recorded.len() != dataset.n_attributes() {
        bail!(
            "{source}: file describes {} attributes, dataset has {}",
            recorded.len(),
            dataset.n_attributes()
        );
    }
    Ok(())
}

pub fn load_set(path: &Path, dataset: &Dataset) -> Result<SubgroupSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let source = path.display().to_string();
    check_vocabulary(&text, dataset, &source)?;
    import_subgroup_set(&text, dataset).with_context(|| format!("importing {source}"))
}

pub fn set_metrics(set: &SubgroupSet, dataset: &Dataset, alpha: f64) -> Result<MetricsReport> {
    Ok(compute_metrics(&set.members, dataset, alpha)?)
}

/// Writes the three similarity matrices and both metric reports to `out`.
pub fn compare_sets(
    a: &SubgroupSet,
    b: &SubgroupSet,
    alpha: f64,
    dataset: &Dataset,
    out: &Path,
) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for measure in SimilarityMeasure::ALL {
        let m = cross_similarity(&a.members, &b.members, measure, alpha, dataset)?;
        let file = fs::File::create(out.join(format!("sim_{}.csv", measure.name())))?;
        m.write_csv(file)?;
    }
    let report = json!({
        "alpha": alpha,
        "native": set_metrics(a, dataset, alpha)?,
        "other": set_metrics(b, dataset, alpha)?,
        "notes": METRIC_NOTES,
    });
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fs::write(out.join("metrics.json"), text)?;
    Ok(())
}
