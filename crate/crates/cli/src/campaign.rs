//! Multi-seed runs and everything they write.
//!
//! Layout under the output directory:
//!
//! ```text
//! campaign.json      config, seeds, dataset summary, version
//! summary.csv        mean and standard deviation of each metric
//! runs.csv           one metrics row per run
//! run_000/
//!   subgroups.json   importable result set with run metadata
//!   subgroups.txt    the same as a table
//!   metrics.json
//!   curves.csv       Kaplan-Meier points per subgroup and baseline
//!   colonies.csv     per-colony trace of the covering loop
//! ```
//!
//! Nothing written depends on wall-clock time, thread scheduling or the
//! output path, so a rerun with the same config reproduces every byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use esmamds::data::{Dataset, Extent};
use esmamds::eval::{
    compute_metrics, export_subgroup_set, render_table, MetricsReport, SCHEMA_VERSION,
};
use esmamds::search::SearchParams;
use esmamds::set::{run_esmamds, RunReport, StopReason};
use esmamds::stats::{km_extent, BaselineMode};

use crate::config::{PreparedData, RunConfig};

/// Recorded in every report so readers know which reading of the metric
/// definitions produced the numbers.
pub const METRIC_NOTES: [&str; 2] = [
    "epsilon is the fraction of members whose log-rank p-value against the baseline is at most alpha",
    "g_hat is the total cover count divided by the number of records",
];

pub struct RunOutcome {
    pub seed: u64,
    pub params: SearchParams,
    pub report: RunReport,
    pub metrics: MetricsReport,
}

#[derive(Serialize)]
pub struct CampaignSummary {
    pub runs: usize,
    /// `(metric, mean, std, present)`; `present` counts runs where the
    /// metric was defined.
    pub metrics: Vec<(String, Option<f64>, Option<f64>, usize)>,
}

/// Runs every seed, in parallel, and returns outcomes in seed order.
pub fn run_seeds(dataset: &Dataset, config: &RunConfig) -> Result<Vec<RunOutcome>> {
    let base = config.search_params();
    (0..config.repeats as u64)
        .into_par_iter()
        .map(|i| {
            let mut params = base.clone();
            params.seed = config.seed_base.wrapping_add(i);
            let report = run_esmamds(dataset, &params)?;
            let metrics = compute_metrics(&report.set.members, dataset, params.alpha)?;
            Ok(RunOutcome {
                seed: params.seed,
                params,
                report,
                metrics,
            })
        })
        .collect::<esmamds::Result<Vec<_>>>()
        .map_err(Into::into)
}

fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (Some(mean), Some(std))
}

pub fn summarize(outcomes: &[RunOutcome]) -> CampaignSummary {
    let names: Vec<&str> = outcomes
        .first()
        .map(|o| o.metrics.fields().iter().map(|(n, _)| *n).collect())
        .unwrap_or_default();
    let metrics = names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let values: Vec<f64> = outcomes
                .iter()
                .filter_map(|o| o.metrics.fields()[k].1)
                .collect();
            let (mean, std) = mean_std(&values);
            (name.to_string(), mean, std, values.len())
        })
        .collect();
    CampaignSummary {
        runs: outcomes.len(),
        metrics,
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Kaplan-Meier points of each member, the population and, under the
/// complement baseline, each member's complement.
pub fn write_curves<W: Write>(
    sink: W,
    dataset: &Dataset,
    extents: &[Extent],
    baseline: BaselineMode,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["curve", "time", "at_risk", "events", "survival"])?;
    let mut emit = |label: &str, extent: &Extent| -> Result<()> {
        for p in km_extent(extent, dataset).points {
            w.write_record([
                label.to_string(),
                p.time.to_string(),
                p.at_risk.to_string(),
                p.events.to_string(),
                p.survival.to_string(),
            ])?;
        }
        Ok(())
    };
    emit("population", &dataset.all())?;
    for (i, e) in extents.iter().enumerate() {
        emit(&format!("G{i}"), e)?;
        if baseline == BaselineMode::Complement {
            emit(&format!("not_G{i}"), &e.complement())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_colonies(path: &Path, report: &RunReport, dataset: &Dataset) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "colony",
        "ants",
        "converged",
        "found",
        "set_size",
        "delta_uncovered",
        "uncovered",
        "stagnation",
    ])?;
    for (i, c) in report.colonies.iter().enumerate() {
        w.write_record([
            i.to_string(),
            c.ants.to_string(),
            c.converged.to_string(),
            c.found
                .as_ref()
                .map(|d| d.render(dataset))
                .unwrap_or_default(),
            c.set_size.to_string(),
            c.delta_uncovered.to_string(),
            c.uncovered.to_string(),
            c.stagnation.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Metadata embedded in each run's subgroup file.
pub fn run_metadata(outcome: &RunOutcome, prepared: &PreparedData) -> serde_json::Value {
    let ds = &prepared.dataset;
    json!({
        "seed": outcome.seed,
        "params": outcome.params,
        "dataset": ds.summary(),
        "attributes": ds.attributes(),
        "time": ds.time_name(),
        "event": ds.event_name(),
        "colonies": outcome.report.colonies.len(),
        "stop": match outcome.report.stop {
            StopReason::AllCovered => "all_covered",
            StopReason::Stagnation => "stagnation",
        },
    })
}

pub fn write_run(dir: &Path, outcome: &RunOutcome, prepared: &PreparedData) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let ds = &prepared.dataset;
    let set = &outcome.report.set;
    let file = export_subgroup_set(set, ds, run_metadata(outcome, prepared));
    write_json(&dir.join("subgroups.json"), &file)?;
    fs::write(dir.join("subgroups.txt"), render_table(set, ds))?;
    write_json(
        &dir.join("metrics.json"),
        &json!({
            "schema_version": SCHEMA_VERSION,
            "seed": outcome.seed,
            "metrics": outcome.metrics,
            "notes": METRIC_NOTES,
        }),
    )?;
    let curves = fs::File::create(dir.join("curves.csv"))?;
    write_curves(
        std::io::BufWriter::new(curves),
        ds,
        &set.extents(),
        set.baseline,
    )?;
    write_colonies(&dir.join("colonies.csv"), &outcome.report, ds)?;
    Ok(())
}

/// Runs the whole campaign and writes its output tree.
pub fn run_campaign(config: &RunConfig, prepared: &PreparedData) -> Result<Vec<RunOutcome>> {
    config.validate()?;
    let out = &config.output;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let outcomes = run_seeds(&prepared.dataset, config)?;
    for (i, o) in outcomes.iter().enumerate() {
        write_run(&out.join(format!("run_{i:03}")), o, prepared)?;
    }

    let mut runs = csv::Writer::from_path(out.join("runs.csv"))?;
    let names: Vec<&str> = outcomes[0]
        .metrics
        .fields()
        .iter()
        .map(|(n, _)| *n)
        .collect();
    let mut header = vec!["run", "seed"];
    header.extend(&names);
    runs.write_record(&header)?;
    for (i, o) in outcomes.iter().enumerate() {
        let mut row = vec![i.to_string(), o.seed.to_string()];
        row.extend(o.metrics.fields().into_iter().map(|(_, v)| cell(v)));
        runs.write_record(&row)?;
    }
    runs.flush()?;

    let summary = summarize(&outcomes);
    let mut w = csv::Writer::from_path(out.join("summary.csv"))?;
    let mut header = vec!["baseline".to_string(), "runs".to_string()];
    let mut row = vec![
        config.search_params().baseline.to_string(),
        summary.runs.to_string(),
    ];
    for (name, mean, std, _) in &summary.metrics {
        header.push(format!("{name}_mean"));
        header.push(format!("{name}_std"));
        row.push(cell(*mean));
        row.push(cell(*std));
    }
    w.write_record(&header)?;
    w.write_record(&row)?;
    w.flush()?;

    let mut recorded = config.clone();
    // the output location is not part of what was computed
    recorded.output = Default::default();
    write_json(
        &out.join("campaign.json"),
        &json!({
            "schema_version": SCHEMA_VERSION,
            "version": env!("CARGO_PKG_VERSION"),
            "config": recorded,
            "params": config.search_params(),
            "seeds": outcomes.iter().map(|o| o.seed).collect::<Vec<_>>(),
            "dataset": prepared.dataset.summary(),
            "dropped_rows": prepared.dropped_rows,
            "discretized": prepared.discretized,
            "warnings": prepared.warnings,
            "summary": summary,
            "notes": METRIC_NOTES,
        }),
    )?;
    Ok(outcomes)
}
