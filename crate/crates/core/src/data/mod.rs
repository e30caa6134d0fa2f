//! Survival datasets, items, descriptions and their coverage.
//!
//! A [`Dataset`] is an immutable table of individuals, each with one
//! categorical value per descriptive attribute, a survival time and an event
//! indicator. Every `(attribute, value)` pair is an [`Item`]; the items of all
//! attribute domains form the item universe used by the search.

mod description;
mod discretize;
mod extent;
mod table;

pub use description::{cover, Description, Subgroup};
pub use discretize::{
    discretize_equal_frequency, equal_frequency_bins, numeric_attributes, Binning,
};
pub use extent::Extent;
pub use table::{
    load_dataset, read_table, write_dataset, LoadReport, RawTable, Schema, DEFAULT_MISSING,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::TimeCounts;

/// A categorical descriptive attribute and its ordered domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub values: Vec<String>,
}

/// One `(attribute, value)` pair, both given as indices into the dataset.
///
/// The derived ordering sorts by attribute first, which is the canonical
/// order used everywhere descriptions are rendered or compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item {
    pub attribute: usize,
    pub value: usize,
}

impl Item {
    pub fn new(attribute: usize, value: usize) -> Self {
        Item { attribute, value }
    }
}

/// Distinct observed times in ascending order and each record's position in it.
#[derive(Clone, Debug)]
pub(crate) struct TimeGrid {
    pub(crate) times: Vec<f64>,
    pub(crate) rank: Vec<usize>,
}

impl TimeGrid {
    pub(crate) fn new(times: &[f64]) -> Self {
        let mut distinct: Vec<f64> = times.to_vec();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        let rank = times
            .iter()
            .map(|t| {
                distinct
                    .binary_search_by(|probe| probe.total_cmp(t))
                    .expect("time present in grid")
            })
            .collect();
        TimeGrid {
            times: distinct,
            rank,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub records: usize,
    pub attributes: usize,
    pub items: usize,
    pub censored_pct: f64,
}

#[derive(Clone, Debug)]
pub struct Dataset {
    attributes: Vec<Attribute>,
    /// `columns[a][r]` is the value index of attribute `a` for record `r`.
    columns: Vec<Vec<usize>>,
    times: Vec<f64>,
    events: Vec<bool>,
    time_name: String,
    event_name: String,
    item_offsets: Vec<usize>,
    items: Vec<Item>,
    item_extents: Vec<Extent>,
    grid: TimeGrid,
    population: TimeCounts,
    mean_time: f64,
}

impl Dataset {
    /// Builds a dataset from value indices given row by row.
    pub fn new(
        attributes: Vec<Attribute>,
        rows: Vec<Vec<usize>>,
        times: Vec<f64>,
        events: Vec<bool>,
    ) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyDataset("no records".into()));
        }
        if times.len() != n || events.len() != n {
            return Err(Error::Schema(format!(
                "{} rows but {} times and {} event flags",
                n,
                times.len(),
                events.len()
            )));
        }
        let mut columns = vec![Vec::with_capacity(n); attributes.len()];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != attributes.len() {
                return Err(Error::load(
                    r,
                    "*",
                    format!("expected {} values, found {}", attributes.len(), row.len()),
                ));
            }
            for (a, &v) in row.iter().enumerate() {
                if v >= attributes[a].values.len() {
                    return Err(Error::load(
                        r,
                        attributes[a].name.clone(),
                        format!("value index {v} outside the attribute domain"),
                    ));
                }
                columns[a].push(v);
            }
        }
        Self::from_columns(attributes, columns, times, events)
    }

    /// Builds a dataset from string labels; each attribute domain is the
    /// set of observed labels in natural order (numeric when every label
    /// parses as a number, lexicographic otherwise).
    pub fn from_labels<N: AsRef<str>, S: AsRef<str>>(
        names: &[N],
        rows: &[Vec<S>],
        times: Vec<f64>,
        events: Vec<bool>,
    ) -> Result<Self> {
        let mut attributes = Vec::with_capacity(names.len());
        for (a, name) in names.iter().enumerate() {
            let labels: BTreeSet<&str> = rows
                .iter()
                .map(|row| row.get(a).map(|s| s.as_ref()))
                .collect::<Option<_>>()
                .ok_or_else(|| {
                    Error::Schema(format!("row shorter than {} columns", names.len()))
                })?;
            attributes.push(Attribute {
                name: name.as_ref().to_string(),
                values: natural_order(labels.into_iter().map(str::to_string).collect()),
            });
        }
        let index_rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(a, label)| {
                        attributes[a]
                            .values
                            .iter()
                            .position(|v| v == label.as_ref())
                            .expect("label collected into domain")
                    })
                    .collect()
            })
            .collect();
        Self::new(attributes, index_rows, times, events)
    }

    pub(crate) fn from_columns(
        attributes: Vec<Attribute>,
        columns: Vec<Vec<usize>>,
        times: Vec<f64>,
        events: Vec<bool>,
    ) -> Result<Self> {
        let n = times.len();
        if n == 0 {
            return Err(Error::EmptyDataset("no records".into()));
        }
        if let Some((r, t)) = times
            .iter()
            .enumerate()
            .find(|(_, t)| !t.is_finite() || **t < 0.0)
        {
            return Err(Error::load(r, "time", format!("invalid survival time {t}")));
        }
        let mut names = BTreeSet::new();
        for attr in &attributes {
            if !names.insert(attr.name.as_str()) {
                return Err(Error::Schema(format!(
                    "duplicate attribute `{}`",
                    attr.name
                )));
            }
            if attr.values.is_empty() {
                return Err(Error::Schema(format!(
                    "attribute `{}` has an empty domain",
                    attr.name
                )));
            }
        }

        let mut item_offsets = Vec::with_capacity(attributes.len());
        let mut items = Vec::new();
        let mut item_extents = Vec::new();
        for (a, attr) in attributes.iter().enumerate() {
            item_offsets.push(items.len());
            let mut extents = vec![Extent::empty(n); attr.values.len()];
            for (r, &v) in columns[a].iter().enumerate() {
                extents[v].insert(r);
            }
            for (v, extent) in extents.into_iter().enumerate() {
                items.push(Item::new(a, v));
                item_extents.push(extent);
            }
        }

        let grid = TimeGrid::new(&times);
        let population = TimeCounts::from_records(&grid, &events, 0..n);
        let mean_time = times.iter().sum::<f64>() / n as f64;
        Ok(Dataset {
            attributes,
            columns,
            times,
            events,
            time_name: "time".into(),
            event_name: "event".into(),
            item_offsets,
            items,
            item_extents,
            grid,
            population,
            mean_time,
        })
    }

    /// Sets the column names used when the dataset is written back out.
    pub fn with_target_names(mut self, time: impl Into<String>, event: impl Into<String>) -> Self {
        self.time_name = time.into();
        self.event_name = event.into();
        self
    }

    pub fn n_records(&self) -> usize {
        self.times.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn events(&self) -> &[bool] {
        &self.events
    }

    pub fn time_name(&self) -> &str {
        &self.time_name
    }

    pub fn event_name(&self) -> &str {
        &self.event_name
    }

    /// Value index of `attribute` for `record`.
    pub fn value(&self, record: usize, attribute: usize) -> usize {
        self.columns[attribute][record]
    }

    /// Item universe in canonical order (attribute, then domain order).
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Dense index of an item within the universe.
    pub fn item_id(&self, item: Item) -> usize {
        self.item_offsets[item.attribute] + item.value
    }

    pub fn item_extent(&self, item: Item) -> &Extent {
        &self.item_extents[self.item_id(item)]
    }

    pub fn item_by_label(&self, attribute: &str, value: &str) -> Option<Item> {
        let a = self.attribute_index(attribute)?;
        let v = self.attributes[a].values.iter().position(|x| x == value)?;
        Some(Item::new(a, v))
    }

    pub fn item_label(&self, item: Item) -> String {
        let attr = &self.attributes[item.attribute];
        format!("{}={}", attr.name, attr.values[item.value])
    }

    pub fn value_label(&self, item: Item) -> &str {
        &self.attributes[item.attribute].values[item.value]
    }

    pub fn all(&self) -> Extent {
        Extent::full(self.n_records())
    }

    /// Mean survival time over every record, censored or not.
    pub fn mean_time(&self) -> f64 {
        self.mean_time
    }

    pub(crate) fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Per-time event and exit counts of the whole dataset.
    pub(crate) fn population_counts(&self) -> &TimeCounts {
        &self.population
    }

    pub fn censored_fraction(&self) -> f64 {
        self.events.iter().filter(|e| !**e).count() as f64 / self.n_records() as f64
    }

    pub fn summary(&self) -> DatasetSummary {
        DatasetSummary {
            records: self.n_records(),
            attributes: self.n_attributes(),
            items: self.n_items(),
            censored_pct: 100.0 * self.censored_fraction(),
        }
    }
}

/// Numeric order if every label parses as a number, else lexicographic.
pub(crate) fn natural_order(mut labels: Vec<String>) -> Vec<String> {
    let numeric: Option<Vec<f64>> = labels.iter().map(|l| l.trim().parse().ok()).collect();
    match numeric {
        Some(keys) => {
            let mut keyed: Vec<(f64, String)> = keys.into_iter().zip(labels).collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            keyed.into_iter().map(|(_, l)| l).collect()
        }
        None => {
            labels.sort();
            labels
        }
    }
}
