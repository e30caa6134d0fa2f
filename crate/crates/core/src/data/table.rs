use std::collections::BTreeSet;
use std::io::{Read, Write};

use log::info;
use serde::{Deserialize, Serialize};

use super::{natural_order, Attribute, Dataset};
use crate::error::{Error, Result};

/// Cell contents treated as missing unless the schema overrides them.
pub const DEFAULT_MISSING: &[&str] = &["", "NA", "N/A", "na", "NaN", "nan", "?", "null"];

/// Column roles for a delimiter-separated survival table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schema {
    /// Survival time column.
    pub time: String,
    /// Event indicator column.
    pub event: String,
    /// Descriptive attribute columns; every remaining column when absent.
    pub attributes: Option<Vec<String>>,
    /// Columns ignored when `attributes` is absent (identifiers, row names).
    pub exclude: Vec<String>,
    /// Labels that mark an observed event. When absent the event column
    /// must hold `0/1` or `false/true`.
    pub event_labels: Option<Vec<String>>,
    pub missing: Vec<String>,
    pub delimiter: char,
}

impl Default for Schema {
    fn default() -> Self {
        Schema {
            time: "time".into(),
            event: "event".into(),
            attributes: None,
            exclude: Vec::new(),
            event_labels: None,
            missing: DEFAULT_MISSING.iter().map(|s| s.to_string()).collect(),
            delimiter: ',',
        }
    }
}

impl Schema {
    pub fn new(time: impl Into<String>, event: impl Into<String>) -> Self {
        Schema {
            time: time.into(),
            event: event.into(),
            ..Schema::default()
        }
    }

    fn delimiter_byte(&self) -> Result<u8> {
        u8::try_from(self.delimiter)
            .ok()
            .filter(|b| b.is_ascii())
            .ok_or_else(|| Error::Schema(format!("delimiter {:?} is not ASCII", self.delimiter)))
    }

    /// Attribute column names in file order.
    pub fn attribute_columns(&self, header: &[String]) -> Result<Vec<String>> {
        match &self.attributes {
            Some(cols) => {
                for c in cols {
                    if !header.contains(c) {
                        return Err(Error::Schema(format!(
                            "attribute column `{c}` not in header"
                        )));
                    }
                    if *c == self.time || *c == self.event {
                        return Err(Error::Schema(format!(
                            "column `{c}` cannot be both an attribute and a target"
                        )));
                    }
                }
                Ok(cols.clone())
            }
            None => Ok(header
                .iter()
                .filter(|h| **h != self.time && **h != self.event && !self.exclude.contains(h))
                .cloned()
                .collect()),
        }
    }
}

/// Header plus string cells, before any typing.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

pub fn read_table<R: Read>(source: R, delimiter: char) -> Result<RawTable> {
    let delimiter = Schema {
        delimiter,
        ..Schema::default()
    }
    .delimiter_byte()?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .from_reader(source);
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(Error::load(0, "*", "missing header row"));
    }
    let mut seen = BTreeSet::new();
    for h in &header {
        if !seen.insert(h) {
            return Err(Error::load(0, h.clone(), "duplicate column name in header"));
        }
    }
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::load(
                r + 1,
                "*",
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        rows.push(record.iter().map(|c| c.trim().to_string()).collect());
    }
    Ok(RawTable { header, rows })
}

#[derive(Clone, Debug)]
pub struct LoadReport {
    pub dataset: Dataset,
    /// Rows dropped because a used column was missing.
    pub dropped_rows: usize,
}

/// Reads and validates a survival table.
///
/// Rows with a missing value in any used column are dropped and counted.
/// Row numbers in errors are 1-based data rows (the header is row 0).
pub fn load_dataset<R: Read>(source: R, schema: &Schema) -> Result<LoadReport> {
    let table = read_table(source, schema.delimiter)?;
    dataset_from_table(&table, schema)
}

pub(crate) fn dataset_from_table(table: &RawTable, schema: &Schema) -> Result<LoadReport> {
    let time_col = table
        .column(&schema.time)
        .ok_or_else(|| Error::Schema(format!("time column `{}` not in header", schema.time)))?;
    let event_col = table
        .column(&schema.event)
        .ok_or_else(|| Error::Schema(format!("event column `{}` not in header", schema.event)))?;
    let names = schema.attribute_columns(&table.header)?;
    let attr_cols: Vec<usize> = names.iter().map(|n| table.column(n).unwrap()).collect();

    let is_missing = |cell: &str| schema.missing.iter().any(|m| m == cell);
    let mut kept: Vec<&Vec<String>> = Vec::new();
    let mut times = Vec::new();
    let mut events = Vec::new();
    let mut dropped = 0;
    for (r, row) in table.rows.iter().enumerate() {
        let used = attr_cols.iter().chain([&time_col, &event_col]);
        if used.into_iter().any(|&c| is_missing(&row[c])) {
            dropped += 1;
            continue;
        }
        let t: f64 = row[time_col].parse().map_err(|_| {
            Error::load(
                r + 1,
                &schema.time,
                format!("unparseable time `{}`", row[time_col]),
            )
        })?;
        if !t.is_finite() || t < 0.0 {
            return Err(Error::load(
                r + 1,
                &schema.time,
                format!("negative or non-finite time `{t}`"),
            ));
        }
        times.push(t);
        events.push(parse_event(&row[event_col], schema).ok_or_else(|| {
            Error::load(
                r + 1,
                &schema.event,
                format!("unparseable event flag `{}`", row[event_col]),
            )
        })?);
        kept.push(row);
    }
    if kept.is_empty() {
        return Err(Error::EmptyDataset(format!(
            "all {} rows dropped for missing values",
            table.rows.len()
        )));
    }
    if dropped > 0 {
        info!("dropped {dropped} rows with missing values");
    }

    let mut attributes = Vec::with_capacity(names.len());
    let mut columns = Vec::with_capacity(names.len());
    for (name, &c) in names.iter().zip(&attr_cols) {
        let labels: BTreeSet<&str> = kept.iter().map(|row| row[c].as_str()).collect();
        let values = natural_order(labels.into_iter().map(str::to_string).collect());
        let column = kept
            .iter()
            .map(|row| values.iter().position(|v| *v == row[c]).unwrap())
            .collect();
        attributes.push(Attribute {
            name: name.clone(),
            values,
        });
        columns.push(column);
    }
    let dataset = Dataset::from_columns(attributes, columns, times, events)?
        .with_target_names(&schema.time, &schema.event);
    Ok(LoadReport {
        dataset,
        dropped_rows: dropped,
    })
}

fn parse_event(cell: &str, schema: &Schema) -> Option<bool> {
    match &schema.event_labels {
        Some(labels) => Some(labels.iter().any(|l| l == cell)),
        None => match cell.to_ascii_lowercase().as_str() {
            "1" | "1.0" | "true" => Some(true),
            "0" | "0.0" | "false" => Some(false),
            _ => None,
        },
    }
}

/// Writes the dataset as a delimited table: attributes, then time and event
/// (as `0/1`).
pub fn write_dataset<W: Write>(dataset: &Dataset, sink: W, delimiter: u8) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(sink);
    let mut header: Vec<&str> = dataset
        .attributes()
        .iter()
        .map(|a| a.name.as_str())
        .collect();
    header.push(dataset.time_name());
    header.push(dataset.event_name());
    writer.write_record(&header)?;
    for r in 0..dataset.n_records() {
        let mut row: Vec<String> = (0..dataset.n_attributes())
            .map(|a| dataset.attribute(a).values[dataset.value(r, a)].clone())
            .collect();
        row.push(format!("{}", dataset.times()[r]));
        row.push(if dataset.events()[r] { "1" } else { "0" }.to_string());
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "id,sex,stage,time,status\n\
                       1,f,I,5,1\n\
                       2,m,II,3,0\n\
                       3,f,II,8,1\n\
                       4,m,I,2,1\n\
                       5,f,III,9,0\n";

    fn schema() -> Schema {
        Schema {
            exclude: vec!["id".into()],
            ..Schema::new("time", "status")
        }
    }

    #[test]
    fn loads_toy_without_drops() {
        let report = load_dataset(TOY.as_bytes(), &schema()).unwrap();
        assert_eq!(report.dataset.n_records(), 5);
        assert_eq!(report.dropped_rows, 0);
        assert_eq!(report.dataset.n_attributes(), 2);
        assert_eq!(report.dataset.n_items(), 5);
        assert_eq!(report.dataset.events(), &[true, false, true, true, false]);
    }

    #[test]
    fn drops_row_with_missing_value() {
        let text = format!("{TOY}6,,I,4,1\n");
        let report = load_dataset(text.as_bytes(), &schema()).unwrap();
        assert_eq!(report.dataset.n_records(), 5);
        assert_eq!(report.dropped_rows, 1);
    }

    #[test]
    fn explicit_attribute_list_and_labels() {
        let text = "a,b,t,e\nx,1,1.5,dead\ny,2,2,alive\n";
        let schema = Schema {
            attributes: Some(vec!["a".into()]),
            event_labels: Some(vec!["dead".into()]),
            ..Schema::new("t", "e")
        };
        let ds = load_dataset(text.as_bytes(), &schema).unwrap().dataset;
        assert_eq!(ds.n_attributes(), 1);
        assert_eq!(ds.events(), &[true, false]);
        assert_eq!(ds.times(), &[1.5, 2.0]);
    }

    #[test]
    fn errors_name_row_and_column() {
        let bad_time = "a,time,status\nx,soon,1\n";
        let err = load_dataset(bad_time.as_bytes(), &Schema::new("time", "status"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("row 1") && err.contains("`time`"), "{err}");

        let bad_event = "a,time,status\nx,1,maybe\n";
        let err = load_dataset(bad_event.as_bytes(), &Schema::new("time", "status"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("`status`"), "{err}");

        let no_time = "a,b,status\nx,1,1\n";
        assert!(load_dataset(no_time.as_bytes(), &Schema::new("time", "status")).is_err());

        let all_missing = "a,time,status\nNA,1,1\n,2,0\n";
        let err = load_dataset(all_missing.as_bytes(), &Schema::new("time", "status")).unwrap_err();
        assert!(matches!(err, Error::EmptyDataset(_)));
    }

    #[test]
    fn tab_delimited() {
        let text = "a\ttime\tstatus\nx\t1\t1\ny\t2\t0\n";
        let schema = Schema {
            delimiter: '\t',
            ..Schema::new("time", "status")
        };
        assert_eq!(
            load_dataset(text.as_bytes(), &schema)
                .unwrap()
                .dataset
                .n_records(),
            2
        );
    }

    #[test]
    fn write_then_load_preserves_table() {
        let ds = load_dataset(TOY.as_bytes(), &schema()).unwrap().dataset;
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf, b',').unwrap();
        let again = load_dataset(buf.as_slice(), &Schema::new("time", "status"))
            .unwrap()
            .dataset;
        assert_eq!(again.attributes(), ds.attributes());
        assert_eq!(again.times(), ds.times());
        assert_eq!(again.events(), ds.events());
    }
}
