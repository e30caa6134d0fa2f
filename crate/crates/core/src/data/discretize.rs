//! Equal-frequency discretization of numeric attributes.
//!
//! Interior cut points are empirical quantiles (the inverse ECDF, i.e. the
//! order statistic at position `ceil(k·n/bins)`). A value equal to a cut
//! point belongs to the lower bin, and repeated cut points collapse, so
//! heavily tied columns end up with fewer than `bins` categories. Each bin
//! is labelled `[lo,hi]` with the smallest and largest value it holds.

use log::warn;

use super::{Attribute, Dataset};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Binning {
    /// Inclusive upper cut points of every bin except the last.
    pub cuts: Vec<f64>,
    pub labels: Vec<String>,
    /// Bin index for each input value, in input order.
    pub assignment: Vec<usize>,
}

/// Bins `values` into at most `bins` equal-frequency intervals.
pub fn equal_frequency_bins(values: &[f64], bins: usize) -> Result<Binning> {
    if bins < 2 {
        return Err(Error::InvalidParameter(format!(
            "bins must be at least 2, got {bins}"
        )));
    }
    if values.is_empty() {
        return Err(Error::EmptyDataset("no values to discretize".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite value {v}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let max = sorted[n - 1];

    let mut cuts: Vec<f64> = Vec::with_capacity(bins - 1);
    for k in 1..bins {
        let rank = (k * n).div_ceil(bins);
        let cut = sorted[rank - 1];
        if cut < max && cuts.last().is_none_or(|last| cut > *last) {
            cuts.push(cut);
        }
    }

    let assignment: Vec<usize> = values
        .iter()
        .map(|v| cuts.iter().position(|c| v <= c).unwrap_or(cuts.len()))
        .collect();
    let n_bins = cuts.len() + 1;
    let mut lo = vec![f64::INFINITY; n_bins];
    let mut hi = vec![f64::NEG_INFINITY; n_bins];
    for (v, &b) in values.iter().zip(&assignment) {
        lo[b] = lo[b].min(*v);
        hi[b] = hi[b].max(*v);
    }
    let labels = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| format!("[{},{}]", l, h))
        .collect();
    Ok(Binning {
        cuts,
        labels,
        assignment,
    })
}

/// Replaces each named attribute, whose labels must all be numbers, with its
/// equal-frequency binned version. Returns the new dataset and any warnings.
pub fn discretize_equal_frequency(
    dataset: &Dataset,
    columns: &[String],
    bins: usize,
) -> Result<(Dataset, Vec<String>)> {
    let mut attributes: Vec<Attribute> = dataset.attributes().to_vec();
    let mut value_columns: Vec<Vec<usize>> = (0..dataset.n_attributes())
        .map(|a| {
            (0..dataset.n_records())
                .map(|r| dataset.value(r, a))
                .collect()
        })
        .collect();
    let mut warnings = Vec::new();

    for name in columns {
        let a = dataset
            .attribute_index(name)
            .ok_or_else(|| Error::Schema(format!("cannot discretize unknown column `{name}`")))?;
        let domain = &dataset.attribute(a).values;
        let parsed: Vec<f64> = domain
            .iter()
            .map(|label| {
                label.trim().parse::<f64>().map_err(|_| {
                    let row = value_columns[a]
                        .iter()
                        .position(|&v| domain[v] == *label)
                        .map_or(0, |r| r + 1);
                    Error::load(row, name.clone(), format!("non-numeric value `{label}`"))
                })
            })
            .collect::<Result<_>>()?;
        let values: Vec<f64> = value_columns[a].iter().map(|&v| parsed[v]).collect();
        let binning = equal_frequency_bins(&values, bins)?;
        if binning.labels.len() == 1 {
            let msg = format!("column `{name}` has a single distinct value; kept as one category");
            warn!("{msg}");
            warnings.push(msg);
        }
        attributes[a].values = binning.labels;
        value_columns[a] = binning.assignment;
    }

    let out = Dataset::from_columns(
        attributes,
        value_columns,
        dataset.times().to_vec(),
        dataset.events().to_vec(),
    )?
    .with_target_names(dataset.time_name(), dataset.event_name());
    Ok((out, warnings))
}

/// Attributes whose labels are all numeric and number more than `bins`.
pub fn numeric_attributes(dataset: &Dataset, bins: usize) -> Vec<String> {
    dataset
        .attributes()
        .iter()
        .filter(|a| {
            a.values.len() > bins && a.values.iter().all(|v| v.trim().parse::<f64>().is_ok())
        })
        .map(|a| a.name.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_equal_split() {
        let values: Vec<f64> = (1..=10).map(f64::from).collect();
        let b = equal_frequency_bins(&values, 5).unwrap();
        assert_eq!(b.labels, vec!["[1,2]", "[3,4]", "[5,6]", "[7,8]", "[9,10]"]);
        for bin in 0..5 {
            assert_eq!(b.assignment.iter().filter(|&&x| x == bin).count(), 2);
        }
    }

    #[test]
    fn tied_cut_points_collapse() {
        // ranks 1..4 of the sorted sample are all 1 -> a single cut at 1
        let b = equal_frequency_bins(&[1.0, 1.0, 1.0, 1.0, 2.0], 5).unwrap();
        assert_eq!(b.cuts, vec![1.0]);
        assert_eq!(b.labels, vec!["[1,1]", "[2,2]"]);
        assert_eq!(b.assignment, vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn single_value_column() {
        let b = equal_frequency_bins(&[3.5; 4], 5).unwrap();
        assert_eq!(b.labels, vec!["[3.5,3.5]"]);
    }

    #[test]
    fn labels_use_shortest_decimal_form() {
        let b = equal_frequency_bins(&[0.1, 0.25, 74.0, 87.0], 2).unwrap();
        assert_eq!(b.labels, vec!["[0.1,0.25]", "[74,87]"]);
    }

    #[test]
    fn rejects_bad_bins() {
        assert!(equal_frequency_bins(&[1.0], 1).is_err());
    }

    #[test]
    fn discretizes_dataset_column() {
        let ds = Dataset::from_labels(
            &["age", "sex"],
            &[
                vec!["30", "f"],
                vec!["41", "m"],
                vec!["52", "f"],
                vec!["63", "m"],
            ],
            vec![1.0, 2.0, 3.0, 4.0],
            vec![true; 4],
        )
        .unwrap();
        let (out, warnings) = discretize_equal_frequency(&ds, &["age".to_string()], 2).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(out.attribute(0).values, vec!["[30,41]", "[52,63]"]);
        assert_eq!(out.attribute(1), ds.attribute(1));
        assert_eq!(numeric_attributes(&ds, 2), vec!["age".to_string()]);

        let err = discretize_equal_frequency(&ds, &["sex".to_string()], 2).unwrap_err();
        assert!(err.to_string().contains("non-numeric"), "{err}");
    }

    #[test]
    fn single_category_warns() {
        let ds = Dataset::from_labels(
            &["x"],
            &[vec!["7"], vec!["7"]],
            vec![1.0, 2.0],
            vec![true; 2],
        )
        .unwrap();
        let (out, warnings) = discretize_equal_frequency(&ds, &["x".to_string()], 5).unwrap();
        assert_eq!(out.attribute(0).values, vec!["[7,7]"]);
        assert_eq!(warnings.len(), 1);
    }
}
