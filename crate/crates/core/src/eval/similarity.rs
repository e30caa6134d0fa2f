use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Description, Extent};
use crate::error::{Error, Result};
use crate::stats::{logrank, ScoredSubgroup};

/// Shared items over the size of the smaller item set.
pub fn sim_description(a: &Description, b: &Description) -> Result<f64> {
    let min = a.n_items().min(b.n_items());
    if min == 0 {
        return Err(Error::Undefined(
            "description similarity of an empty description".into(),
        ));
    }
    Ok(a.items().intersection(b.items()).count() as f64 / min as f64)
}

/// Shared records over the size of the smaller extent.
pub fn sim_coverage(a: &Extent, b: &Extent) -> Result<f64> {
    let min = a.len().min(b.len());
    if min == 0 {
        return Err(Error::Undefined(
            "coverage similarity of an empty extent".into(),
        ));
    }
    Ok(a.intersection_len(b) as f64 / min as f64)
}

/// True when the log-rank test cannot tell the two models apart at `alpha`.
pub fn sim_model(a: &Extent, b: &Extent, alpha: f64, dataset: &Dataset) -> bool {
    logrank(a, b, dataset).p_value > alpha
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMeasure {
    Description,
    Coverage,
    Model,
}

impl SimilarityMeasure {
    pub const ALL: [SimilarityMeasure; 3] = [
        SimilarityMeasure::Description,
        SimilarityMeasure::Coverage,
        SimilarityMeasure::Model,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SimilarityMeasure::Description => "description",
            SimilarityMeasure::Coverage => "coverage",
            SimilarityMeasure::Model => "model",
        }
    }

    pub fn between(
        &self,
        a: &ScoredSubgroup,
        b: &ScoredSubgroup,
        alpha: f64,
        dataset: &Dataset,
    ) -> Result<f64> {
        match self {
            SimilarityMeasure::Description => sim_description(a.description(), b.description()),
            SimilarityMeasure::Coverage => sim_coverage(a.extent(), b.extent()),
            SimilarityMeasure::Model => Ok(f64::from(u8::from(sim_model(
                a.extent(),
                b.extent(),
                alpha,
                dataset,
            )))),
        }
    }
}

/// `values[i][j]` compares row subgroup `i` with column subgroup `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityMatrix {
    pub measure: SimilarityMeasure,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    /// Grid with a header of column labels and one labelled line per row.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        let mut header = vec![String::new()];
        header.extend(self.cols.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.rows.iter().zip(&self.values) {
            let mut line = vec![label.clone()];
            line.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&line)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// All pairwise similarities between two subgroup lists, labelled by
/// rendered description.
pub fn cross_similarity(
    set_a: &[ScoredSubgroup],
    set_b: &[ScoredSubgroup],
    measure: SimilarityMeasure,
    alpha: f64,
    dataset: &Dataset,
) -> Result<SimilarityMatrix> {
    if set_a.is_empty() || set_b.is_empty() {
        return Err(Error::Undefined(
            "similarity matrix of an empty subgroup set".into(),
        ));
    }
    let values = set_a
        .iter()
        .map(|a| {
            set_b
                .iter()
                .map(|b| measure.between(a, b, alpha, dataset))
                .collect()
        })
        .collect::<Result<_>>()?;
    let label = |s: &ScoredSubgroup| s.description().render(dataset);
    Ok(SimilarityMatrix {
        measure,
        rows: set_a.iter().map(label).collect(),
        cols: set_b.iter().map(label).collect(),
        values,
    })
}
