use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::Result;
use crate::search::cover_counts;
use crate::stats::ScoredSubgroup;

use super::similarity::{sim_coverage, sim_description, sim_model};

/// Quality, size, coverage and redundancy summary of one subgroup set.
///
/// Averages over members are absent for an empty set; pairwise
/// redundancies are absent with fewer than two members; `cr` is absent
/// when no record is covered.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Fraction of members whose model differs from the baseline at alpha.
    pub epsilon: Option<f64>,
    pub num_subgroups: usize,
    /// Mean number of constrained attributes.
    pub avg_length: Option<f64>,
    /// Mean member coverage as a fraction of the dataset.
    pub sg_cov: Option<f64>,
    /// Fraction of records covered by any member.
    pub db_cov: f64,
    pub rho_d: Option<f64>,
    pub rho_c: Option<f64>,
    pub rho_m: Option<f64>,
    pub cr: Option<f64>,
    /// Mean number of members covering a record.
    pub g_hat: f64,
}

impl MetricsReport {
    /// `(name, value)` pairs in report order; absent values are `None`.
    pub fn fields(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("epsilon", self.epsilon),
            ("num_subgroups", Some(self.num_subgroups as f64)),
            ("avg_length", self.avg_length),
            ("sg_cov", self.sg_cov),
            ("db_cov", Some(self.db_cov)),
            ("rho_d", self.rho_d),
            ("rho_c", self.rho_c),
            ("rho_m", self.rho_m),
            ("cr", self.cr),
            ("g_hat", Some(self.g_hat)),
        ]
    }
}

/// Every set metric for `members`, whose scores must be against the
/// intended baseline.
pub fn compute_metrics(
    members: &[ScoredSubgroup],
    dataset: &Dataset,
    alpha: f64,
) -> Result<MetricsReport> {
    let n = dataset.n_records() as f64;
    let k = members.len();
    let mean = |total: f64| (k > 0).then(|| total / k as f64);

    let exceptional = members.iter().filter(|m| m.score.p_value <= alpha).count();
    let length: usize = members.iter().map(|m| m.description().len()).sum();
    let coverage: usize = members.iter().map(|m| m.subgroup.coverage()).sum();

    let extents: Vec<_> = members.iter().map(|m| m.extent().clone()).collect();
    let g = cover_counts(dataset.n_records(), &extents);
    let covered = g.iter().filter(|&&c| c > 0).count();
    let g_hat = g.iter().sum::<usize>() as f64 / n;
    let cr = (g_hat > 0.0).then(|| {
        g.iter()
            .map(|&c| (c as f64 - g_hat).abs() / g_hat)
            .sum::<f64>()
            / n
    });

    let (mut rho_d, mut rho_c, mut rho_m) = (None, None, None);
    if k >= 2 {
        let (mut sd, mut sc, mut sm) = (0.0, 0.0, 0.0);
        for i in 0..k {
            for j in (i + 1)..k {
                let (a, b) = (&members[i], &members[j]);
                sd += sim_description(a.description(), b.description())?;
                sc += sim_coverage(a.extent(), b.extent())?;
                sm += f64::from(u8::from(sim_model(a.extent(), b.extent(), alpha, dataset)));
            }
        }
        let pairs = (k * (k - 1) / 2) as f64;
        rho_d = Some(sd / pairs);
        rho_c = Some(sc / pairs);
        rho_m = Some(sm / pairs);
    }

    Ok(MetricsReport {
        epsilon: mean(exceptional as f64),
        num_subgroups: k,
        avg_length: mean(length as f64),
        sg_cov: mean(coverage as f64 / n),
        db_cov: covered as f64 / n,
        rho_d,
        rho_c,
        rho_m,
        cr,
        g_hat,
    })
}
