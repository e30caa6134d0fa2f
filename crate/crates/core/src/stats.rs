//! Kaplan-Meier estimation, the two-sample log-rank test and the
//! exceptionality quality measure built on it.
//!
//! Ties: a record leaves the risk set after its time, so at a shared time
//! events are counted against a risk set that still holds the records
//! censored at that same time.
//!
//! The chi-square(1) upper tail is `erfc(sqrt(x / 2))`, with `erfc` from
//! `libm` (the musl/FreeBSD implementation, within about 1 ulp; the
//! reference-value test below checks relative error 1e-12).

use std::fmt;
use std::str::FromStr;

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::data::{cover, Dataset, Description, Extent, Subgroup, TimeGrid};
use crate::error::{Error, Result};

/// What a subgroup's survival model is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineMode {
    /// The whole dataset, subgroup included.
    Population,
    /// Every record outside the subgroup.
    Complement,
}

impl BaselineMode {
    /// Baseline extent for a subgroup extent.
    pub fn baseline_extent(&self, extent: &Extent) -> Extent {
        match self {
            BaselineMode::Population => Extent::full(extent.universe()),
            BaselineMode::Complement => extent.complement(),
        }
    }
}

impl fmt::Display for BaselineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaselineMode::Population => write!(f, "population"),
            BaselineMode::Complement => write!(f, "complement"),
        }
    }
}

impl FromStr for BaselineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "population" | "pop" => Ok(BaselineMode::Population),
            "complement" | "cpm" => Ok(BaselineMode::Complement),
            other => Err(Error::InvalidParameter(format!(
                "unknown baseline `{other}` (expected population or complement)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KmPoint {
    pub time: f64,
    pub at_risk: usize,
    pub events: usize,
    pub survival: f64,
}

/// Product-limit survival estimate; one point per distinct event time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KmCurve {
    pub points: Vec<KmPoint>,
    pub n: usize,
}

impl KmCurve {
    /// Step-function value at `t` (right-continuous, 1 before the first event).
    pub fn survival_at(&self, t: f64) -> f64 {
        self.points
            .iter()
            .take_while(|p| p.time <= t)
            .last()
            .map_or(1.0, |p| p.survival)
    }
}

pub fn km_fit(times: &[f64], events: &[bool]) -> Result<KmCurve> {
    if times.is_empty() {
        return Err(Error::EmptyDataset(
            "Kaplan-Meier fit needs at least one record".into(),
        ));
    }
    if times.len() != events.len() {
        return Err(Error::InvalidParameter(format!(
            "{} times but {} event flags",
            times.len(),
            events.len()
        )));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "invalid survival time {t}"
        )));
    }
    let grid = TimeGrid::new(times);
    let counts = TimeCounts::from_records(&grid, events, 0..times.len());
    Ok(counts.km_curve(&grid))
}

/// Kaplan-Meier curve of the records in `extent`.
pub fn km_extent(extent: &Extent, dataset: &Dataset) -> KmCurve {
    TimeCounts::from_extent(extent, dataset).km_curve(dataset.grid())
}

/// Events and exits per position of a time grid.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct TimeCounts {
    events: Vec<u32>,
    exits: Vec<u32>,
    n: u32,
}

impl TimeCounts {
    pub(crate) fn from_records(
        grid: &TimeGrid,
        events: &[bool],
        records: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut counts = TimeCounts {
            events: vec![0; grid.times.len()],
            exits: vec![0; grid.times.len()],
            n: 0,
        };
        for r in records {
            let k = grid.rank[r];
            counts.exits[k] += 1;
            counts.events[k] += u32::from(events[r]);
            counts.n += 1;
        }
        counts
    }

    pub(crate) fn from_extent(extent: &Extent, dataset: &Dataset) -> Self {
        Self::from_records(dataset.grid(), dataset.events(), extent.iter())
    }

    fn minus(&self, other: &TimeCounts) -> TimeCounts {
        TimeCounts {
            events: self
                .events
                .iter()
                .zip(&other.events)
                .map(|(a, b)| a - b)
                .collect(),
            exits: self
                .exits
                .iter()
                .zip(&other.exits)
                .map(|(a, b)| a - b)
                .collect(),
            n: self.n - other.n,
        }
    }

    fn km_curve(&self, grid: &TimeGrid) -> KmCurve {
        let mut at_risk = self.n as usize;
        let mut survival = 1.0;
        let mut points = Vec::new();
        for (k, &time) in grid.times.iter().enumerate() {
            let d = self.events[k] as usize;
            if d > 0 {
                survival *= 1.0 - d as f64 / at_risk as f64;
                points.push(KmPoint {
                    time,
                    at_risk,
                    events: d,
                    survival,
                });
            }
            at_risk -= self.exits[k] as usize;
        }
        KmCurve {
            points,
            n: self.n as usize,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRankResult {
    pub statistic: f64,
    pub p_value: f64,
}

impl LogRankResult {
    const NO_DIFFERENCE: LogRankResult = LogRankResult {
        statistic: 0.0,
        p_value: 1.0,
    };
}

/// Upper tail of the chi-square distribution with one degree of freedom.
pub fn chi2_1_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    erfc((x / 2.0).sqrt())
}

/// Mantel-Haenszel log-rank statistic on counts aligned to one grid.
fn logrank_counts(a: &TimeCounts, b: &TimeCounts) -> LogRankResult {
    let mut risk_a = a.n as f64;
    let mut risk_b = b.n as f64;
    let mut observed_minus_expected = 0.0;
    let mut variance = 0.0;
    // Both terms are written so that swapping the groups negates the
    // observed-minus-expected sum exactly and leaves the variance unchanged.
    for k in 0..a.events.len() {
        let d_a = a.events[k] as f64;
        let d_b = b.events[k] as f64;
        let d = d_a + d_b;
        let r = risk_a + risk_b;
        if d > 0.0 && r > 0.0 {
            // d_a - d * r_a / r
            observed_minus_expected += (d_a * risk_b - d_b * risk_a) / r;
            if r > 1.0 {
                variance += d * (risk_a * risk_b / (r * r)) * (r - d) / (r - 1.0);
            }
        }
        risk_a -= a.exits[k] as f64;
        risk_b -= b.exits[k] as f64;
    }
    if variance <= 0.0 {
        return LogRankResult::NO_DIFFERENCE;
    }
    let statistic = observed_minus_expected * observed_minus_expected / variance;
    LogRankResult {
        statistic,
        p_value: chi2_1_sf(statistic),
    }
}

/// Two-sample log-rank test between the records of two extents.
///
/// The extents may overlap; a shared record counts in both samples.
pub fn logrank(group_a: &Extent, group_b: &Extent, dataset: &Dataset) -> LogRankResult {
    logrank_counts(
        &TimeCounts::from_extent(group_a, dataset),
        &TimeCounts::from_extent(group_b, dataset),
    )
}

/// Log-rank test on two raw `(time, event)` samples.
pub fn logrank_samples(a: &[(f64, bool)], b: &[(f64, bool)]) -> LogRankResult {
    let times: Vec<f64> = a.iter().chain(b).map(|s| s.0).collect();
    let events: Vec<bool> = a.iter().chain(b).map(|s| s.1).collect();
    let grid = TimeGrid::new(&times);
    let counts_a = TimeCounts::from_records(&grid, &events, 0..a.len());
    let counts_b = TimeCounts::from_records(&grid, &events, a.len()..times.len());
    logrank_counts(&counts_a, &counts_b)
}

/// Quality of a subgroup against its baseline, with the log-rank test
/// behind it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityScore {
    pub quality: f64,
    pub p_value: f64,
    pub statistic: f64,
}

impl QualityScore {
    pub const ZERO: QualityScore = QualityScore {
        quality: 0.0,
        p_value: 1.0,
        statistic: 0.0,
    };

    /// Strictly higher quality than `other`.
    ///
    /// Quality is `1 - p` and `p` falls monotonically in the chi-square
    /// statistic, so ordering by the statistic is the same order without
    /// `1 - p` rounding to exactly 1 for very small p-values.
    pub fn beats(&self, other: &QualityScore) -> bool {
        self.statistic > other.statistic
    }

    /// Quality at least as high as `other`.
    pub fn at_least(&self, other: &QualityScore) -> bool {
        self.statistic >= other.statistic
    }
}

/// `1 - p` of the log-rank test between an extent and its baseline.
///
/// An empty extent, or the whole dataset under the complement baseline,
/// scores zero.
pub fn score_extent(extent: &Extent, mode: BaselineMode, dataset: &Dataset) -> QualityScore {
    if extent.is_empty() {
        return QualityScore::ZERO;
    }
    let counts = TimeCounts::from_extent(extent, dataset);
    let population = dataset.population_counts();
    let result = match mode {
        BaselineMode::Population => logrank_counts(&counts, population),
        BaselineMode::Complement => {
            if extent.is_full() {
                return QualityScore::ZERO;
            }
            logrank_counts(&counts, &population.minus(&counts))
        }
    };
    QualityScore {
        quality: 1.0 - result.p_value,
        p_value: result.p_value,
        statistic: result.statistic,
    }
}

pub fn quality(subgroup: &Subgroup, mode: BaselineMode, dataset: &Dataset) -> f64 {
    score_extent(&subgroup.extent, mode, dataset).quality
}

/// A subgroup scored against a baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoredSubgroup {
    pub subgroup: Subgroup,
    pub score: QualityScore,
}

impl ScoredSubgroup {
    pub fn evaluate(description: &Description, mode: BaselineMode, dataset: &Dataset) -> Self {
        Self::from_subgroup(cover(description, dataset), mode, dataset)
    }

    pub fn from_subgroup(subgroup: Subgroup, mode: BaselineMode, dataset: &Dataset) -> Self {
        // the universal description is never a finding
        let score = if subgroup.description.is_empty() {
            QualityScore::ZERO
        } else {
            score_extent(&subgroup.extent, mode, dataset)
        };
        ScoredSubgroup { subgroup, score }
    }

    pub fn description(&self) -> &Description {
        &self.subgroup.description
    }

    pub fn extent(&self) -> &Extent {
        &self.subgroup.extent
    }

    pub fn quality(&self) -> f64 {
        self.score.quality
    }
}

/// True when the two survival models differ at level `alpha`.
pub fn models_differ(a: &Extent, b: &Extent, alpha: f64, dataset: &Dataset) -> bool {
    logrank(a, b, dataset).p_value <= alpha
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn km_without_events_has_no_points() {
        let c = km_fit(&[3.0, 7.0, 9.0], &[false; 3]).unwrap();
        assert!(c.points.is_empty());
        assert_eq!(c.survival_at(100.0), 1.0);
    }

    #[test]
    fn km_hand_example() {
        let c = km_fit(
            &[1.0, 2.0, 3.0, 4.0, 5.0],
            &[true, true, false, true, false],
        )
        .unwrap();
        let s: Vec<(f64, f64)> = c.points.iter().map(|p| (p.time, p.survival)).collect();
        assert_eq!(s.len(), 3);
        for ((t, v), (et, ev)) in s.iter().zip([(1.0, 0.8), (2.0, 0.6), (4.0, 0.3)]) {
            assert_eq!(*t, et);
            assert!((v - ev).abs() < 1e-12, "{v} vs {ev}");
        }
        assert_eq!(c.points[2].at_risk, 2);
    }

    #[test]
    fn km_single_event() {
        let c = km_fit(&[2.0], &[true]).unwrap();
        assert_eq!(c.points[0].survival, 0.0);
    }

    #[test]
    fn km_empty_is_error() {
        assert!(km_fit(&[], &[]).is_err());
    }

    #[test]
    fn km_tie_counts_censored_at_same_time_in_risk_set() {
        let c = km_fit(&[2.0, 2.0, 3.0], &[true, false, true]).unwrap();
        assert_eq!(c.points[0].at_risk, 3);
        assert!((c.points[0].survival - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.points[1].at_risk, 1);
        assert_eq!(c.points[1].survival, 0.0);
    }

    #[test]
    fn aml_logrank_matches_reference() {
        // survdiff(Surv(time, status) ~ x, data = aml): Chisq = 3.4, p = 0.0653
        let maintained = [
            (9.0, true),
            (13.0, true),
            (13.0, false),
            (18.0, true),
            (23.0, true),
            (28.0, false),
            (31.0, true),
            (34.0, true),
            (45.0, false),
            (48.0, true),
            (161.0, false),
        ];
        let non = [
            (5.0, true),
            (5.0, true),
            (8.0, true),
            (8.0, true),
            (12.0, true),
            (16.0, false),
            (23.0, true),
            (27.0, true),
            (30.0, true),
            (33.0, true),
            (43.0, true),
            (45.0, true),
        ];
        let r = logrank_samples(&maintained, &non);
        assert!((r.statistic - 3.396).abs() < 1e-3, "{}", r.statistic);
        assert!((r.p_value - 0.0653).abs() < 1e-4, "{}", r.p_value);
        let swapped = logrank_samples(&non, &maintained);
        assert_eq!(r, swapped);
    }

    #[test]
    fn identical_samples_give_p_one() {
        let a = [(1.0, true), (2.0, false), (3.0, true), (3.0, true)];
        let r = logrank_samples(&a, &a);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn no_events_is_no_difference() {
        let r = logrank_samples(&[(1.0, false)], &[(2.0, false)]);
        assert_eq!(r, LogRankResult::NO_DIFFERENCE);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn chi2_tail_reference_values() {
        // mpmath: erfc(sqrt(x/2)) at 50 digits
        let cases = [
            (0.5, 0.47950012218695346),
            (1.0, 0.3173105078629141),
            (3.841458820694124, 0.050000000000000057),
            (10.0, 0.0015654022580025497),
            (30.0, 4.3204630578274973e-8),
            (100.0, 1.5239706048321052e-23),
        ];
        for (x, p) in cases {
            let got = chi2_1_sf(x);
            assert!(((got - p) / p).abs() < 1e-12, "x={x}: {got} vs {p}");
        }
        assert_eq!(chi2_1_sf(0.0), 1.0);
    }

    #[test]
    fn baseline_parse_and_display() {
        assert_eq!(
            "population".parse::<BaselineMode>().unwrap(),
            BaselineMode::Population
        );
        assert_eq!(
            "complement".parse::<BaselineMode>().unwrap(),
            BaselineMode::Complement
        );
        assert!("other".parse::<BaselineMode>().is_err());
        assert_eq!(BaselineMode::Complement.to_string(), "complement");
    }

    fn two_groups() -> Dataset {
        let mut rows = Vec::new();
        let mut times = Vec::new();
        for i in 0..20 {
            rows.push(vec!["short"]);
            times.push(1.0 + i as f64);
        }
        for i in 0..20 {
            rows.push(vec!["long"]);
            times.push(100.0 + i as f64);
        }
        Dataset::from_labels(&["g"], &rows, times, vec![true; 40]).unwrap()
    }

    #[test]
    fn whole_dataset_has_zero_quality() {
        let ds = two_groups();
        let all = ds.all();
        assert_eq!(
            score_extent(&all, BaselineMode::Population, &ds).quality,
            0.0
        );
        assert_eq!(
            score_extent(&all, BaselineMode::Complement, &ds),
            QualityScore::ZERO
        );
        assert_eq!(
            score_extent(&Extent::empty(40), BaselineMode::Population, &ds),
            QualityScore::ZERO
        );
    }

    #[test]
    fn early_events_group_is_exceptional() {
        let ds = two_groups();
        let short = ds
            .item_extent(ds.item_by_label("g", "short").unwrap())
            .clone();
        let long = ds
            .item_extent(ds.item_by_label("g", "long").unwrap())
            .clone();
        assert!(logrank(&short, &long, &ds).p_value < 0.05);
        assert!(models_differ(&short, &long, 0.05, &ds));
        assert!(!models_differ(&short, &short, 0.05, &ds));
        let pop = score_extent(&short, BaselineMode::Population, &ds);
        let cpm = score_extent(&short, BaselineMode::Complement, &ds);
        assert!(pop.quality > 0.95 && cpm.quality > pop.quality);
        // complement mode equals the explicit two-extent test
        let direct = logrank(&short, &short.complement(), &ds);
        assert!((cpm.p_value - direct.p_value).abs() < 1e-15);
    }
}
