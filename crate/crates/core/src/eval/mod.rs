//! Set-level metrics, pairwise similarity matrices and result files.

mod io;
mod metrics;
mod similarity;

pub use io::{
    export_subgroup_set, import_subgroup_set, render_table, subgroup_record, ConditionRecord,
    SubgroupFile, SubgroupRecord, SCHEMA_VERSION,
};
pub use metrics::{compute_metrics, MetricsReport};
pub use similarity::{
    cross_similarity, sim_coverage, sim_description, sim_model, SimilarityMatrix, SimilarityMeasure,
};
