//! Ant-colony mining of diverse subgroups with exceptional survival.
//!
//! A run repeatedly launches an ant colony over the uncovered records, each
//! colony returning the description whose Kaplan-Meier curve differs most
//! from a baseline (log-rank test), and folds it into a result set that
//! suppresses descriptions subsumed by a member with a similar model.
//!
//! ```no_run
//! use esmamds::data::{load_dataset, Schema};
//! use esmamds::search::{Preset, SearchParams};
//! use esmamds::set::run_esmamds;
//!
//! let file = std::fs::File::open("data.csv")?;
//! let dataset = load_dataset(file, &Schema::new("time", "status"))?.dataset;
//! let report = run_esmamds(&dataset, &SearchParams::preset(Preset::Pop))?;
//! for member in &report.set.members {
//!     println!("{}", member.description().render(&dataset));
//! }
//! # Ok::<(), esmamds::Error>(())
//! ```

pub mod data;
pub mod error;
pub mod eval;
pub mod search;
pub mod set;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
