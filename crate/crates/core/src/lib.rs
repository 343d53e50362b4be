//! Offline fairness evaluation for recommender systems.
//!
//! The crate covers exposure-based and relevance-aware individual item
//! fairness, individual and group user fairness, effectiveness measures,
//! the distance-to-Pareto-frontier (DPFR) joint evaluation, synthetic
//! stress-test generators and measure agreement analysis.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::type_complexity
)]

pub mod agreement;
pub mod effectiveness;
pub mod error;
pub mod eval;
pub mod exposure;
pub mod group_fairness;
pub mod io;
pub mod measure;
pub mod model;
pub mod pareto;
pub mod relevance_aware;
pub mod report;
pub mod rerank;
pub mod stats;
pub mod synth;
pub mod user_fairness;

pub use error::{Error, Result};
pub use measure::{Direction, MeasureResult, Variant, Warning};
pub use model::{Catalog, Cutoff, ExamFn, GroupTable, Interactions, Qrels, RunSet};
