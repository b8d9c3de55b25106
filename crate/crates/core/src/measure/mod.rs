//! The numeric core: zero unitarization, per-unit statistics, the aggregate
//! measure `w = median * (1 - std_dev)` and the four-group classification.

mod classify;
mod normalize;
mod pipeline;
mod stats;

pub use classify::{classify, group_for, TiePolicy};
pub use normalize::{normalize_column, normalize_matrix};
pub use pipeline::{run_pipeline, sort_scores, AnalysisResult, ConstantColumnPolicy, Settings};
pub use stats::{mean, median, std_dev, unit_score};
