//! Synthetic development measures built by zero unitarization.
//!
//! Raw indicator values for a set of units (countries) are rescaled per
//! column onto `[0, 1]`, each unit is summarised by the median and population
//! standard deviation of its normalized row, and the aggregate
//! `w = median * (1 - std_dev)` places it in one of four development groups.
//!
//! Modules:
//! - [`model`]: shared types, validation and missing-data handling
//! - [`measure`]: normalization, scoring, classification and the pipeline
//! - [`ingest`]: fixture CSV, Eurostat TSV and the JSON-stat API client
//! - [`robustness`]: leave-one-out, perturbation and Spearman agreement
//! - [`report`]: JSON/CSV/Markdown emitters and the SVG chart
//!
//! The `parallel` feature (on by default) runs per-unit scoring and
//! perturbation trials on a rayon pool. Results are identical either way.

pub mod error;
pub mod exec;
pub mod ingest;
pub mod measure;
pub mod model;
pub mod report;
pub mod robustness;

pub use error::{Cell, IngestError, MeasureError};
pub use exec::Execution;
pub use measure::{run_pipeline, AnalysisResult, ConstantColumnPolicy, Settings, TiePolicy};
pub use model::{
    apply_missing_policy, validate, Classification, Direction, Group, IndicatorSpec, MissingPolicy,
    NormalizedMatrix, ObservationMatrix, UnitScore, ValidationReport,
};
