//! Output formats for analysis and sensitivity results.
//!
//! JSON carries full `f64` precision; CSV and Markdown round to 6 significant
//! digits.

mod chart;
mod tables;

pub use chart::render_svg;
pub use tables::{
    analysis_rows, emit_analysis, emit_loo, emit_perturbation, sig6, AnalysisRow, Format,
};
