//! Stability of the ranking: leave-one-indicator-out re-runs, multiplicative
//! noise trials, and Spearman agreement between rankings.

mod loo;
mod perturb;
mod spearman;

pub use loo::{compare, leave_one_out, SensitivityReport, Variant};
pub use perturb::{cell_noise, perturb, perturbed_matrix, PerturbationReport, UnitFrequency};
pub use spearman::rank_correlation;
