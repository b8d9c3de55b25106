use serde::Serialize;

use super::spearman::rank_correlation;
use crate::error::MeasureError;
use crate::measure::{run_pipeline, AnalysisResult, Settings};
use crate::model::ObservationMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variant {
    pub label: String,
    pub result: AnalysisResult,
    pub rank_correlation: f64,
    /// Units classified differently from the baseline.
    pub group_changes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub baseline: AnalysisResult,
    pub variants: Vec<Variant>,
}

/// Compares a variant result with the baseline.
pub fn compare(
    label: String,
    baseline: &AnalysisResult,
    result: AnalysisResult,
) -> Result<Variant, MeasureError> {
    let rank_correlation = rank_correlation(&baseline.ranking(), &result.ranking())?;
    let group_changes = result
        .classification
        .assignments
        .iter()
        .filter(|(u, g)| baseline.group_of(u).is_some_and(|b| b != **g))
        .count();
    Ok(Variant {
        label,
        result,
        rank_correlation,
        group_changes,
    })
}

/// Re-runs the pipeline once per indicator with that indicator removed.
pub fn leave_one_out(
    matrix: &ObservationMatrix,
    settings: &Settings,
) -> Result<SensitivityReport, MeasureError> {
    let m = matrix.n_indicators();
    if m < 2 {
        return Err(MeasureError::DegenerateInput(format!(
            "leave-one-out needs at least 2 indicators, got {m}"
        )));
    }
    let baseline = run_pipeline(matrix, settings)?;
    let variants = settings
        .execution
        .map_range(m, |j| {
            let keep: Vec<usize> = (0..m).filter(|&k| k != j).collect();
            let result = run_pipeline(&matrix.select_indicators(&keep), settings)?;
            compare(
                format!("without {}", matrix.indicators[j].code),
                &baseline,
                result,
            )
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SensitivityReport { baseline, variants })
}
