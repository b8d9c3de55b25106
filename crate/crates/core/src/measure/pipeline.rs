//! End-to-end analysis: missing-data policy, normalization, per-unit scores,
//! classification.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::classify::{classify, TiePolicy};
use super::normalize::{constant_columns, normalize_matrix};
use super::stats::unit_score;
use crate::error::MeasureError;
use crate::exec::Execution;
use crate::model::{
    apply_missing_policy, Classification, Group, MissingPolicy, NormalizedMatrix,
    ObservationMatrix, UnitScore,
};

/// Handling of indicators whose values are all equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantColumnPolicy {
    #[default]
    Error,
    DropIndicator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Settings {
    pub missing: MissingPolicy,
    pub tie: TiePolicy,
    pub constant_column: ConstantColumnPolicy,
    #[serde(skip)]
    pub execution: Execution,
}

impl Settings {
    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    pub normalized: NormalizedMatrix,
    /// Descending by `w`, ties by unit identifier ascending.
    pub scores: Vec<UnitScore>,
    pub classification: Classification,
    pub effective_indicators: usize,
    pub dropped_units: Vec<String>,
    pub dropped_indicators: Vec<String>,
}

impl AnalysisResult {
    /// Unit identifiers in rank order.
    pub fn ranking(&self) -> Vec<String> {
        self.scores.iter().map(|s| s.unit.clone()).collect()
    }

    /// 1-based rank of a unit.
    pub fn rank_of(&self, unit: &str) -> Option<usize> {
        self.scores
            .iter()
            .position(|s| s.unit == unit)
            .map(|p| p + 1)
    }

    pub fn group_of(&self, unit: &str) -> Option<Group> {
        self.classification.group_of(unit)
    }
}

/// Orders scores descending by `w`, breaking ties by unit identifier.
pub fn sort_scores(scores: &mut [UnitScore]) {
    scores.sort_by(|a, b| b.w.total_cmp(&a.w).then_with(|| a.unit.cmp(&b.unit)));
}

pub fn run_pipeline(
    matrix: &ObservationMatrix,
    settings: &Settings,
) -> Result<AnalysisResult, MeasureError> {
    let complete =
        apply_missing_policy(matrix, settings.missing).map_err(|e| e.at("missing-data policy"))?;

    let constant = constant_columns(&complete);
    let prepared = if constant.is_empty() {
        complete
    } else {
        match settings.constant_column {
            ConstantColumnPolicy::Error => {
                let code = complete.indicators[constant[0]].code.clone();
                return Err(MeasureError::ConstantColumn(Some(code)).at("normalization"));
            }
            ConstantColumnPolicy::DropIndicator => {
                let keep: Vec<usize> = (0..complete.n_indicators())
                    .filter(|j| !constant.contains(j))
                    .collect();
                if keep.is_empty() {
                    return Err(MeasureError::DegenerateMatrix(
                        "every indicator is constant".into(),
                    )
                    .at("normalization"));
                }
                complete.select_indicators(&keep)
            }
        }
    };
    if prepared.n_units() < 2 {
        return Err(MeasureError::DegenerateMatrix(format!(
            "{} unit(s), need at least 2",
            prepared.n_units()
        ))
        .at("normalization"));
    }

    let normalized = normalize_matrix(&prepared).map_err(|e| e.at("normalization"))?;

    let mut scores = settings
        .execution
        .map_range(normalized.units.len(), |i| {
            unit_score(&normalized.units[i], &normalized.values[i])
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.at("scoring"))?;
    sort_scores(&mut scores);

    let classification = classify(&scores, settings.tie).map_err(|e| e.at("classification"))?;

    let kept: HashSet<&String> = prepared.units.iter().collect();
    let dropped_units = matrix
        .units
        .iter()
        .filter(|u| !kept.contains(u))
        .cloned()
        .collect();
    let dropped_indicators = matrix
        .indicators
        .iter()
        .filter(|s| !prepared.indicators.iter().any(|p| p.code == s.code))
        .map(|s| s.code.clone())
        .collect();

    Ok(AnalysisResult {
        effective_indicators: prepared.n_indicators(),
        normalized,
        scores,
        classification,
        dropped_units,
        dropped_indicators,
    })
}
