//! Domain types shared by every stage: indicators, raw and normalized
//! matrices, per-unit scores and the four-group classification.
//!
//! All types are plain values. Operations never mutate their inputs, so a
//! matrix can be shared freely between threads.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Cell, MeasureError};

/// Whether larger raw values are better (stimulant) or worse (destimulant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Stimulant,
    Destimulant,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Stimulant => Direction::Destimulant,
            Direction::Destimulant => Direction::Stimulant,
        }
    }
}

/// One diagnostic variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorSpec {
    /// Eurostat online table code, e.g. `tin00111`.
    pub code: String,
    pub label: String,
    /// 1-based position of the variable in its indicator set.
    pub symbol_index: usize,
    pub direction: Direction,
}

impl IndicatorSpec {
    pub fn new(code: impl Into<String>, symbol_index: usize, direction: Direction) -> Self {
        let code = code.into();
        IndicatorSpec {
            label: code.clone(),
            code,
            symbol_index,
            direction,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Raw observations: one row per unit, one column per indicator.
///
/// `values[i][j]` is `None` when the observation is missing. Construction does
/// not check invariants; use [`validate`] to get a full list of defects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationMatrix {
    pub units: Vec<String>,
    pub indicators: Vec<IndicatorSpec>,
    pub values: Vec<Vec<Option<f64>>>,
    pub year: i32,
}

impl ObservationMatrix {
    pub fn new(
        units: Vec<String>,
        indicators: Vec<IndicatorSpec>,
        values: Vec<Vec<Option<f64>>>,
        year: i32,
    ) -> Self {
        ObservationMatrix {
            units,
            indicators,
            values,
            year,
        }
    }

    /// Builds a complete matrix from dense rows.
    pub fn complete(
        units: Vec<String>,
        indicators: Vec<IndicatorSpec>,
        rows: Vec<Vec<f64>>,
        year: i32,
    ) -> Self {
        let values = rows
            .into_iter()
            .map(|r| r.into_iter().map(Some).collect())
            .collect();
        ObservationMatrix::new(units, indicators, values, year)
    }

    pub fn n_units(&self) -> usize {
        self.units.len()
    }

    pub fn n_indicators(&self) -> usize {
        self.indicators.len()
    }

    pub fn indicator_codes(&self) -> Vec<&str> {
        self.indicators.iter().map(|s| s.code.as_str()).collect()
    }

    /// Coordinates of every missing cell, row-major.
    pub fn missing_cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for (unit, row) in self.units.iter().zip(&self.values) {
            for (spec, v) in self.indicators.iter().zip(row) {
                if v.is_none() {
                    out.push(Cell {
                        unit: unit.clone(),
                        indicator: spec.code.clone(),
                    });
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().flatten().all(Option::is_some)
    }

    /// Column `j` with missing cells skipped.
    pub fn present_column(&self, j: usize) -> Vec<f64> {
        self.values.iter().filter_map(|r| r[j]).collect()
    }

    /// Column `j` of a complete matrix.
    pub fn column(&self, j: usize) -> Result<Vec<f64>, MeasureError> {
        self.values
            .iter()
            .zip(&self.units)
            .map(|(r, u)| {
                r[j].ok_or_else(|| {
                    MeasureError::MissingData(vec![Cell {
                        unit: u.clone(),
                        indicator: self.indicators[j].code.clone(),
                    }])
                })
            })
            .collect()
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_indicators(&self, keep: &[usize]) -> ObservationMatrix {
        ObservationMatrix {
            units: self.units.clone(),
            indicators: keep.iter().map(|&j| self.indicators[j].clone()).collect(),
            values: self
                .values
                .iter()
                .map(|r| keep.iter().map(|&j| r[j]).collect())
                .collect(),
            year: self.year,
        }
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_units(&self, keep: &[usize]) -> ObservationMatrix {
        ObservationMatrix {
            units: keep.iter().map(|&i| self.units[i].clone()).collect(),
            indicators: self.indicators.clone(),
            values: keep.iter().map(|&i| self.values[i].clone()).collect(),
            year: self.year,
        }
    }

    fn shape_ok(&self) -> bool {
        self.values.len() == self.units.len()
            && self.values.iter().all(|r| r.len() == self.indicators.len())
    }
}

/// Zero-unitarized values, every entry in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedMatrix {
    pub units: Vec<String>,
    pub indicators: Vec<IndicatorSpec>,
    pub values: Vec<Vec<f64>>,
}

/// What to do with missing cells before analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    #[default]
    Fail,
    DropUnit,
    DropIndicator,
    ImputeColumnMean,
}

/// Per-unit statistics of the normalized row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitScore {
    pub unit: String,
    pub median: f64,
    pub std_dev: f64,
    /// `median * (1 - std_dev)`.
    pub w: f64,
}

/// Development group, from `I` (high) to `IV` (low).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    I,
    II,
    III,
    IV,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::I, Group::II, Group::III, Group::IV];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::I => "I",
            Group::II => "II",
            Group::III => "III",
            Group::IV => "IV",
        }
    }

    pub fn meaning(self) -> &'static str {
        match self {
            Group::I => "high level",
            Group::II => "medium-high level",
            Group::III => "medium-low level",
            Group::IV => "low level",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" => Ok(Group::I),
            "II" => Ok(Group::II),
            "III" => Ok(Group::III),
            "IV" => Ok(Group::IV),
            other => Err(format!("unknown group `{other}`")),
        }
    }
}

/// Cross-unit thresholds and the resulting group of every unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// Mean of all `w`.
    pub mean_w: f64,
    /// Population standard deviation of all `w`.
    pub sd_w: f64,
    pub assignments: BTreeMap<String, Group>,
}

impl Classification {
    pub fn group_of(&self, unit: &str) -> Option<Group> {
        self.assignments.get(unit).copied()
    }

    /// Units of one group, ordered by identifier.
    pub fn members(&self, group: Group) -> Vec<&str> {
        self.assignments
            .iter()
            .filter(|(_, g)| **g == group)
            .map(|(u, _)| u.as_str())
            .collect()
    }

    pub fn sizes(&self) -> [usize; 4] {
        let mut sizes = [0; 4];
        for g in self.assignments.values() {
            sizes[g.index()] += 1;
        }
        sizes
    }
}

/// One defect found by [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    DuplicateUnit {
        unit: String,
    },
    DuplicateIndicator {
        code: String,
    },
    ShapeMismatch {
        expected: (usize, usize),
        row: Option<usize>,
        found: usize,
    },
    MissingCell {
        unit: String,
        indicator: String,
    },
    ConstantColumn {
        code: String,
    },
    TooFewUnits {
        found: usize,
    },
    NoIndicators,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::DuplicateUnit { unit } => write!(f, "duplicate unit `{unit}`"),
            Finding::DuplicateIndicator { code } => write!(f, "duplicate indicator `{code}`"),
            Finding::ShapeMismatch {
                expected,
                row: Some(r),
                found,
            } => write!(f, "row {r} has {found} cells, expected {}", expected.1),
            Finding::ShapeMismatch {
                expected, found, ..
            } => write!(f, "{found} rows for {} units", expected.0),
            Finding::MissingCell { unit, indicator } => {
                write!(f, "missing cell ({unit}, {indicator})")
            }
            Finding::ConstantColumn { code } => write!(f, "constant column `{code}`"),
            Finding::TooFewUnits { found } => write!(f, "{found} units, need at least 2"),
            Finding::NoIndicators => write!(f, "no indicators"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn missing_cells(&self) -> Vec<Cell> {
        self.findings
            .iter()
            .filter_map(|f| match f {
                Finding::MissingCell { unit, indicator } => Some(Cell {
                    unit: unit.clone(),
                    indicator: indicator.clone(),
                }),
                _ => None,
            })
            .collect()
    }

    pub fn has_shape_errors(&self) -> bool {
        self.findings.iter().any(|f| {
            matches!(
                f,
                Finding::ShapeMismatch { .. }
                    | Finding::DuplicateUnit { .. }
                    | Finding::DuplicateIndicator { .. }
            )
        })
    }
}

/// Lists every defect of `matrix`. Never fails.
pub fn validate(matrix: &ObservationMatrix) -> ValidationReport {
    let mut findings = Vec::new();
    let n = matrix.units.len();
    let m = matrix.indicators.len();

    let mut seen = HashSet::new();
    for u in &matrix.units {
        if !seen.insert(u.as_str()) {
            findings.push(Finding::DuplicateUnit { unit: u.clone() });
        }
    }
    let mut seen = HashSet::new();
    for s in &matrix.indicators {
        if !seen.insert(s.code.as_str()) {
            findings.push(Finding::DuplicateIndicator {
                code: s.code.clone(),
            });
        }
    }
    if n < 2 {
        findings.push(Finding::TooFewUnits { found: n });
    }
    if m == 0 {
        findings.push(Finding::NoIndicators);
    }

    if matrix.values.len() != n {
        findings.push(Finding::ShapeMismatch {
            expected: (n, m),
            row: None,
            found: matrix.values.len(),
        });
    }
    for (i, row) in matrix.values.iter().enumerate() {
        if row.len() != m {
            findings.push(Finding::ShapeMismatch {
                expected: (n, m),
                row: Some(i),
                found: row.len(),
            });
        }
    }
    if !matrix.shape_ok() {
        return ValidationReport { findings };
    }

    for cell in matrix.missing_cells() {
        findings.push(Finding::MissingCell {
            unit: cell.unit,
            indicator: cell.indicator,
        });
    }
    for (j, spec) in matrix.indicators.iter().enumerate() {
        let col = matrix.present_column(j);
        if col.len() >= 2 {
            let (lo, hi) = min_max(&col);
            if lo == hi {
                findings.push(Finding::ConstantColumn {
                    code: spec.code.clone(),
                });
            }
        }
    }
    ValidationReport { findings }
}

pub(crate) fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Returns a matrix with no missing cells, or an error.
///
/// Unit and indicator order is preserved for whatever survives.
pub fn apply_missing_policy(
    matrix: &ObservationMatrix,
    policy: MissingPolicy,
) -> Result<ObservationMatrix, MeasureError> {
    if !matrix.shape_ok() {
        return Err(MeasureError::InvalidMatrix(format!(
            "grid does not match {} units x {} indicators",
            matrix.units.len(),
            matrix.indicators.len()
        )));
    }
    let missing = matrix.missing_cells();
    if missing.is_empty() {
        return Ok(matrix.clone());
    }

    match policy {
        MissingPolicy::Fail => Err(MeasureError::MissingData(missing)),
        MissingPolicy::DropUnit => {
            let keep: Vec<usize> = (0..matrix.n_units())
                .filter(|&i| matrix.values[i].iter().all(Option::is_some))
                .collect();
            if keep.len() < 2 {
                return Err(MeasureError::DegenerateMatrix(format!(
                    "dropping incomplete units leaves {} unit(s)",
                    keep.len()
                )));
            }
            Ok(matrix.select_units(&keep))
        }
        MissingPolicy::DropIndicator => {
            let keep: Vec<usize> = (0..matrix.n_indicators())
                .filter(|&j| matrix.values.iter().all(|r| r[j].is_some()))
                .collect();
            if keep.is_empty() {
                return Err(MeasureError::DegenerateMatrix(
                    "dropping incomplete indicators leaves none".into(),
                ));
            }
            Ok(matrix.select_indicators(&keep))
        }
        MissingPolicy::ImputeColumnMean => {
            let mut out = matrix.clone();
            for j in 0..matrix.n_indicators() {
                let present = matrix.present_column(j);
                if present.len() == matrix.n_units() {
                    continue;
                }
                if present.is_empty() {
                    let cells = missing
                        .iter()
                        .filter(|c| c.indicator == matrix.indicators[j].code)
                        .cloned()
                        .collect();
                    return Err(MeasureError::MissingData(cells));
                }
                let mean = present.iter().sum::<f64>() / present.len() as f64;
                for row in &mut out.values {
                    row[j].get_or_insert(mean);
                }
            }
            Ok(out)
        }
    }
}
