//! Zero unitarization: per-column min-max rescaling onto `[0, 1]`.

use crate::error::MeasureError;
use crate::model::{min_max, Direction, NormalizedMatrix, ObservationMatrix};

/// Rescales one column so its minimum maps to 0 and its maximum to 1
/// (stimulant), or the reverse (destimulant).
pub fn normalize_column(values: &[f64], direction: Direction) -> Result<Vec<f64>, MeasureError> {
    if values.len() < 2 {
        return Err(MeasureError::DegenerateInput(format!(
            "normalization needs at least 2 values, got {}",
            values.len()
        )));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(MeasureError::DegenerateInput(format!(
            "non-finite value {bad} in column"
        )));
    }
    let (lo, hi) = min_max(values);
    if lo == hi {
        return Err(MeasureError::ConstantColumn(None));
    }
    let range = hi - lo;
    Ok(match direction {
        Direction::Stimulant => values.iter().map(|&x| (x - lo) / range).collect(),
        Direction::Destimulant => values.iter().map(|&x| (hi - x) / range).collect(),
    })
}

/// Normalizes every column of a complete matrix independently.
pub fn normalize_matrix(matrix: &ObservationMatrix) -> Result<NormalizedMatrix, MeasureError> {
    let n = matrix.n_units();
    let mut values = vec![Vec::with_capacity(matrix.n_indicators()); n];
    for (j, spec) in matrix.indicators.iter().enumerate() {
        let column = matrix.column(j)?;
        let z = normalize_column(&column, spec.direction).map_err(|e| match e {
            MeasureError::ConstantColumn(_) => {
                MeasureError::ConstantColumn(Some(spec.code.clone()))
            }
            other => other,
        })?;
        for (row, v) in values.iter_mut().zip(z) {
            row.push(v);
        }
    }
    Ok(NormalizedMatrix {
        units: matrix.units.clone(),
        indicators: matrix.indicators.clone(),
        values,
    })
}

/// Indices of columns whose present values are all equal.
pub(crate) fn constant_columns(matrix: &ObservationMatrix) -> Vec<usize> {
    (0..matrix.n_indicators())
        .filter(|&j| {
            let col = matrix.present_column(j);
            let (lo, hi) = min_max(&col);
            !col.is_empty() && lo == hi
        })
        .collect()
}
