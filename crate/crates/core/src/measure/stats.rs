//! Per-unit median, population standard deviation and the aggregate measure.

use crate::error::MeasureError;
use crate::model::UnitScore;

fn non_empty(values: &[f64], what: &str) -> Result<(), MeasureError> {
    if values.is_empty() {
        Err(MeasureError::DegenerateInput(format!(
            "{what} of an empty list"
        )))
    } else {
        Ok(())
    }
}

/// Middle order statistic for odd lengths, mean of the two middle order
/// statistics for even lengths.
pub fn median(values: &[f64]) -> Result<f64, MeasureError> {
    non_empty(values, "median")?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    Ok(if m % 2 == 1 {
        sorted[m / 2]
    } else {
        (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
    })
}

/// Arithmetic mean, accumulated as offsets from the first element so that a
/// constant list returns its value exactly.
pub fn mean(values: &[f64]) -> Result<f64, MeasureError> {
    non_empty(values, "mean")?;
    let pivot = values[0];
    let offset: f64 = values.iter().map(|v| v - pivot).sum();
    Ok(pivot + offset / values.len() as f64)
}

/// Population standard deviation (divisor `m`).
pub fn std_dev(values: &[f64]) -> Result<f64, MeasureError> {
    let mu = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - mu) * (v - mu)).sum();
    Ok((ss / values.len() as f64).sqrt())
}

/// Median, standard deviation and `w = median * (1 - std_dev)` of one
/// normalized row.
pub fn unit_score(unit: &str, row: &[f64]) -> Result<UnitScore, MeasureError> {
    let median = median(row)?;
    let std_dev = std_dev(row)?;
    Ok(UnitScore {
        unit: unit.to_owned(),
        median,
        std_dev,
        w: median * (1.0 - std_dev),
    })
}
