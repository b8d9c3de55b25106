//! The fixture CSV: header `geo,<code>,<code>...`, one row per geo, empty
//! cell for a missing value.

use std::collections::HashSet;

use crate::error::IngestError;
use crate::model::{Direction, IndicatorSpec, ObservationMatrix};

fn parse_cell(raw: &str, line: usize, column: usize) -> Result<Option<f64>, IngestError> {
    let t = raw.trim();
    if t.is_empty() {
        return Ok(None);
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(IngestError::format(
            line,
            Some(column),
            format!("`{t}` is not a number"),
        )),
    }
}

/// Parses fixture CSV bytes.
///
/// Directions and labels are taken from `known` by code; codes absent there
/// default to stimulants labelled by their code.
pub fn parse_fixture_csv(
    bytes: &[u8],
    year: i32,
    known: &[IndicatorSpec],
) -> Result<ObservationMatrix, IngestError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| IngestError::format(1, None, format!("invalid UTF-8: {e}")))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| IngestError::format(1, None, e.to_string()))?,
        None => return Err(IngestError::format(1, None, "empty input")),
    };
    if header.get(0).map(str::trim) != Some("geo") {
        return Err(IngestError::format(
            1,
            Some(1),
            "first header cell must be `geo`",
        ));
    }
    let mut indicators = Vec::new();
    let mut seen = HashSet::new();
    for (j, code) in header.iter().enumerate().skip(1) {
        let code = code.trim();
        if code.is_empty() {
            return Err(IngestError::format(1, Some(j + 1), "empty indicator code"));
        }
        if !seen.insert(code.to_owned()) {
            return Err(IngestError::format(
                1,
                Some(j + 1),
                format!("duplicate indicator `{code}`"),
            ));
        }
        let spec = known
            .iter()
            .find(|s| s.code == code)
            .cloned()
            .map(|mut s| {
                s.symbol_index = j;
                s
            })
            .unwrap_or_else(|| IndicatorSpec::new(code, j, Direction::Stimulant));
        indicators.push(spec);
    }

    let width = header.len();
    let mut units = Vec::new();
    let mut values = Vec::new();
    let mut geos = HashSet::new();
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            IngestError::format(line, None, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() == 1 && record.get(0).is_some_and(|c| c.trim().is_empty()) {
            continue;
        }
        if record.len() != width {
            return Err(IngestError::format(
                line,
                None,
                format!("expected {width} cells, found {}", record.len()),
            ));
        }
        let geo = record[0].trim();
        if geo.is_empty() {
            return Err(IngestError::format(line, Some(1), "empty geo code"));
        }
        if !geos.insert(geo.to_owned()) {
            return Err(IngestError::format(
                line,
                Some(1),
                format!("duplicate geo `{geo}`"),
            ));
        }
        let row = record
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| parse_cell(c, line, j + 1))
            .collect::<Result<Vec<_>, _>>()?;
        units.push(geo.to_owned());
        values.push(row);
    }

    Ok(ObservationMatrix::new(units, indicators, values, year))
}

/// Writes a matrix in fixture CSV form. Values use the shortest decimal
/// representation that round-trips.
pub fn serialize_fixture_csv(matrix: &ObservationMatrix) -> String {
    let mut out = String::from("geo");
    for spec in &matrix.indicators {
        out.push(',');
        out.push_str(&spec.code);
    }
    out.push('\n');
    for (unit, row) in matrix.units.iter().zip(&matrix.values) {
        out.push_str(unit);
        for v in row {
            out.push(',');
            if let Some(v) = v {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}
