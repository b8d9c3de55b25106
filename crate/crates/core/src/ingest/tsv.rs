//! Eurostat bulk-download TSV.
//!
//! ```text
//! unit,indic_is,geo\time<TAB>2019 <TAB>2018
//! PC_ENT,E_AESELL,FI<TAB>52 <TAB>48
//! PC_ENT,E_AESELL,RO<TAB>11 e<TAB>:
//! ```
//!
//! The first field of each line is a comma-separated list of dimension
//! values, geo last. Value cells hold a number optionally followed by flag
//! letters; `:` marks a missing value.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::IngestError;

/// One value as published, with its flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawObservation {
    pub dataset_code: String,
    pub geo: String,
    pub year: i32,
    pub value: Option<f64>,
    /// Eurostat flag letters, e.g. `e` estimated, `p` provisional, `b` break.
    pub flags: BTreeSet<char>,
}

/// Splits a value cell into its numeric value and flag letters.
pub(crate) fn parse_value_cell(cell: &str) -> Result<(Option<f64>, BTreeSet<char>), String> {
    let mut tokens = cell.split_whitespace();
    let Some(first) = tokens.next() else {
        return Ok((None, BTreeSet::new()));
    };
    let (value, inline_flags) = if let Some(rest) = first.strip_prefix(':') {
        (None, rest)
    } else {
        let split = first
            .find(|c: char| c.is_ascii_alphabetic())
            .unwrap_or(first.len());
        let (num, rest) = first.split_at(split);
        let v: f64 = num
            .parse()
            .map_err(|_| format!("`{first}` is not a number"))?;
        if !v.is_finite() {
            return Err(format!("`{first}` is not a finite number"));
        }
        (Some(v), rest)
    };
    let mut flags = BTreeSet::new();
    for c in inline_flags.chars().chain(tokens.flat_map(str::chars)) {
        if !c.is_ascii_lowercase() {
            return Err(format!("invalid flag `{c}` in `{cell}`"));
        }
        flags.insert(c);
    }
    Ok((value, flags))
}

fn is_geo_time(dim: &str) -> bool {
    let d = dim.trim();
    d.eq_ignore_ascii_case("geo\\time") || d.eq_ignore_ascii_case("geo\\time_period")
}

/// Extracts one year of a dataset, optionally restricted to `geo_filter`.
pub fn parse_eurostat_tsv(
    bytes: &[u8],
    dataset_code: &str,
    year: i32,
    geo_filter: Option<&HashSet<String>>,
) -> Result<Vec<RawObservation>, IngestError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| IngestError::format(1, None, format!("invalid UTF-8: {e}")))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or_else(|| IngestError::format(1, None, "empty input"))?;
    let mut fields = header.split('\t');
    let dims: Vec<&str> = fields.next().unwrap_or("").split(',').collect();
    if !dims.last().is_some_and(|d| is_geo_time(d)) {
        return Err(IngestError::format(
            1,
            Some(1),
            "header must start with a dimension list ending in `geo\\time`",
        ));
    }
    let mut year_col = None;
    let mut n_years = 0;
    for (k, label) in fields.enumerate() {
        let y: i32 = label.trim().parse().map_err(|_| {
            IngestError::format(1, Some(k + 2), format!("`{}` is not a year", label.trim()))
        })?;
        if y == year {
            year_col = Some(k);
        }
        n_years += 1;
    }
    if n_years == 0 {
        return Err(IngestError::format(1, None, "header has no time columns"));
    }

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut cells = line.split('\t');
        let key = cells.next().unwrap_or("");
        let key_dims: Vec<&str> = key.split(',').collect();
        if key_dims.len() != dims.len() {
            return Err(IngestError::format(
                line_no,
                Some(1),
                format!(
                    "expected {} dimensions, found {}",
                    dims.len(),
                    key_dims.len()
                ),
            ));
        }
        let values: Vec<&str> = cells.collect();
        if values.len() != n_years {
            return Err(IngestError::format(
                line_no,
                None,
                format!("expected {n_years} value cells, found {}", values.len()),
            ));
        }
        let geo = key_dims[key_dims.len() - 1].trim();
        if geo_filter.is_some_and(|f| !f.contains(geo)) {
            continue;
        }
        let Some(col) = year_col else { continue };
        let (value, flags) = parse_value_cell(values[col])
            .map_err(|m| IngestError::format(line_no, Some(col + 2), m))?;
        if !seen.insert(geo.to_owned()) {
            return Err(IngestError::format(
                line_no,
                Some(1),
                format!("geo `{geo}` appears more than once"),
            ));
        }
        out.push(RawObservation {
            dataset_code: dataset_code.to_owned(),
            geo: geo.to_owned(),
            year,
            value,
            flags,
        });
    }
    if out.is_empty() {
        return Err(IngestError::EmptySelection(dataset_code.to_owned()));
    }
    Ok(out)
}
