//! Decoding of JSON-stat 2.0 dataset responses.
//!
//! A response lists its dimensions in `id` with sizes in `size`; each
//! dimension's `category.index` maps category codes to positions. Values are
//! stored row-major over those positions, either as a dense array (with
//! `null` for gaps) or as an object keyed by flat index. `status` has the same
//! layout and carries flag letters.

use std::collections::{BTreeSet, HashMap};

use serde_json::Value;

use super::tsv::RawObservation;
use crate::error::IngestError;

fn decode_err(code: &str, message: impl Into<String>) -> IngestError {
    IngestError::Decode {
        code: code.to_owned(),
        message: message.into(),
    }
}

/// `category.index` as a position → code table.
fn category_codes(code: &str, dim: &Value, size: usize) -> Result<Vec<String>, IngestError> {
    let index = dim
        .get("category")
        .and_then(|c| c.get("index"))
        .ok_or_else(|| decode_err(code, "dimension without category.index"))?;
    let mut out = vec![String::new(); size];
    match index {
        Value::Object(map) => {
            for (cat, pos) in map {
                let pos = pos
                    .as_u64()
                    .map(|p| p as usize)
                    .filter(|&p| p < size)
                    .ok_or_else(|| decode_err(code, format!("bad index for category `{cat}`")))?;
                out[pos] = cat.clone();
            }
        }
        Value::Array(list) => {
            for (pos, cat) in list.iter().enumerate().take(size) {
                out[pos] = cat
                    .as_str()
                    .ok_or_else(|| decode_err(code, "non-string category"))?
                    .to_owned();
            }
        }
        _ => {
            return Err(decode_err(
                code,
                "category.index must be an object or array",
            ))
        }
    }
    if out.iter().any(String::is_empty) {
        return Err(decode_err(
            code,
            "category.index does not cover the dimension",
        ));
    }
    Ok(out)
}

fn flat_lookup(container: Option<&Value>, k: usize) -> Option<&Value> {
    match container? {
        Value::Array(a) => a.get(k),
        Value::Object(o) => o.get(&k.to_string()),
        _ => None,
    }
}

fn parse_flags(code: &str, v: Option<&Value>) -> Result<BTreeSet<char>, IngestError> {
    match v {
        None | Some(Value::Null) => Ok(BTreeSet::new()),
        Some(Value::String(s)) => s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ':')
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(c)
                } else {
                    Err(decode_err(code, format!("invalid status flag `{c}`")))
                }
            })
            .collect(),
        Some(other) => Err(decode_err(code, format!("unexpected status {other}"))),
    }
}

/// Decodes a dataset body into observations.
///
/// Dimensions other than `geo` and `time` must have exactly one category.
pub fn decode_jsonstat(
    body: &[u8],
    dataset_code: &str,
) -> Result<Vec<RawObservation>, IngestError> {
    let code = dataset_code;
    let root: Value = serde_json::from_slice(body).map_err(|e| decode_err(code, e.to_string()))?;
    let ids: Vec<&str> = root
        .get("id")
        .and_then(Value::as_array)
        .ok_or_else(|| decode_err(code, "missing `id`"))?
        .iter()
        .map(|v| v.as_str().ok_or_else(|| decode_err(code, "non-string id")))
        .collect::<Result<_, _>>()?;
    let sizes: Vec<usize> = root
        .get("size")
        .and_then(Value::as_array)
        .ok_or_else(|| decode_err(code, "missing `size`"))?
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|s| s as usize)
                .ok_or_else(|| decode_err(code, "non-integer size"))
        })
        .collect::<Result<_, _>>()?;
    if ids.len() != sizes.len() {
        return Err(decode_err(code, "`id` and `size` differ in length"));
    }
    let dims = root
        .get("dimension")
        .and_then(Value::as_object)
        .ok_or_else(|| decode_err(code, "missing `dimension`"))?;

    let mut geo_axis = None;
    let mut time_axis = None;
    let mut categories = Vec::with_capacity(ids.len());
    for (axis, (&id, &size)) in ids.iter().zip(&sizes).enumerate() {
        let dim = dims
            .get(id)
            .ok_or_else(|| decode_err(code, format!("dimension `{id}` not described")))?;
        categories.push(category_codes(code, dim, size)?);
        match id {
            "geo" => geo_axis = Some(axis),
            "time" | "TIME_PERIOD" => time_axis = Some(axis),
            other if size != 1 => {
                return Err(decode_err(
                    code,
                    format!("dimension `{other}` has {size} categories, expected 1"),
                ))
            }
            _ => {}
        }
    }
    let geo_axis = geo_axis.ok_or_else(|| decode_err(code, "no `geo` dimension"))?;
    let time_axis = time_axis.ok_or_else(|| decode_err(code, "no `time` dimension"))?;

    let years: Vec<i32> = categories[time_axis]
        .iter()
        .map(|t| {
            t.parse()
                .map_err(|_| decode_err(code, format!("time category `{t}` is not a year")))
        })
        .collect::<Result<_, _>>()?;

    let mut strides = vec![1usize; sizes.len()];
    for k in (0..sizes.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * sizes[k + 1];
    }
    let total: usize = sizes.iter().product();

    let values = root.get("value");
    match values {
        Some(Value::Array(a)) if a.len() == total => {}
        Some(Value::Array(a)) => {
            return Err(decode_err(
                code,
                format!("value array has {} entries, expected {total}", a.len()),
            ))
        }
        Some(Value::Object(_)) => {}
        _ => return Err(decode_err(code, "missing `value`")),
    }
    let status = root.get("status");

    let mut out = Vec::with_capacity(sizes[geo_axis] * sizes[time_axis]);
    for (g, geo) in categories[geo_axis].iter().enumerate() {
        for (t, &year) in years.iter().enumerate() {
            let k = g * strides[geo_axis] + t * strides[time_axis];
            let value = match flat_lookup(values, k) {
                None | Some(Value::Null) => None,
                Some(v) => Some(
                    v.as_f64()
                        .ok_or_else(|| decode_err(code, format!("non-numeric value {v}")))?,
                ),
            };
            out.push(RawObservation {
                dataset_code: code.to_owned(),
                geo: geo.clone(),
                year,
                value,
                flags: parse_flags(code, flat_lookup(status, k))?,
            });
        }
    }
    Ok(out)
}

/// Builds a minimal dense JSON-stat body for one dataset and year.
pub fn encode_jsonstat(dataset_code: &str, year: i32, observations: &[RawObservation]) -> String {
    let geo_index: HashMap<&str, usize> = observations
        .iter()
        .enumerate()
        .map(|(i, o)| (o.geo.as_str(), i))
        .collect();
    let values: Vec<Value> = observations
        .iter()
        .map(|o| o.value.map_or(Value::Null, Value::from))
        .collect();
    let status: serde_json::Map<String, Value> = observations
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.flags.is_empty())
        .map(|(i, o)| {
            (
                i.to_string(),
                Value::from(o.flags.iter().collect::<String>()),
            )
        })
        .collect();
    serde_json::json!({
        "version": "2.0",
        "class": "dataset",
        "label": dataset_code,
        "id": ["freq", "geo", "time"],
        "size": [1, observations.len(), 1],
        "dimension": {
            "freq": {"category": {"index": {"A": 0}}},
            "geo": {"category": {"index": geo_index}},
            "time": {"category": {"index": {year.to_string(): 0}}},
        },
        "value": values,
        "status": status,
    })
    .to_string()
}
