use std::collections::{HashMap, HashSet};

use crate::error::MeasureError;

fn check_unique(list: &[String], name: &str) -> Result<(), MeasureError> {
    let mut seen = HashSet::with_capacity(list.len());
    for id in list {
        if !seen.insert(id.as_str()) {
            return Err(MeasureError::DegenerateInput(format!(
                "`{id}` appears twice in {name}"
            )));
        }
    }
    Ok(())
}

/// Spearman's rho between two rankings (best first), computed over the units
/// present in both. Each list is re-ranked 1..k after dropping the units the
/// other lacks.
pub fn rank_correlation(ranks_a: &[String], ranks_b: &[String]) -> Result<f64, MeasureError> {
    check_unique(ranks_a, "first ranking")?;
    check_unique(ranks_b, "second ranking")?;
    let in_b: HashSet<&str> = ranks_b.iter().map(String::as_str).collect();
    let common_a: Vec<&str> = ranks_a
        .iter()
        .map(String::as_str)
        .filter(|u| in_b.contains(u))
        .collect();
    let k = common_a.len();
    if k < 2 {
        return Err(MeasureError::DegenerateInput(format!(
            "rank correlation needs 2 common units, found {k}"
        )));
    }
    let in_a: HashSet<&str> = common_a.iter().copied().collect();
    let pos_b: HashMap<&str, usize> = ranks_b
        .iter()
        .map(String::as_str)
        .filter(|u| in_a.contains(u))
        .enumerate()
        .map(|(r, u)| (u, r))
        .collect();
    let d2: f64 = common_a
        .iter()
        .enumerate()
        .map(|(ra, u)| {
            let d = ra as f64 - pos_b[u] as f64;
            d * d
        })
        .sum();
    let k = k as f64;
    Ok(1.0 - 6.0 * d2 / (k * (k * k - 1.0)))
}
