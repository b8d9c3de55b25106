//! Four-group classification by distance of `w` from its cross-unit mean.
//!
//! | group | condition            |
//! |-------|----------------------|
//! | I     | w >= mean + sd       |
//! | II    | mean + sd > w >= mean|
//! | III   | mean > w >= mean - sd|
//! | IV    | w < mean - sd        |
//!
//! `w == mean` (with `sd > 0`) satisfies the printed bounds of both II and
//! III; [`TiePolicy`] decides which one wins.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::stats::{mean, std_dev};
use crate::error::MeasureError;
use crate::model::{Classification, Group, UnitScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// `w == mean` goes to group II.
    #[default]
    HigherGroup,
    /// `w == mean` goes to group III.
    LowerGroup,
}

/// Group of a single value given the thresholds. Comparisons are exact.
pub fn group_for(w: f64, mean_w: f64, sd_w: f64, tie: TiePolicy) -> Group {
    if w >= mean_w + sd_w {
        Group::I
    } else if w > mean_w {
        Group::II
    } else if w == mean_w {
        match tie {
            TiePolicy::HigherGroup => Group::II,
            TiePolicy::LowerGroup => Group::III,
        }
    } else if w >= mean_w - sd_w {
        Group::III
    } else {
        Group::IV
    }
}

pub fn classify(scores: &[UnitScore], tie: TiePolicy) -> Result<Classification, MeasureError> {
    if scores.len() < 2 {
        return Err(MeasureError::DegenerateInput(format!(
            "classification needs at least 2 scores, got {}",
            scores.len()
        )));
    }
    let ws: Vec<f64> = scores.iter().map(|s| s.w).collect();
    let mean_w = mean(&ws)?;
    let sd_w = std_dev(&ws)?;
    let mut assignments = BTreeMap::new();
    for s in scores {
        if assignments
            .insert(s.unit.clone(), group_for(s.w, mean_w, sd_w, tie))
            .is_some()
        {
            return Err(MeasureError::InvalidMatrix(format!(
                "unit `{}` scored twice",
                s.unit
            )));
        }
    }
    Ok(Classification {
        mean_w,
        sd_w,
        assignments,
    })
}
