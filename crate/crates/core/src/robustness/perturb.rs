//! Multiplicative noise trials.
//!
//! Every cell of trial `t` is multiplied by `1 + u`, with `u` uniform on
//! `[-noise, noise)`. The draw for cell `(row, col)` is fully determined by
//! `(seed, t, row, col)`:
//!
//! - generator: ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed with
//!   `seed_from_u64(seed)`, i.e. the 32-byte key expanded from `seed` by
//!   PCG32 (multiplier `6364136223846793005`, increment `11634580027462260723`);
//! - stream: `t`;
//! - word position: `2 * (row * n_indicators + col)`, one `u64` per cell;
//! - `unit = (next_u64 >> 11) * 2^-53`, `u = noise * (2 * unit - 1)`.
//!
//! Draws therefore do not depend on evaluation order or thread count.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::MeasureError;
use crate::measure::{run_pipeline, Settings};
use crate::model::{Group, ObservationMatrix};

/// `u` for one cell of one trial.
pub fn cell_noise(seed: u64, trial: u64, row: usize, col: usize, n_cols: usize, noise: f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng.set_word_pos(2 * (row as u128 * n_cols as u128 + col as u128));
    let unit = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    noise * (2.0 * unit - 1.0)
}

/// The matrix of trial `trial`, with every present cell scaled.
pub fn perturbed_matrix(
    matrix: &ObservationMatrix,
    noise: f64,
    seed: u64,
    trial: u64,
) -> ObservationMatrix {
    let m = matrix.n_indicators();
    let mut out = matrix.clone();
    for (i, row) in out.values.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if let Some(v) = cell {
                *v *= 1.0 + cell_noise(seed, trial, i, j, m, noise);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitFrequency {
    pub unit: String,
    pub baseline: Group,
    /// Trials per group, indexed I..IV.
    pub counts: [usize; 4],
    /// Successful trials in which the unit was dropped by the missing-data
    /// policy.
    pub absent: usize,
}

impl UnitFrequency {
    pub fn in_baseline_group(&self) -> usize {
        self.counts[self.baseline.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub noise: f64,
    pub trials: usize,
    pub seed: u64,
    pub failed_trials: usize,
    /// Rows in baseline unit order.
    pub units: Vec<UnitFrequency>,
}

pub fn perturb(
    matrix: &ObservationMatrix,
    relative_noise: f64,
    trials: usize,
    seed: u64,
    settings: &Settings,
) -> Result<PerturbationReport, MeasureError> {
    if !(relative_noise > 0.0 && relative_noise.is_finite()) {
        return Err(MeasureError::DegenerateInput(format!(
            "relative noise must be positive, got {relative_noise}"
        )));
    }
    if trials == 0 {
        return Err(MeasureError::DegenerateInput(
            "at least one trial is required".into(),
        ));
    }
    let baseline = run_pipeline(matrix, settings)?;
    let order: Vec<String> = matrix
        .units
        .iter()
        .filter(|u| baseline.group_of(u).is_some())
        .cloned()
        .collect();

    let outcomes = settings.execution.map_range(trials, |t| {
        let m = perturbed_matrix(matrix, relative_noise, seed, t as u64);
        run_pipeline(&m, settings).map(|r| {
            order
                .iter()
                .map(|u| r.group_of(u))
                .collect::<Vec<Option<Group>>>()
        })
    });

    let mut units: Vec<UnitFrequency> = order
        .iter()
        .map(|u| UnitFrequency {
            unit: u.clone(),
            baseline: baseline.group_of(u).expect("filtered above"),
            counts: [0; 4],
            absent: 0,
        })
        .collect();
    let mut failed_trials = 0;
    for outcome in outcomes {
        match outcome {
            Ok(groups) => {
                for (row, g) in units.iter_mut().zip(groups) {
                    match g {
                        Some(g) => row.counts[g.index()] += 1,
                        None => row.absent += 1,
                    }
                }
            }
            Err(_) => failed_trials += 1,
        }
    }
    Ok(PerturbationReport {
        noise: relative_noise,
        trials,
        seed,
        failed_trials,
        units,
    })
}
