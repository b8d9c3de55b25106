use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::measure::AnalysisResult;
use crate::model::Group;
use crate::robustness::{PerturbationReport, SensitivityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Md,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" => Ok(Format::Md),
            other => Err(format!(
                "unknown format `{other}` (expected json, csv or md)"
            )),
        }
    }
}

/// Formats `x` with 6 significant digits, trailing zeros removed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let s = if (-5..=9).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    };
    if s.contains('.') && !s.contains('e') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".into()
        } else {
            t.to_owned()
        }
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisRow {
    pub geo: String,
    pub median: f64,
    pub std_dev: f64,
    pub w: f64,
    pub rank: usize,
    pub group: Group,
}

pub fn analysis_rows(result: &AnalysisResult) -> Vec<AnalysisRow> {
    result
        .scores
        .iter()
        .enumerate()
        .map(|(k, s)| AnalysisRow {
            geo: s.unit.clone(),
            median: s.median,
            std_dev: s.std_dev,
            w: s.w,
            rank: k + 1,
            group: result
                .group_of(&s.unit)
                .expect("every scored unit is classified"),
        })
        .collect()
}

#[derive(Serialize)]
struct Thresholds {
    upper: f64,
    mean: f64,
    lower: f64,
}

#[derive(Serialize)]
struct AnalysisDoc<'a> {
    indicators: Vec<&'a str>,
    effective_indicators: usize,
    mean_w: f64,
    sd_w: f64,
    thresholds: Thresholds,
    dropped_units: &'a [String],
    dropped_indicators: &'a [String],
    units: Vec<AnalysisRow>,
}

fn thresholds(result: &AnalysisResult) -> Thresholds {
    let c = &result.classification;
    Thresholds {
        upper: c.mean_w + c.sd_w,
        mean: c.mean_w,
        lower: c.mean_w - c.sd_w,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn emit_analysis(result: &AnalysisResult, format: Format) -> String {
    let rows = analysis_rows(result);
    match format {
        Format::Json => to_json(&AnalysisDoc {
            indicators: result
                .normalized
                .indicators
                .iter()
                .map(|s| s.code.as_str())
                .collect(),
            effective_indicators: result.effective_indicators,
            mean_w: result.classification.mean_w,
            sd_w: result.classification.sd_w,
            thresholds: thresholds(result),
            dropped_units: &result.dropped_units,
            dropped_indicators: &result.dropped_indicators,
            units: rows,
        }),
        Format::Csv => {
            let mut out = String::from("geo,median,std_dev,w,rank,group\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.geo,
                    sig6(r.median),
                    sig6(r.std_dev),
                    sig6(r.w),
                    r.rank,
                    r.group
                );
            }
            out
        }
        Format::Md => {
            let t = thresholds(result);
            let mut out = String::new();
            let _ = writeln!(
                out,
                "Indicators: {} | mean w: {} | sd w: {} | thresholds: {} / {} / {}\n",
                result.effective_indicators,
                sig6(t.mean),
                sig6(result.classification.sd_w),
                sig6(t.upper),
                sig6(t.mean),
                sig6(t.lower)
            );
            out.push_str("| rank | geo | median | std_dev | w | group |\n");
            out.push_str("|---:|:---|---:|---:|---:|:---:|\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.rank,
                    r.geo,
                    sig6(r.median),
                    sig6(r.std_dev),
                    sig6(r.w),
                    r.group
                );
            }
            if !result.dropped_units.is_empty() || !result.dropped_indicators.is_empty() {
                let _ = writeln!(
                    out,
                    "\nDropped units: {:?}; dropped indicators: {:?}",
                    result.dropped_units, result.dropped_indicators
                );
            }
            out
        }
    }
}

#[derive(Serialize)]
struct LooRow<'a> {
    label: &'a str,
    effective_indicators: usize,
    rank_correlation: f64,
    group_changes: usize,
    ranking: Vec<String>,
}

pub fn emit_loo(report: &SensitivityReport, format: Format) -> String {
    let rows: Vec<LooRow> = report
        .variants
        .iter()
        .map(|v| LooRow {
            label: &v.label,
            effective_indicators: v.result.effective_indicators,
            rank_correlation: v.rank_correlation,
            group_changes: v.group_changes,
            ranking: v.result.ranking(),
        })
        .collect();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                baseline_ranking: Vec<String>,
                variants: Vec<LooRow<'a>>,
            }
            to_json(&Doc {
                baseline_ranking: report.baseline.ranking(),
                variants: rows,
            })
        }
        Format::Csv => {
            let mut out = String::from("variant,indicators,rank_correlation,group_changes\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.label,
                    r.effective_indicators,
                    sig6(r.rank_correlation),
                    r.group_changes
                );
            }
            out
        }
        Format::Md => {
            let mut out = String::from(
                "| variant | indicators | rank correlation | group changes |\n|:---|---:|---:|---:|\n",
            );
            for r in rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} |",
                    r.label,
                    r.effective_indicators,
                    sig6(r.rank_correlation),
                    r.group_changes
                );
            }
            out
        }
    }
}

pub fn emit_perturbation(report: &PerturbationReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv | Format::Md => {
            let md = format == Format::Md;
            let mut out = String::new();
            if md {
                let _ = writeln!(
                    out,
                    "Noise: {} | trials: {} | seed: {} | failed trials: {}\n",
                    sig6(report.noise),
                    report.trials,
                    report.seed,
                    report.failed_trials
                );
                out.push_str("| geo | baseline | I | II | III | IV | absent |\n");
                out.push_str("|:---|:---:|---:|---:|---:|---:|---:|\n");
            } else {
                out.push_str("geo,baseline,I,II,III,IV,absent\n");
            }
            for u in &report.units {
                let cells = [
                    u.unit.clone(),
                    u.baseline.to_string(),
                    u.counts[0].to_string(),
                    u.counts[1].to_string(),
                    u.counts[2].to_string(),
                    u.counts[3].to_string(),
                    u.absent.to_string(),
                ];
                if md {
                    let _ = writeln!(out, "| {} |", cells.join(" | "));
                } else {
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            out
        }
    }
}
