//! Run configuration, stored as TOML.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use gcmeasure::ingest::{ApiSource, DataSource, DEFAULT_BASE_URL};
use gcmeasure::measure::{ConstantColumnPolicy, Settings, TiePolicy};
use gcmeasure::{Direction, IndicatorSpec, MissingPolicy};
use serde::Deserialize;

/// Environment variable overriding the statistics API base URL.
pub const API_BASE_ENV: &str = "GCMEASURE_API_BASE";

pub const DEFAULT_CONFIG: &str = include_str!("../../../config/default.toml");

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndicatorEntry {
    pub code: String,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    FixtureCsv {
        path: PathBuf,
    },
    EurostatTsv {
        paths: BTreeMap<String, PathBuf>,
    },
    EurostatApi {
        #[serde(default)]
        base_url: Option<String>,
        #[serde(default)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub year: i32,
    pub geos: Vec<String>,
    pub indicators: Vec<IndicatorEntry>,
    #[serde(default)]
    pub missing_policy: MissingPolicy,
    #[serde(default)]
    pub tie_policy: TiePolicy,
    #[serde(default)]
    pub constant_column_policy: ConstantColumnPolicy,
    pub source: SourceConfig,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, String> {
        let mut config: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        config.base_dir = base_dir.into();
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        RunConfig::parse(&text, dir).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// The shipped configuration, with paths relative to the working directory.
    pub fn shipped() -> Self {
        RunConfig::parse(DEFAULT_CONFIG, PathBuf::new()).expect("shipped config is valid")
    }

    fn check(&self) -> Result<(), String> {
        if self.year <= 1900 {
            return Err(format!("year {} is out of range", self.year));
        }
        if self.geos.is_empty() {
            return Err("`geos` is empty".into());
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.geos.iter().find(|g| !seen.insert(g.as_str())) {
            return Err(format!("geo `{dup}` listed twice"));
        }
        if self.indicators.is_empty() {
            return Err("`indicators` is empty".into());
        }
        let mut seen = HashSet::new();
        for ind in &self.indicators {
            if ind.code.trim().is_empty() {
                return Err("indicator with empty code".into());
            }
            if !seen.insert(ind.code.as_str()) {
                return Err(format!("indicator `{}` listed twice", ind.code));
            }
        }
        Ok(())
    }

    pub fn specs(&self) -> Vec<IndicatorSpec> {
        self.indicators
            .iter()
            .enumerate()
            .map(|(j, ind)| {
                let spec = IndicatorSpec::new(ind.code.clone(), j + 1, ind.direction);
                match &ind.label {
                    Some(l) => spec.with_label(l.clone()),
                    None => spec,
                }
            })
            .collect()
    }

    pub fn settings(&self) -> Settings {
        Settings {
            missing: self.missing_policy,
            tie: self.tie_policy,
            constant_column: self.constant_column_policy,
            ..Settings::default()
        }
    }

    pub fn resolve_path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// The configured source with paths resolved. Setting the API base URL in
    /// both the config and the environment is an error.
    pub fn source(&self, api_base_env: Option<&str>) -> Result<DataSource, String> {
        Ok(match &self.source {
            SourceConfig::FixtureCsv { path } => DataSource::FixtureCsv {
                path: self.resolve_path(path),
            },
            SourceConfig::EurostatTsv { paths } => DataSource::EurostatTsv {
                paths: paths
                    .iter()
                    .map(|(k, p)| (k.clone(), self.resolve_path(p)))
                    .collect(),
            },
            SourceConfig::EurostatApi {
                base_url,
                cache_dir,
            } => {
                let base = match (base_url.as_deref(), api_base_env) {
                    (Some(_), Some(_)) => {
                        return Err(format!(
                            "API base URL set both in config (`source.base_url`) and in {API_BASE_ENV}; remove one"
                        ))
                    }
                    (Some(b), None) | (None, Some(b)) => b.to_owned(),
                    (None, None) => DEFAULT_BASE_URL.to_owned(),
                };
                let cache = cache_dir.as_deref().map(|c| self.resolve_path(c));
                DataSource::EurostatApi(ApiSource::new(base, cache).map_err(|e| e.to_string())?)
            }
        })
    }
}
