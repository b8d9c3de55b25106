use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::api::{fetch_dataset, ApiSource, Transport};
use super::fixture::parse_fixture_csv;
use super::tsv::{parse_eurostat_tsv, RawObservation};
use crate::error::IngestError;
use crate::exec::Execution;
use crate::model::{IndicatorSpec, ObservationMatrix};

/// Where indicator values come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    /// A fixture CSV holding every indicator.
    FixtureCsv {
        path: PathBuf,
    },
    /// One bulk-download TSV per dataset code.
    EurostatTsv {
        paths: BTreeMap<String, PathBuf>,
    },
    EurostatApi(ApiSource),
}

fn read(path: &PathBuf) -> Result<Vec<u8>, IngestError> {
    std::fs::read(path).map_err(|e| {
        IngestError::Cache(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn observations_for(
    spec: &IndicatorSpec,
    year: i32,
    geos: &[String],
    source: &DataSource,
    transport: &dyn Transport,
) -> Result<Vec<RawObservation>, IngestError> {
    match source {
        DataSource::FixtureCsv { .. } => unreachable!("fixture handled by assemble_matrix"),
        DataSource::EurostatTsv { paths } => {
            let path = paths
                .get(&spec.code)
                .ok_or_else(|| IngestError::MissingDataset(spec.code.clone()))?;
            let filter: HashSet<String> = geos.iter().cloned().collect();
            match parse_eurostat_tsv(&read(path)?, &spec.code, year, Some(&filter)) {
                Err(IngestError::EmptySelection(code)) => Err(IngestError::MissingDataset(code)),
                other => other,
            }
        }
        DataSource::EurostatApi(api) => fetch_dataset(api, transport, &spec.code, year, geos),
    }
}

/// Builds a `|geos| x |specs|` matrix. Geos without an observation become
/// missing cells.
pub fn assemble_matrix(
    specs: &[IndicatorSpec],
    year: i32,
    geos: &[String],
    source: &DataSource,
    transport: &dyn Transport,
) -> Result<ObservationMatrix, IngestError> {
    if specs.is_empty() || geos.is_empty() {
        return Err(IngestError::Model(crate::MeasureError::DegenerateInput(
            "assembly needs at least one indicator and one geo".into(),
        )));
    }

    let columns: Vec<HashMap<String, Option<f64>>> = match source {
        DataSource::FixtureCsv { path } => {
            let table = parse_fixture_csv(&read(path)?, year, specs)?;
            specs
                .iter()
                .map(|spec| {
                    let j = table
                        .indicators
                        .iter()
                        .position(|s| s.code == spec.code)
                        .ok_or_else(|| IngestError::MissingDataset(spec.code.clone()))?;
                    Ok(table
                        .units
                        .iter()
                        .zip(&table.values)
                        .map(|(u, row)| (u.clone(), row[j]))
                        .collect())
                })
                .collect::<Result<_, IngestError>>()?
        }
        _ => Execution::Parallel
            .map_range(specs.len(), |j| {
                observations_for(&specs[j], year, geos, source, transport)
            })
            .into_iter()
            .zip(specs)
            .map(|(obs, spec)| {
                let obs = obs?;
                let column: HashMap<String, Option<f64>> = obs
                    .into_iter()
                    .filter(|o| o.year == year)
                    .map(|o| (o.geo, o.value))
                    .collect();
                if column.is_empty() {
                    return Err(IngestError::MissingDataset(spec.code.clone()));
                }
                Ok(column)
            })
            .collect::<Result<_, _>>()?,
    };

    let values = geos
        .iter()
        .map(|g| {
            columns
                .iter()
                .map(|c| c.get(g).copied().flatten())
                .collect()
        })
        .collect();
    let indicators = specs.to_vec();
    Ok(ObservationMatrix::new(
        geos.to_vec(),
        indicators,
        values,
        year,
    ))
}
