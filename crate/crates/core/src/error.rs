use thiserror::Error;

/// A (unit, indicator) coordinate, by identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub unit: String,
    pub indicator: String,
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.unit, self.indicator)
    }
}

fn join_cells(cells: &[Cell]) -> String {
    cells
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Errors raised by the numeric core and the domain model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("missing data at {}", join_cells(.0))]
    MissingData(Vec<Cell>),
    #[error("degenerate matrix: {0}")]
    DegenerateMatrix(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("constant column{}", .0.as_deref().map(|c| format!(" `{c}`")).unwrap_or_default())]
    ConstantColumn(Option<String>),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<MeasureError>,
    },
}

impl MeasureError {
    pub(crate) fn at(self, stage: &'static str) -> Self {
        MeasureError::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, with stage annotations stripped.
    pub fn root(&self) -> &MeasureError {
        match self {
            MeasureError::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

/// Errors raised while acquiring indicator data.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("format error at line {line}{}: {message}", .column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Format {
        line: usize,
        column: Option<usize>,
        message: String,
    },
    #[error("no rows matched the selection for dataset `{0}`")]
    EmptySelection(String),
    #[error("network error fetching `{code}`: {message}")]
    Network { code: String, message: String },
    #[error("upstream returned status {status} for `{code}`")]
    Upstream { code: String, status: u16 },
    #[error("could not decode response for `{code}`: {message}")]
    Decode { code: String, message: String },
    #[error("dataset `{0}` yielded no observations")]
    MissingDataset(String),
    #[error("cache i/o error: {0}")]
    Cache(#[from] std::io::Error),
    #[error(transparent)]
    Model(#[from] MeasureError),
}

impl IngestError {
    pub(crate) fn format(line: usize, column: Option<usize>, message: impl Into<String>) -> Self {
        IngestError::Format {
            line,
            column,
            message: message.into(),
        }
    }
}
