use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dps_lattice::Error),

    #[error(transparent)]
    Diagram(#[from] dps_lattice::DiagramError),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{what} would need about {needed_mb} MB, over the {cap_mb} MB cap")]
    MemoryCap {
        what: &'static str,
        needed_mb: u64,
        cap_mb: u64,
    },

    #[error("time cap of {secs} s exceeded after {stage}")]
    TimeCap { stage: &'static str, secs: u64 },

    #[error("genus {genus} lattice work needs --allow-large")]
    NeedsAllowLarge { genus: usize },

    #[error("report schema {found} is newer than supported {supported}")]
    SchemaTooNew { found: String, supported: &'static str },

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(dps_lattice::Error::ResourceLimit { .. }) => "cap",
            CliError::Core(dps_lattice::Error::InternalInvariant(_)) => "invariant",
            CliError::Core(_) => "computation",
            CliError::Diagram(_) => "input",
            CliError::Io(_) | CliError::Csv(_) => "io",
            CliError::Json(_) => "input",
            CliError::Usage(_) => "usage",
            CliError::MemoryCap { .. } | CliError::TimeCap { .. } | CliError::NeedsAllowLarge { .. } => "cap",
            CliError::SchemaTooNew { .. } => "schema",
            CliError::ThreadPool(_) => "runtime",
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            error: ErrorBody {
                kind: self.kind(),
                message: self.to_string(),
            },
        }
    }
}

/// What goes to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
