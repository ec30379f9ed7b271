use std::path::PathBuf;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("sweep needs {runs} runs, above the budget of {budget}")]
    Budget { runs: usize, budget: usize },

    #[error("simulation failed: {0}")]
    Simulation(#[from] sotea_core::Error),

    #[error("{0} oracle check(s) failed")]
    VerifyFailed(usize),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::InvalidSpec(_) => 2,
            HarnessError::Io { .. } => 3,
            HarnessError::Budget { .. } => 4,
            HarnessError::Simulation(_) => 5,
            HarnessError::VerifyFailed(_) => 1,
        }
    }
}
