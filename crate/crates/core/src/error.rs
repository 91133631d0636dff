use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    /// Eq. for the geometric mean is undefined when a group has zero
    /// acceptors: the model assigns probability 0 only at infinite cost.
    #[error("group {index} ({label}): zero acceptors; acceptance probability 0 is unattainable at finite cost")]
    DegenerateGroup { index: usize, label: String },

    #[error("every group accepts fully; stated willingness to pay is unbounded")]
    InfiniteWtp,

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn insufficient(msg: impl Into<String>) -> Self {
        Error::InsufficientData(msg.into())
    }

    pub fn row(row: usize, msg: impl Into<String>) -> Self {
        Error::Row {
            row,
            message: msg.into(),
        }
    }

    /// Process exit code for the CLI: 3 for degenerate/insufficient fits,
    /// 2 for data and configuration errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InsufficientData(_) | Error::DegenerateDesign(_) => 3,
            _ => 2,
        }
    }
}
