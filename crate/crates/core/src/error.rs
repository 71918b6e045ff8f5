use thiserror::Error;

/// Errors raised by measure construction and the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("partition at depth {depth} (base {base}) has more than {budget} nonzero cells")]
    CellBudget { base: u32, depth: u32, budget: usize },

    #[error("matrix size {size} exceeds the configured cap of {cap}")]
    MatrixTooLarge { size: usize, cap: usize },

    #[error("operation requires a purely continuous measure, but this one has atoms")]
    AtomicComponent,

    #[error("grid of {grid} points is too small: need a power of two of at least {required}")]
    InsufficientGrid { grid: usize, required: usize },

    #[error("label window captures {captured:.6} of the mass, need more than {required:.6}")]
    WindowTooSmall { captured: f64, required: f64 },

    #[error("series of length {length} is too short for lag {maxlag} (need maxlag < length/4)")]
    InsufficientLength { length: usize, maxlag: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("measure spec: {0}")]
    Spec(String),

    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Resource errors (cell budget, matrix cap) are distinguished from input errors by the CLI.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::CellBudget { .. } | Error::MatrixTooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
