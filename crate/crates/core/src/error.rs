use thiserror::Error;

/// Errors for grid construction and norm/operator evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be 1 or 2, got {0}")]
    BadDimension(u8),

    #[error("half-width must be finite and positive, got {0}")]
    BadHalfWidth(f64),

    #[error("cells-per-axis must be even and >= 2, got {0}")]
    BadCellCount(usize),

    #[error("value count {got} does not match grid cell count {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("non-finite value at cell {idx}: {value}")]
    NonFinite { idx: usize, value: f64 },

    #[error("weight must be strictly positive, cell {idx} holds {value}")]
    NonPositiveWeight { idx: usize, value: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("cell index {idx} out of range for grid with {cells} cells")]
    IndexOutOfRange { idx: usize, cells: usize },

    #[error("exponent p must satisfy {bound}, got {got}")]
    BadExponent { bound: &'static str, got: f64 },

    #[error("{0}")]
    InvalidParameter(String),

    #[error("operation requires a one-dimensional grid")]
    RequiresOneDim,

    #[error("csv parse error at line {line}: {msg}")]
    CsvParse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
