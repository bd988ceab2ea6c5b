use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty domain: {0}")]
    EmptyDomain(String),
    #[error("unsupported precision: {0}")]
    UnsupportedPrecision(String),
    #[error("unsupported modulus {0} (supported range 1..=10000)")]
    UnsupportedModulus(u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("instance excluded: the principal character gives an L-function with a pole")]
    PoleExcluded,
    #[error("resource limit: index {requested} exceeds cache bound {bound}")]
    Resource { requested: u64, bound: u64 },
    #[error("singularity at {0}")]
    Singularity(String),
    #[error("argument {0} lies on the branch cut")]
    BranchCut(String),
    #[error("height |Im s| = {height} exceeds the supported ceiling {ceiling}")]
    Height { height: f64, ceiling: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("branch ambiguity: {0}")]
    BranchAmbiguity(String),
    #[error("incomplete scan: {sign_changes} sign changes but argument principle counts {argument_count}")]
    IncompleteScan {
        sign_changes: usize,
        argument_count: i64,
    },
    #[error("contour resolution: raw winding {0} is not close to an integer")]
    ContourResolution(f64),
    #[error("coverage: {0}")]
    Coverage(String),
    #[error("partial sum vanishes at y0 = {0}; N is undefined")]
    UndefinedN(f64),
    #[error("L vanishes at {0}")]
    ZeroEncounter(String),
    #[error("integer overflow while {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.to_string())
        } else {
            Error::Parse(e.to_string())
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Error::Io(e.to_string())
        } else {
            Error::Parse(e.to_string())
        }
    }
}
