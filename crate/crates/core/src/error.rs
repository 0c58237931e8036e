use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported spin {0}: only 1/2 and 1 are available")]
    UnsupportedSpin(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
    #[error("exchange J must be positive in dimensionless mode, got {0}")]
    NonPositiveExchange(f64),
    #[error("matrix is not Hermitian (max |M - M†| = {0:e})")]
    NotHermitian(f64),
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("spectrum has {0} levels, expected 18")]
    IncompleteSpectrum(usize),
    #[error("cubic auxiliary p = {0:e} is negative")]
    NegativeCubicP(f64),
    #[error("invalid range `{0}`")]
    InvalidRange(String),
    #[error("invalid level label `{0}`")]
    InvalidLabel(String),
    #[error("phase {0} is not a ground state anywhere in the requested range")]
    PhaseNotStable(String),
    #[error("invalid physical parameters: {0}")]
    InvalidPhysical(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
