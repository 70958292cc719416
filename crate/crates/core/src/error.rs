use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{what} needs {requested} qubits, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("parameter slot {slot} is unbound")]
    UnboundParameter { slot: usize },

    #[error("sector undefined: {0}")]
    SectorUndefined(String),

    #[error("sector mismatch: {0}")]
    Sector(String),

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("solver did not converge after {iterations} iterations (max residual {residual:.3e})")]
    Solver { iterations: usize, residual: f64 },

    #[error("template cannot reach target: {0}")]
    TemplateMismatch(String),

    #[error("numerical contract: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Dimension(_) => "dimension",
            Error::Capacity { .. } => "capacity",
            Error::Contract(_) => "contract",
            Error::UnboundParameter { .. } => "unbound_parameter",
            Error::SectorUndefined(_) => "sector_undefined",
            Error::Sector(_) => "sector",
            Error::Consistency(_) => "consistency",
            Error::Solver { .. } => "solver",
            Error::TemplateMismatch(_) => "template_mismatch",
            Error::Numerical(_) => "numerical",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
