use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by mesh handling, assembly, the laws and the time integrator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("topology error: {0}")]
    Topology(String),

    #[error("mesh has no DIRICHLET boundary facet")]
    EmptyDirichlet,

    #[error("degenerate {what} {index} (measure {measure:e})")]
    Degenerate {
        what: &'static str,
        index: usize,
        measure: f64,
    },

    #[error("unsupported quadrature order {0} (expected 1, 2 or 3)")]
    UnsupportedOrder(usize),

    #[error("empty contact surface")]
    EmptySurface,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    LinearSolver { iterations: usize, residual: f64 },

    #[error("fixed-point iteration did not converge at step {step}: {iterations} iterations, residual {residual:e}")]
    PicardNotConverged {
        step: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    /// Short machine-readable category, used in CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Topology(_) | Error::EmptyDirichlet | Error::Degenerate { .. } => "mesh",
            Error::UnsupportedOrder(_) | Error::InvalidInput(_) | Error::EmptySurface => "input",
            Error::Hypothesis(_) => "hypothesis",
            Error::NonFinite(_) => "non_finite",
            Error::LinearSolver { .. } => "linear_solver",
            Error::PicardNotConverged { .. } => "picard",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}
