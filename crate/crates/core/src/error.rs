use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeekError {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid controller parameters: {0}")]
    InvalidParams(String),

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    /// Euler-Maruyama produced a non-finite state.
    #[error("integration fault at t = {t}: non-finite state {state:?}")]
    IntegrationFault { t: f64, state: Vec<f64> },

    /// The averaged systems are written in polar coordinates around the
    /// source and divide by the radius.
    #[error("singular polar chart: |radius| = {radius} below {r_min} (t = {t:?})")]
    SingularChart { t: Option<f64>, radius: f64, r_min: f64 },

    #[error("bearing undefined: vehicle center coincides with the source")]
    UndefinedBearing,

    #[error("operation requires a quadratic field")]
    NotQuadratic,

    #[error("operation requires a circular field (q_p = 0), got q_p = {0}")]
    NotCircular(f64),

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    #[error("equilibrium {0} is not defined for these parameters")]
    UndefinedEquilibrium(usize),

    #[error("polynomial: {0}")]
    Polynomial(String),

    #[error("config error: {}", format_issues(.0))]
    Config(Vec<ConfigIssue>),

    #[error("io error: {0}")]
    Io(String),
}

/// A single offending key in a scenario config file.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConfigIssue {
    pub key: String,
    pub message: String,
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("{}: {}", i.key, i.message))
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<std::io::Error> for SeekError {
    fn from(e: std::io::Error) -> Self {
        SeekError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SeekError>;
