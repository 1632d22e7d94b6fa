use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no guided HE11 mode at omega = {omega:e} rad/s: {reason}")]
    NoGuidedMode { omega: f64, reason: String },
    #[error("plasma-frequency calibration failed: {0}")]
    Calibration(String),
    #[error("degenerate mode parameter: {0}")]
    DegenerateMode(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cutoff selection failed: {0}")]
    Cutoff(String),
    #[error("sampling violates the Nyquist condition: {0}")]
    Nyquist(String),
    #[error("singular step matrix at step {step}")]
    SingularStep { step: usize },
    #[error(
        "solver did not converge after {halvings} halvings (population differences {residuals:?})"
    )]
    NotConverged {
        halvings: usize,
        residuals: Vec<f64>,
    },
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("cache entry {0} is corrupt")]
    CorruptCache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
