use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular parameters: {0}")]
    Singular(String),

    #[error("outside the validity regime: {0}")]
    Regime(String),

    #[error("no resonance: {0}")]
    NoResonance(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("accuracy check failed: {what} (achieved {achieved:e}, budget {budget:e})")]
    Accuracy { what: String, achieved: f64, budget: f64 },

    #[error("quadrature did not converge (achieved error estimate {achieved:e})")]
    Quadrature { achieved: f64 },

    #[error("no steady state: {0}")]
    NoSteadyState(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),
}
