//! Failure taxonomy shared by the whole crate.
//!
//! The CLI maps these onto process exit codes, so every variant has a fixed
//! meaning: `Domain` and `Capacity` are caller mistakes, `Convergence` and
//! `Numeric` are internal numerical failures, `NotAchieved` means a requested
//! accuracy target could not be met, and `Instability` is a runaway closed
//! loop that was aborted on purpose.

use crate::approx::Approximant;

#[derive(Debug, thiserror::Error)]
pub enum DelayError {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural cap (polynomial degree, panel count, horizon) was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Adaptive quadrature hit its panel budget before meeting the tolerance.
    /// `best` is the estimate accumulated so far.
    #[error("quadrature did not converge; best estimate {best:e}")]
    Convergence { best: f64 },

    /// An accuracy target was not reached within the allowed search range.
    /// Carries the best approximant found so the caller can still use it.
    #[error(
        "accuracy target not achieved; best eps {:e} at order {}",
        best.measured_eps,
        best.config.order
    )]
    NotAchieved { best: Box<Approximant> },

    /// A simulated signal left the admissible envelope and the run was aborted.
    #[error("instability: |{signal}| = {value:e} at t = {t}")]
    Instability { t: f64, signal: String, value: f64 },

    /// Any other numerical failure (singular systems, overflow, NaN).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, DelayError>;

impl DelayError {
    pub fn domain(msg: impl Into<String>) -> Self {
        DelayError::Domain(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        DelayError::Capacity(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        DelayError::Numeric(msg.into())
    }
}

/// Rejects non-finite reals at API boundaries.
pub fn require_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(DelayError::domain(format!("{what} must be finite, got {x}")))
    }
}

/// Rejects complex values with a non-finite component.
pub fn require_finite_c(z: num_complex::Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(DelayError::domain(format!("{what} must be finite, got {z}")))
    }
}
