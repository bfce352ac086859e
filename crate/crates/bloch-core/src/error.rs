use crate::density::DensityMatrix;

#[derive(Debug, thiserror::Error)]
pub enum BlochError {
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter {
        field: &'static str,
        message: String,
    },

    /// Reached `t_end` with the residual still above the requested threshold.
    /// Carries the last state so callers can inspect the trajectory endpoint.
    #[error(
        "steady state not reached by t = {t_end} (1/Γ): ‖dσ/dt‖∞ = {residual:.3e} ≥ {threshold:.3e}"
    )]
    NonConvergence {
        t_end: f64,
        residual: f64,
        threshold: f64,
        state: DensityMatrix,
    },

    #[error("singular steady-state system: {reason}")]
    SingularSystem { reason: String },

    #[error("step size underflow at t = {t} (stiff or degenerate parameters)")]
    StepSizeUnderflow { t: f64 },
}

impl BlochError {
    pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        BlochError::InvalidParameter {
            field,
            message: message.into(),
        }
    }
}
