//! Density-matrix dynamics of a three-level Λ system driven by a strong
//! coupling field on the |a⟩↔|b⟩ transition and a weak signal field on the
//! |c⟩↔|b⟩ transition, with a directional incoherent pump from |c⟩ to |a⟩.
//!
//! Everything is expressed in units of the total excited-state decay rate Γ
//! (set `gamma = 1.0` and all other rates/detunings relative to it). The
//! constant [`GAMMA_OVER_2PI_MHZ`] converts detunings quoted in MHz.
//!
//! Three independent routes to the steady state are provided and are expected
//! to agree wherever they are all valid:
//!
//! * [`zero_order_steady_state`] / [`first_order_coherence_ratio`] — closed
//!   forms, zeroth and first order in the signal drive;
//! * [`full_steady_state`] — direct linear solve of the stationary Bloch
//!   equations with the trace constraint, valid at all signal strengths;
//! * [`integrate_to_steady_state`] — adaptive Runge-Kutta integration of
//!   [`bloch_rhs`] until the residual drops below a threshold.

mod density;
mod error;
mod linear_response;
mod ode;
mod rhs;
mod steady_state;
mod system;

pub use density::{DensityMatrix, SigmaDot};
pub use error::BlochError;
pub use linear_response::{
    first_order_coherence_ratio, first_order_signal_coherence, zero_order_steady_state,
};
pub use ode::{integrate_to_steady_state, SteadyStateResult, StopReason};
pub use rhs::bloch_rhs;
pub use steady_state::full_steady_state;
pub use system::{gamma_to_mhz, mhz_to_gamma, LambdaSystem, GAMMA_OVER_2PI_MHZ};

pub use num_complex::Complex64;
