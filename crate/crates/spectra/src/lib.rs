//! Macroscopic transmission spectra of the weak signal beam through the
//! pumped Λ medium.
//!
//! The microscopic input is the drive-independent linear response
//! σ_cb⁽¹⁾/Ω_S from `bloch-core`. Absorption is normalized so the bare
//! two-level transition has unit peak: a = −(Γ/2)·Im(σ_cb⁽¹⁾/Ω_S), and a
//! thin slab of resonant optical density b₀ transmits T = exp(−b₀·a).
//! Negative a (T > 1) is Raman gain.

mod peak;
mod response;
mod scan;

pub use peak::{analyze_peak, PeakReport};
pub use response::{normalized_absorption, normalized_response, transmission, LinearResponse};
pub use scan::{scan_spectrum, scan_spectrum_serial, SpectrumScan};

use bloch_core::BlochError;

/// Thin atomic slab traversed by the signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    /// Resonant optical density b₀ of the bare |c⟩↔|b⟩ transition: the
    /// on-resonance intensity attenuation exponent, T_bare = e^(−b₀).
    pub optical_density: f64,
}

impl MediumSpec {
    pub fn new(optical_density: f64) -> Result<Self, SpectraError> {
        if !optical_density.is_finite() || optical_density < 0.0 {
            return Err(SpectraError::InvalidInput(format!(
                "optical_density must be finite and ≥ 0, got {optical_density}"
            )));
        }
        Ok(MediumSpec { optical_density })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpectraError {
    #[error(transparent)]
    Bloch(#[from] BlochError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty spectrum scan")]
    EmptyScan,
}
