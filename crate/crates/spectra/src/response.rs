use bloch_core::{first_order_coherence_ratio, LambdaSystem};

use crate::{MediumSpec, SpectraError};

/// Both quadratures of the normalized signal response.
///
/// `absorption` is −(Γ/2)·Im(σ_cb⁽¹⁾/Ω_S): +1 at the bare two-level
/// resonance, negative where the medium amplifies. `dispersion` is the
/// equally normalized real part, (Γ/2)·Re(σ_cb⁽¹⁾/Ω_S), the phase-shifting
/// quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearResponse {
    pub absorption: f64,
    pub dispersion: f64,
}

/// Normalized absorption and dispersion of the signal at the system's
/// detunings. Drive-independent (uses the σ_cb⁽¹⁾/Ω_S ratio).
pub fn normalized_response(sys: &LambdaSystem) -> Result<LinearResponse, SpectraError> {
    let ratio = first_order_coherence_ratio(sys)?;
    let half_gamma = 0.5 * sys.gamma;
    Ok(LinearResponse {
        absorption: -half_gamma * ratio.im,
        dispersion: half_gamma * ratio.re,
    })
}

/// Normalized absorption a; a < 0 means gain. The bare two-level transition
/// (Ω_C = 0, Γ_P = 0) evaluates to the unit-peak Lorentzian
/// (Γ/2)²/((Γ/2)² + Δ_S²).
pub fn normalized_absorption(sys: &LambdaSystem) -> Result<f64, SpectraError> {
    Ok(normalized_response(sys)?.absorption)
}

/// Beer-Lambert transmission of the thin slab, T = exp(−b₀·a). T > 1 iff
/// the normalized absorption is negative.
pub fn transmission(sys: &LambdaSystem, medium: &MediumSpec) -> Result<f64, SpectraError> {
    let a = normalized_absorption(sys)?;
    Ok((-medium.optical_density * a).exp())
}
