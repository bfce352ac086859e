use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::BlochError;
use crate::system::LambdaSystem;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Steady state at zeroth order in the signal drive, valid at all orders in
/// the coupling drive and assuming balanced branching Γ_ba = Γ_bc = Γ/2:
///
/// ```text
/// σ_aa = (Ω_C² + Δ_C² + Γ²/4) / (Ω_C²(2 + R) + Δ_C² + Γ²/4),   R = Γ/(2Γ_P)
/// σ_bb = (1 − σ_aa)/(1 + R)
/// σ_cc = R (1 − σ_aa)/(1 + R)
/// σ_ab = −iΩ_C [1 − (2 + R)σ_aa] / [(iΔ_C − Γ/2)(1 + R)]
/// ```
///
/// with σ_cb = σ_ac = 0. For Γ_P = 0 the closed forms are replaced by their
/// algebraic limit: optical pumping piles all population into the unpumped
/// ground state |c⟩ and σ_ab vanishes.
pub fn zero_order_steady_state(sys: &LambdaSystem) -> Result<DensityMatrix, BlochError> {
    sys.validate()?;
    if sys.gamma_ba != sys.gamma_bc {
        return Err(BlochError::invalid(
            "gamma_ba",
            "zero-order closed forms assume balanced branching (gamma_ba == gamma_bc)",
        ));
    }
    if sys.gamma_p == 0.0 {
        return Ok(DensityMatrix::ground_c());
    }

    let r = sys.gamma / (2.0 * sys.gamma_p);
    let oc2 = sys.omega_c * sys.omega_c;
    let lorentz = sys.delta_c * sys.delta_c + 0.25 * sys.gamma * sys.gamma;

    let saa = (oc2 + lorentz) / (oc2 * (2.0 + r) + lorentz);
    let sbb = (1.0 - saa) / (1.0 + r);
    // Derive σ_cc from the trace so it closes exactly; differs from the
    // closed form by at most one ulp.
    let scc = 1.0 - (saa + sbb);
    let sab = Complex64::new(0.0, -sys.omega_c) * (1.0 - (2.0 + r) * saa)
        / (Complex64::new(-0.5 * sys.gamma, sys.delta_c) * (1.0 + r));

    Ok(DensityMatrix::new(saa, sbb, scc, sab, ZERO, ZERO))
}

/// Drive-independent first-order ratio σ_cb⁽¹⁾ / Ω_S:
///
/// ```text
/// [(−δ + iΓ_P/2)(σ_cc⁽⁰⁾ − σ_bb⁽⁰⁾) − Ω_C σ_ba⁽⁰⁾]
/// ─────────────────────────────────────────────────
///   [(iδ + Γ_P/2)(iΔ_S − Γ/2) − Ω_C²]
/// ```
///
/// The bare transition (Ω_C = 0, Γ_P = 0, population pinned in |c⟩) is the
/// δ-cancelled limit of the same expression, 1/(Δ_S + iΓ/2): a Lorentzian of
/// half width Γ/2 in the absorptive part.
pub fn first_order_coherence_ratio(sys: &LambdaSystem) -> Result<Complex64, BlochError> {
    sys.validate()?;
    if sys.omega_c == 0.0 && sys.gamma_p == 0.0 {
        return Ok(Complex64::new(sys.delta_s, 0.5 * sys.gamma).inv());
    }
    let zero = zero_order_steady_state(sys)?;
    let delta = sys.delta();

    let numerator = Complex64::new(-delta, 0.5 * sys.gamma_p) * (zero.sigma_cc - zero.sigma_bb)
        - sys.omega_c * zero.sigma_ba();
    let denominator = Complex64::new(0.5 * sys.gamma_p, delta)
        * Complex64::new(-0.5 * sys.gamma, sys.delta_s)
        - sys.omega_c * sys.omega_c;
    Ok(numerator / denominator)
}

/// First-order signal coherence σ_cb⁽¹⁾ = Ω_S · (drive-independent ratio).
/// Its phase follows the phase of the signal drive.
pub fn first_order_signal_coherence(sys: &LambdaSystem) -> Result<Complex64, BlochError> {
    if sys.omega_s.norm_sqr() == 0.0 {
        return Err(BlochError::invalid(
            "omega_s",
            "σ_cb⁽¹⁾ is proportional to omega_s; use first_order_coherence_ratio for |omega_s| = 0",
        ));
    }
    Ok(sys.omega_s * first_order_coherence_ratio(sys)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reference_drive(delta_c: f64, delta: f64) -> LambdaSystem {
        LambdaSystem::symmetric(0.1, Complex64::new(1e-4, 0.0), 0.05, delta_c, 0.0)
            .with_two_photon_detuning(delta)
    }

    #[test]
    fn zero_order_reference_point() {
        // Ω_C = 0.1Γ, Γ_P = 0.05Γ, Δ_C = 0: σ_aa = 0.26/0.37 and the rest
        // follow as exact rationals.
        let rho = zero_order_steady_state(&reference_drive(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(rho.sigma_aa, 26.0 / 37.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.sigma_bb, 1.0 / 37.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.sigma_cc, 10.0 / 37.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.sigma_ab.im, -5.0 / 37.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.sigma_ab.re, 0.0, epsilon = 1e-15);
        assert_eq!(rho.trace(), 1.0);
    }

    #[test]
    fn zero_order_pump_off_limit() {
        let sys = LambdaSystem::symmetric(0.1, ZERO, 0.0, 0.7, 0.0);
        let rho = zero_order_steady_state(&sys).unwrap();
        assert_eq!((rho.sigma_aa, rho.sigma_bb, rho.sigma_cc), (0.0, 0.0, 1.0));
    }

    #[test]
    fn zero_order_no_coupling() {
        // Pump empties |c⟩ and nothing repopulates it.
        let sys = LambdaSystem::symmetric(0.0, ZERO, 0.3, 0.0, 0.0);
        let rho = zero_order_steady_state(&sys).unwrap();
        assert_eq!((rho.sigma_aa, rho.sigma_bb, rho.sigma_cc), (1.0, 0.0, 0.0));
    }

    #[test]
    fn ratio_at_raman_resonance_is_exact_rational() {
        // Reference drive (Ω_C = 0.1Γ, Γ_P = 0.05Γ) at δ = 0, Δ_C = 0:
        // σ_cb/Ω_S = (110/333) i,
        // positive imaginary part = gain.
        let ratio = first_order_coherence_ratio(&reference_drive(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(ratio.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ratio.im, 110.0 / 333.0, epsilon = 1e-14);
        assert!(ratio.im > 0.0);
    }

    #[test]
    fn eit_dark_state_gives_zero_coherence() {
        for delta_c in [0.0, 1.0577, -1.0577] {
            let sys = LambdaSystem::symmetric(0.1, Complex64::new(0.01, 0.0), 0.0, delta_c, 0.0)
                .with_two_photon_detuning(0.0);
            let coh = first_order_signal_coherence(&sys).unwrap();
            assert_eq!(coh, ZERO);
        }
    }

    #[test]
    fn coherence_phase_follows_signal_phase() {
        let base = reference_drive(0.3, 0.1);
        let c0 =
            first_order_signal_coherence(&base.with_omega_s(Complex64::new(1e-3, 0.0))).unwrap();
        let rotated = Complex64::from_polar(1e-3, 0.7);
        let c1 = first_order_signal_coherence(&base.with_omega_s(rotated)).unwrap();
        assert_abs_diff_eq!(c1.norm(), c0.norm(), epsilon = 1e-18);
        let phase_diff = (c1 / c0).arg();
        assert_abs_diff_eq!(phase_diff, 0.7, epsilon = 1e-12);
    }

    #[test]
    fn bare_transition_is_lorentzian() {
        let sys = LambdaSystem::symmetric(0.0, ZERO, 0.0, 0.0, 0.35);
        let ratio = first_order_coherence_ratio(&sys).unwrap();
        let expected = Complex64::new(0.35, 0.5).inv();
        assert_abs_diff_eq!((ratio - expected).norm(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn signal_coherence_requires_nonzero_drive() {
        let sys = reference_drive(0.0, 0.0).with_omega_s(ZERO);
        assert!(first_order_signal_coherence(&sys).is_err());
    }
}
