use num_complex::Complex64;

use crate::density::{DensityMatrix, SigmaDot};
use crate::system::LambdaSystem;

/// Right-hand side of the optical Bloch equations for the Λ system.
///
/// The six independent components evolve as
///
/// ```text
/// σ̇_aa = i(Ω_C σ_ba − Ω_C* σ_ab) + Γ_ba σ_bb + Γ_P σ_cc
/// σ̇_cc = i(Ω_S σ_bc − Ω_S* σ_cb) + Γ_bc σ_bb − Γ_P σ_cc
/// σ̇_bb = −(those field terms) − Γ σ_bb
/// σ̇_ab = (iΔ_C − Γ/2) σ_ab + iΩ_C(σ_bb − σ_aa) − iΩ_S σ_ac
/// σ̇_cb = (iΔ_S − Γ/2) σ_cb + iΩ_S(σ_bb − σ_cc) − iΩ_C σ_ca
/// σ̇_ac = (iδ − Γ_P/2) σ_ac + i(Ω_C σ_bc − Ω_S* σ_ab)
/// ```
///
/// with δ = Δ_C − Δ_S and the conjugate coherences derived, never stored.
/// The σ_cb detuning term uses Δ_S, the detuning of the field driving that
/// transition; with that choice the three detuning terms derive from one
/// Hamiltonian with level shifts (0, Δ_C, δ) for (a, b, c).
///
/// Each population-exchange term is computed once and reused with opposite
/// signs, so `population_sum()` of the result is exactly zero in floating
/// point, not just analytically.
pub fn bloch_rhs(sys: &LambdaSystem, rho: &DensityMatrix) -> SigmaDot {
    let i = Complex64::i();
    let gamma_half = 0.5 * sys.gamma;
    let oc = Complex64::new(sys.omega_c, 0.0);
    let os = sys.omega_s;

    // i(Ω σ_conj − Ω* σ) = −2 Im(Ω σ*): shared between the two populations
    // it connects so the trace derivative cancels term by term.
    let exch_c = -2.0 * (oc * rho.sigma_ab.conj()).im;
    let exch_s = -2.0 * (os * rho.sigma_cb.conj()).im;
    let decay_a = sys.gamma_ba * rho.sigma_bb;
    let decay_c = sys.gamma_bc * rho.sigma_bb;
    let pump = sys.gamma_p * rho.sigma_cc;

    let d_aa = exch_c + decay_a + pump;
    let d_cc = exch_s + decay_c - pump;
    // σ̇_bb through the trace identity: equal to −(field terms) − Γσ_bb
    // algebraically, and the population sum cancels exactly in floating point.
    let d_bb = -(d_aa + d_cc);

    let d_ab = (i * sys.delta_c - gamma_half) * rho.sigma_ab
        + i * oc * (rho.sigma_bb - rho.sigma_aa)
        - i * os * rho.sigma_ac;
    let d_cb = (i * sys.delta_s - gamma_half) * rho.sigma_cb
        + i * os * (rho.sigma_bb - rho.sigma_cc)
        - i * oc * rho.sigma_ca();
    let d_ac = (i * sys.delta() - 0.5 * sys.gamma_p) * rho.sigma_ac
        + i * (oc * rho.sigma_bc() - os.conj() * rho.sigma_ab);

    SigmaDot {
        d_aa,
        d_bb,
        d_cc,
        d_ab,
        d_cb,
        d_ac,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spontaneous_decay_only() {
        // No fields, no pump, all population excited: populations relax at
        // the partial rates.
        let sys = LambdaSystem::symmetric(0.0, Complex64::new(0.0, 0.0), 0.0, 0.0, 0.0);
        let dot = bloch_rhs(&sys, &DensityMatrix::excited_b());
        assert_eq!(dot.d_bb, -sys.gamma);
        assert_eq!(dot.d_aa, sys.gamma_ba);
        assert_eq!(dot.d_cc, sys.gamma_bc);
        assert_eq!(dot.population_sum(), 0.0);
    }

    #[test]
    fn coupling_drive_from_ground_a() {
        // Ω_C = 0.1Γ, Γ_P = 0.05Γ, Δ_C = 0, σ = |a⟩⟨a|: σ̇_ab = iΩ_C(σ_bb − σ_aa) = −0.1i
        let sys = LambdaSystem::symmetric(0.1, Complex64::new(0.0, 0.0), 0.05, 0.0, 0.0);
        let dot = bloch_rhs(&sys, &DensityMatrix::ground_a());
        assert!((dot.d_ab - Complex64::new(0.0, -0.1)).norm() < 1e-15);
    }

    #[test]
    fn trace_derivative_exactly_zero() {
        let sys = LambdaSystem::symmetric(0.37, Complex64::new(0.021, -0.013), 0.11, 1.3, -0.7);
        let rho = DensityMatrix::new(
            0.41,
            0.13,
            0.46,
            Complex64::new(0.03, -0.11),
            Complex64::new(-0.07, 0.02),
            Complex64::new(0.05, 0.09),
        );
        let dot = bloch_rhs(&sys, &rho);
        assert_eq!(dot.population_sum(), 0.0);
    }
}
