use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::BlochError;
use crate::rhs::bloch_rhs;
use crate::system::LambdaSystem;

type Mat8 = SMatrix<f64, 8, 8>;
type Vec8 = SVector<f64, 8>;

/// Relative singular-value cutoff below which the stationary system is
/// treated as rank deficient.
const SV_RATIO_CUTOFF: f64 = 1e-12;

/// Derivatives of the 8 reduced components (σ_cc eliminated through the
/// trace) as a function of the reduced coordinates.
fn reduced_rhs(sys: &LambdaSystem, x: &Vec8) -> Vec8 {
    let rho = DensityMatrix::new(
        x[0],
        x[1],
        1.0 - x[0] - x[1],
        Complex64::new(x[2], x[3]),
        Complex64::new(x[4], x[5]),
        Complex64::new(x[6], x[7]),
    );
    let dot = bloch_rhs(sys, &rho);
    Vec8::from([
        dot.d_aa,
        dot.d_bb,
        dot.d_ab.re,
        dot.d_ab.im,
        dot.d_cb.re,
        dot.d_cb.im,
        dot.d_ac.re,
        dot.d_ac.im,
    ])
}

/// Steady state from a direct linear solve of {bloch_rhs = 0, trace = 1},
/// valid at all orders in the signal drive.
///
/// The affine map x ↦ dσ/dt is probed column by column through [`bloch_rhs`]
/// itself, so this route and [`crate::integrate_to_steady_state`] share one
/// right-hand side by construction and can only disagree through their
/// numerics.
///
/// At Γ_P = 0 and δ = 0 the driven dark state decouples from all relaxation:
/// the stationary point degenerates into a manifold approached only at a rate
/// ∝ Ω²/Γ and the solve is refused; integrate from an explicit initial state
/// instead.
pub fn full_steady_state(sys: &LambdaSystem) -> Result<DensityMatrix, BlochError> {
    sys.validate()?;
    if sys.gamma_p == 0.0 && sys.delta() == 0.0 {
        return Err(BlochError::SingularSystem {
            reason:
                "two-photon resonance with no ground-state relaxation (gamma_p = 0, delta = 0): \
                     the dark state makes the steady state initial-condition dependent; \
                     use integrate_to_steady_state from a chosen rho0"
                    .to_string(),
        });
    }

    let f0 = reduced_rhs(sys, &Vec8::zeros());
    let mut a = Mat8::zeros();
    for j in 0..8 {
        let mut e = Vec8::zeros();
        e[j] = 1.0;
        a.set_column(j, &(reduced_rhs(sys, &e) - f0));
    }
    let b = -f0;

    let svd = a.svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    if !(s_max > 0.0) || s_min <= s_max * SV_RATIO_CUTOFF {
        return Err(BlochError::SingularSystem {
            reason: format!(
                "stationary system is rank deficient (singular value ratio {:.3e})",
                if s_max > 0.0 { s_min / s_max } else { 0.0 }
            ),
        });
    }
    let x = svd.solve(&b, 0.0).map_err(|e| BlochError::SingularSystem {
        reason: e.to_string(),
    })?;

    // σ_cc closes the trace; with this form (aa + bb) + cc == 1 exactly.
    let (aa, bb) = (x[0], x[1]);
    let cc = 1.0 - (aa + bb);
    Ok(DensityMatrix::new(
        aa,
        bb,
        cc,
        Complex64::new(x[2], x[3]),
        Complex64::new(x[4], x[5]),
        Complex64::new(x[6], x[7]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn matches_zero_order_without_signal() {
        for (oc, gp, dc) in [(0.1, 0.05, 0.0), (0.3, 0.2, 1.3), (0.05, 0.01, -0.8)] {
            let sys = LambdaSystem::symmetric(oc, ZERO, gp, dc, 0.4);
            let direct = full_steady_state(&sys).unwrap();
            let closed = crate::zero_order_steady_state(&sys).unwrap();
            assert!(
                direct.max_component_distance(&closed) < 1e-10,
                "mismatch at oc={oc} gp={gp} dc={dc}: {:?} vs {:?}",
                direct,
                closed
            );
        }
    }

    #[test]
    fn dark_state_point_is_refused() {
        let sys = LambdaSystem::symmetric(0.1, Complex64::new(0.02, 0.0), 0.0, 0.5, 0.5);
        match full_steady_state(&sys) {
            Err(BlochError::SingularSystem { .. }) => {}
            other => panic!("expected SingularSystem, got {other:?}"),
        }
    }

    #[test]
    fn undriven_unpumped_system_is_rank_deficient() {
        // No fields and no pump with δ ≠ 0: any ground-state mixture is
        // stationary, which the singular-value check must detect.
        let sys = LambdaSystem::symmetric(0.0, ZERO, 0.0, 0.5, 0.0);
        match full_steady_state(&sys) {
            Err(BlochError::SingularSystem { .. }) => {}
            other => panic!("expected SingularSystem, got {other:?}"),
        }
    }

    #[test]
    fn trace_is_exactly_one_with_signal_on() {
        let sys = LambdaSystem::symmetric(0.1, Complex64::new(0.02, 0.0), 0.05, 0.0, 0.0);
        let rho = full_steady_state(&sys).unwrap();
        assert_eq!(rho.trace(), 1.0);
        rho.validate().unwrap();
    }

    #[test]
    fn residual_of_solution_is_tiny() {
        let sys = LambdaSystem::symmetric(0.4, Complex64::new(0.05, 0.03), 0.2, -1.1, 0.7);
        let rho = full_steady_state(&sys).unwrap();
        let dot = bloch_rhs(&sys, &rho);
        assert!(dot.inf_norm() < 1e-12, "residual {}", dot.inf_norm());
    }
}
