use num_complex::Complex64;

use crate::density::{DensityMatrix, SigmaDot};
use crate::error::BlochError;
use crate::rhs::bloch_rhs;
use crate::system::LambdaSystem;

/// Which stopping criterion ended the integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// ‖dσ/dt‖∞ dropped below tol·Γ.
    ResidualTolerance,
    /// `t_end` was reached with the residual already below tol·Γ.
    TimeLimit,
}

#[derive(Debug, Clone, Copy)]
pub struct SteadyStateResult {
    pub state: DensityMatrix,
    pub t_final: f64,
    /// ‖dσ/dt‖∞ at the final state.
    pub residual: f64,
    pub stop: StopReason,
    pub steps: usize,
}

// Dormand-Prince 5(4) coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Embedded 4th-order error weights (b5 − b4).
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Two decades below the default steady-state threshold of 1e−10·Γ: the
// trajectory noise floor sits near RTOL·|y| per step, and the residual
// check must be able to get underneath it.
const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-14;
const MAX_STEPS: usize = 50_000_000;

type State = [f64; 9];

fn pack(rho: &DensityMatrix) -> State {
    [
        rho.sigma_aa,
        rho.sigma_bb,
        rho.sigma_cc,
        rho.sigma_ab.re,
        rho.sigma_ab.im,
        rho.sigma_cb.re,
        rho.sigma_cb.im,
        rho.sigma_ac.re,
        rho.sigma_ac.im,
    ]
}

fn unpack(y: &State) -> DensityMatrix {
    DensityMatrix::new(
        y[0],
        y[1],
        y[2],
        Complex64::new(y[3], y[4]),
        Complex64::new(y[5], y[6]),
        Complex64::new(y[7], y[8]),
    )
}

fn dot_to_state(dot: &SigmaDot) -> State {
    [
        dot.d_aa,
        dot.d_bb,
        dot.d_cc,
        dot.d_ab.re,
        dot.d_ab.im,
        dot.d_cb.re,
        dot.d_cb.im,
        dot.d_ac.re,
        dot.d_ac.im,
    ]
}

fn deriv(sys: &LambdaSystem, y: &State) -> State {
    dot_to_state(&bloch_rhs(sys, &unpack(y)))
}

fn inf_norm(y: &State) -> f64 {
    y.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrate the Bloch equations from `rho0` with an adaptive embedded
/// Runge-Kutta 5(4) scheme (PI step-size control) until either
/// ‖dσ/dt‖∞ < `tol`·Γ or `t_end` is reached. Reaching `t_end` with the
/// residual still above threshold is a [`BlochError::NonConvergence`] error
/// carrying the endpoint state.
pub fn integrate_to_steady_state(
    sys: &LambdaSystem,
    rho0: &DensityMatrix,
    t_end: f64,
    tol: f64,
) -> Result<SteadyStateResult, BlochError> {
    sys.validate()?;
    if !(t_end > 0.0) {
        return Err(BlochError::invalid(
            "t_end",
            format!("must be > 0, got {t_end}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(BlochError::invalid(
            "tol",
            format!("must be > 0, got {tol}"),
        ));
    }
    let threshold = tol * sys.gamma;

    let mut t = 0.0;
    let mut y = pack(rho0);
    let mut k1 = deriv(sys, &y);

    if inf_norm(&k1) < threshold {
        return Ok(SteadyStateResult {
            state: unpack(&y),
            t_final: t,
            residual: inf_norm(&k1),
            stop: StopReason::ResidualTolerance,
            steps: 0,
        });
    }

    // Initial step from the local derivative scale.
    let d0 = inf_norm(&y).max(1e-3);
    let d1 = inf_norm(&k1);
    let mut h = (0.01 * d0 / d1).clamp(1e-8, 0.1 * t_end);

    let mut err_prev: f64 = 1.0;
    let mut steps = 0usize;

    loop {
        if steps > MAX_STEPS {
            return Err(BlochError::NonConvergence {
                t_end,
                residual: inf_norm(&k1),
                threshold,
                state: unpack(&y),
            });
        }
        let mut last = false;
        if t + h >= t_end {
            h = t_end - t;
            last = true;
        }
        if h <= f64::EPSILON * t.max(1.0) {
            return Err(BlochError::StepSizeUnderflow { t });
        }

        let k2 = deriv(sys, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = deriv(sys, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = deriv(sys, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = deriv(
            sys,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = deriv(
            sys,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = deriv(sys, &y_new); // FSAL: also the derivative at the new point

        // Weighted RMS error of the embedded 4th-order difference.
        let mut err_sq = 0.0;
        for i in 0..9 {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = ATOL + RTOL * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / 9.0).sqrt();

        if err <= 1.0 {
            steps += 1;
            t += h;
            y = y_new;
            k1 = k7;

            let residual = inf_norm(&k1);
            if residual < threshold {
                return Ok(SteadyStateResult {
                    state: unpack(&y),
                    t_final: t,
                    residual,
                    stop: StopReason::ResidualTolerance,
                    steps,
                });
            }
            if last {
                return Err(BlochError::NonConvergence {
                    t_end,
                    residual,
                    threshold,
                    state: unpack(&y),
                });
            }

            // PI controller (Gustafsson-style) with the usual safety clamps.
            let fac = 0.9 * err.max(1e-10).powf(-0.17) * err_prev.powf(0.04);
            h *= fac.clamp(0.2, 10.0);
            err_prev = err.max(1e-10);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
}
