use num_complex::Complex64;

use crate::error::BlochError;

/// Γ/2π in MHz for the cesium D2 excited state used throughout: converts
/// MHz-labelled detunings/rates into units of Γ.
pub const GAMMA_OVER_2PI_MHZ: f64 = 5.2;

/// Convert a frequency quoted in MHz (as on a spectrum axis) to units of Γ.
pub fn mhz_to_gamma(mhz: f64) -> f64 {
    mhz / GAMMA_OVER_2PI_MHZ
}

/// Convert a rate/detuning in units of Γ back to MHz.
pub fn gamma_to_mhz(gamma_units: f64) -> f64 {
    gamma_units * GAMMA_OVER_2PI_MHZ
}

/// Physical parameters of the Λ scheme.
///
/// |b⟩ is the excited state, decaying to |a⟩ at `gamma_ba` and to |c⟩ at
/// `gamma_bc` (total `gamma`). The coupling field (Rabi frequency `omega_c`,
/// detuning `delta_c`) drives |a⟩↔|b⟩; the signal field (`omega_s`,
/// `delta_s`) drives |c⟩↔|b⟩. `gamma_p` pumps population incoherently from
/// |c⟩ to |a⟩.
///
/// Gauge: plane-wave factors are absorbed into the Rabi frequencies and the
/// global phase is fixed so that `omega_c` is real and non-negative; the
/// signal `omega_s` stays complex and carries the local optical phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSystem {
    /// Total excited-state decay rate Γ. Everything else is in units of it.
    pub gamma: f64,
    /// Partial decay rate into |a⟩.
    pub gamma_ba: f64,
    /// Partial decay rate into |c⟩.
    pub gamma_bc: f64,
    /// Incoherent pump rate |c⟩ → |a⟩.
    pub gamma_p: f64,
    /// Coupling Rabi frequency (real, ≥ 0 by gauge choice).
    pub omega_c: f64,
    /// Signal Rabi frequency (complex).
    pub omega_s: Complex64,
    /// Coupling detuning Δ_C.
    pub delta_c: f64,
    /// Signal detuning Δ_S.
    pub delta_s: f64,
}

impl LambdaSystem {
    /// Λ system with Γ = 1 and balanced branching Γ_ba = Γ_bc = 1/2.
    pub fn symmetric(
        omega_c: f64,
        omega_s: Complex64,
        gamma_p: f64,
        delta_c: f64,
        delta_s: f64,
    ) -> Self {
        LambdaSystem {
            gamma: 1.0,
            gamma_ba: 0.5,
            gamma_bc: 0.5,
            gamma_p,
            omega_c,
            omega_s,
            delta_c,
            delta_s,
        }
    }

    /// Two-photon detuning δ = Δ_C − Δ_S.
    pub fn delta(&self) -> f64 {
        self.delta_c - self.delta_s
    }

    /// Replace the signal detuning so the two-photon detuning becomes `delta`
    /// at fixed Δ_C (the scan convention: Δ_S = Δ_C − δ).
    pub fn with_two_photon_detuning(mut self, delta: f64) -> Self {
        self.delta_s = self.delta_c - delta;
        self
    }

    pub fn with_omega_s(mut self, omega_s: Complex64) -> Self {
        self.omega_s = omega_s;
        self
    }

    pub fn with_omega_c(mut self, omega_c: f64) -> Self {
        self.omega_c = omega_c;
        self
    }

    pub fn validate(&self) -> Result<(), BlochError> {
        for (field, v) in [
            ("gamma", self.gamma),
            ("gamma_ba", self.gamma_ba),
            ("gamma_bc", self.gamma_bc),
            ("gamma_p", self.gamma_p),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(BlochError::invalid(
                    field,
                    format!("must be finite and ≥ 0, got {v}"),
                ));
            }
        }
        if self.gamma_ba + self.gamma_bc != self.gamma {
            return Err(BlochError::invalid(
                "gamma",
                format!(
                    "gamma_ba + gamma_bc must equal gamma exactly ({} + {} != {})",
                    self.gamma_ba, self.gamma_bc, self.gamma
                ),
            ));
        }
        if !self.omega_c.is_finite() || self.omega_c < 0.0 {
            return Err(BlochError::invalid(
                "omega_c",
                format!(
                    "must be finite and ≥ 0 (real by gauge), got {}",
                    self.omega_c
                ),
            ));
        }
        if !self.omega_s.re.is_finite() || !self.omega_s.im.is_finite() {
            return Err(BlochError::invalid("omega_s", "must be finite"));
        }
        if !self.delta_c.is_finite() || !self.delta_s.is_finite() {
            return Err(BlochError::invalid(
                "delta_c/delta_s",
                "detunings must be finite",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detuning_difference() {
        let sys = LambdaSystem::symmetric(0.1, Complex64::new(0.0, 0.0), 0.05, 0.3, 0.1);
        assert_eq!(sys.delta(), 0.3 - 0.1);
        let sys = sys.with_two_photon_detuning(-0.25);
        assert!((sys.delta() + 0.25).abs() < 1e-15);
        assert!((sys.delta_s - 0.55).abs() < 1e-15);
    }

    #[test]
    fn mhz_conversion_round_trip() {
        assert!((mhz_to_gamma(5.2) - 1.0).abs() < 1e-15);
        assert!((gamma_to_mhz(mhz_to_gamma(-5.5)) + 5.5).abs() < 1e-12);
    }

    #[test]
    fn validate_rejects_unbalanced_total() {
        let mut sys = LambdaSystem::symmetric(0.1, Complex64::new(0.0, 0.0), 0.05, 0.0, 0.0);
        sys.gamma = 1.0 + 1e-12;
        assert!(sys.validate().is_err());
    }

    #[test]
    fn validate_rejects_negative_rates_and_complex_gauge_violation() {
        let mut sys = LambdaSystem::symmetric(0.1, Complex64::new(0.0, 0.0), -0.05, 0.0, 0.0);
        assert!(sys.validate().is_err());
        sys.gamma_p = 0.05;
        sys.omega_c = -0.1;
        assert!(sys.validate().is_err());
    }
}
