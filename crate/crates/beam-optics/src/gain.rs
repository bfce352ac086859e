use bloch_core::LambdaSystem;
use num_complex::Complex64;
use rayon::prelude::*;
use spectra::normalized_response;

use crate::field::ComplexField2D;
use crate::BeamError;

/// Transverse profile of the incoherent pump rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpProfile {
    /// Pump beam much wider than the signal: Γ_P independent of position.
    Uniform,
    /// Gaussian pump of the given waist: Γ_P(ρ) = Γ_P · exp(−ρ²/w²).
    Gaussian { waist: f64 },
}

impl PumpProfile {
    fn rate_factor(&self, rho2: f64) -> f64 {
        match self {
            PumpProfile::Uniform => 1.0,
            PumpProfile::Gaussian { waist } => (-rho2 / (waist * waist)).exp(),
        }
    }
}

/// Thin slab of pumped Λ medium crossed by the signal beam.
///
/// The coupling beam is Gaussian with waist `coupling_waist` (amplitude
/// profile, so Ω_C(ρ) = Ω_C(0)·exp(−ρ²/w_C²)); the pump defaults to uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainMedium {
    /// Resonant optical density b₀ of the slab.
    pub optical_density: f64,
    /// Coupling beam waist w_C in mm (may be infinite for a uniform drive).
    pub coupling_waist: f64,
    /// On-axis coupling Rabi frequency Ω_C(0) in units of Γ.
    pub coupling_peak_rabi: f64,
    /// Atomic parameters; `omega_c` is overwritten sample by sample with the
    /// local coupling amplitude.
    pub atomic: LambdaSystem,
    pub pump_profile: PumpProfile,
    /// Diffraction inside the slab is neglected; only the thin-slab model is
    /// implemented.
    pub thin_slab: bool,
    /// Physical slab length in mm, reported against the Rayleigh range.
    pub cloud_length: f64,
}

impl GainMedium {
    pub fn new(
        optical_density: f64,
        coupling_waist: f64,
        coupling_peak_rabi: f64,
        atomic: LambdaSystem,
    ) -> Self {
        GainMedium {
            optical_density,
            coupling_waist,
            coupling_peak_rabi,
            atomic,
            pump_profile: PumpProfile::Uniform,
            thin_slab: true,
            cloud_length: 2.0,
        }
    }

    fn validate(&self) -> Result<(), BeamError> {
        if !(self.optical_density >= 0.0) || !self.optical_density.is_finite() {
            return Err(BeamError::InvalidInput(format!(
                "optical_density must be finite and ≥ 0, got {}",
                self.optical_density
            )));
        }
        if !(self.coupling_waist > 0.0) {
            return Err(BeamError::InvalidInput(format!(
                "coupling_waist must be > 0, got {}",
                self.coupling_waist
            )));
        }
        if !(self.coupling_peak_rabi >= 0.0) || !self.coupling_peak_rabi.is_finite() {
            return Err(BeamError::InvalidInput(format!(
                "coupling_peak_rabi must be finite and ≥ 0, got {}",
                self.coupling_peak_rabi
            )));
        }
        if !self.thin_slab {
            return Err(BeamError::InvalidInput(
                "only the thin-slab medium model is implemented".into(),
            ));
        }
        Ok(())
    }

    /// Ratio of slab length to the signal Rayleigh range — the validity
    /// parameter of the thin-slab treatment (small is good).
    pub fn thin_slab_ratio(&self, signal_waist: f64, wavelength: f64) -> f64 {
        let zr = std::f64::consts::PI * signal_waist * signal_waist / wavelength;
        self.cloud_length / zr
    }
}

/// Multiply the signal by the local complex transmission of the slab,
///
/// ```text
/// t(x, y) = exp((b₀/2)·(−a(x, y) + i·d(x, y)))
/// ```
///
/// where a and d are the normalized absorption and dispersion of the local
/// linear response at Ω_C(ρ) (field amplitude picks up half the intensity
/// exponent). The mask depends on position only through ρ, so the azimuthal
/// index of any input mode is conserved exactly.
pub fn apply_gain_medium(
    signal: &ComplexField2D,
    medium: &GainMedium,
) -> Result<ComplexField2D, BeamError> {
    medium.validate()?;
    medium
        .atomic
        .validate()
        .map_err(|e| BeamError::InvalidInput(e.to_string()))?;

    let g = signal.grid;
    let half_b0 = 0.5 * medium.optical_density;
    let wc2 = medium.coupling_waist * medium.coupling_waist;
    let base = medium.atomic;

    let mut out = signal.clone();
    out.values.par_chunks_mut(g.nx).enumerate().try_for_each(
        |(iy, row)| -> Result<(), BeamError> {
            let y = g.y(iy);
            for (ix, v) in row.iter_mut().enumerate() {
                let x = g.x(ix);
                let rho2 = x * x + y * y;
                let mut local = base;
                local.omega_c = medium.coupling_peak_rabi * (-rho2 / wc2).exp();
                local.gamma_p = base.gamma_p * medium.pump_profile.rate_factor(rho2);
                let response =
                    normalized_response(&local).map_err(|source| BeamError::GainSample {
                        ix,
                        iy,
                        x,
                        y,
                        source,
                    })?;
                let exponent = Complex64::new(-response.absorption, response.dispersion) * half_b0;
                *v *= exponent.exp();
            }
            Ok(())
        },
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use crate::modes::{lg_field, LgIndex};
    use bloch_core::Complex64 as C64;

    const ZERO: C64 = C64::new(0.0, 0.0);

    fn grid() -> Grid2D {
        Grid2D::square(128, 6.0).unwrap()
    }

    fn reference_drive_atomic() -> LambdaSystem {
        LambdaSystem::symmetric(0.1, ZERO, 0.05, 0.0, 0.0)
    }

    #[test]
    fn zero_density_is_identity() {
        let g = grid();
        let f = lg_field(&g, LgIndex::new(1, 0), 0.5, 1.0).unwrap();
        let medium = GainMedium::new(0.0, 3.0, 0.1, reference_drive_atomic());
        let out = apply_gain_medium(&f, &medium).unwrap();
        assert_eq!(f.values, out.values);
    }

    #[test]
    fn uniform_coupling_at_eit_point_is_identity() {
        // Γ_P = 0 at two-photon resonance: a = d = 0 exactly everywhere.
        let g = grid();
        let f = lg_field(&g, LgIndex::new(2, 0), 0.5, 1.0).unwrap();
        let mut atomic = reference_drive_atomic();
        atomic.gamma_p = 0.0;
        let medium = GainMedium::new(3.0, f64::INFINITY, 0.1, atomic);
        let out = apply_gain_medium(&f, &medium).unwrap();
        for (a, b) in f.values.iter().zip(&out.values) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn pumped_slab_amplifies_and_preserves_winding() {
        let g = grid();
        let w0 = 0.5;
        let f = lg_field(&g, LgIndex::new(1, 0), w0, 1.0).unwrap();
        let medium = GainMedium::new(3.0, 3.0, 0.1, reference_drive_atomic());
        let out = apply_gain_medium(&f, &medium).unwrap();

        let gain = out.power() / f.power();
        assert!(gain > 1.0, "power gain {gain}");

        let radius = w0 * (0.5f64).sqrt();
        let winding = crate::diagnostics::phase_winding(&out, radius).unwrap();
        assert!((winding - 1.0).abs() < 0.01, "winding {winding}");
    }

    #[test]
    fn charge_leakage_is_negligible() {
        // The mask is a function of ρ only: power must stay in the input ℓ.
        let g = Grid2D::square(256, 6.0).unwrap();
        let f = lg_field(&g, LgIndex::new(2, 0), 0.5, 1.0).unwrap();
        let medium = GainMedium::new(3.0, 3.0, 0.1, reference_drive_atomic());
        let out = apply_gain_medium(&f, &medium).unwrap();
        let table = crate::modes::decompose_lg(&out, 0.5, 4, 4).unwrap();
        let total: f64 = table.total();
        let in_ell2 = table.fraction_for_ell(2);
        assert!(
            in_ell2 / total > 1.0 - 1e-6,
            "leakage {}",
            1.0 - in_ell2 / total
        );
        assert!(in_ell2 > 0.99, "dominant fraction {in_ell2}");
    }

    #[test]
    fn thin_slab_report() {
        let medium = GainMedium::new(3.0, 3.0, 0.1, reference_drive_atomic());
        let ratio = medium.thin_slab_ratio(0.3, crate::DEFAULT_WAVELENGTH_MM);
        assert!(ratio < 0.01, "2 mm cloud vs z_R: {ratio}");
    }

    #[test]
    fn narrow_pump_profile_weakens_the_gain() {
        let g = grid();
        let f = lg_field(&g, LgIndex::new(0, 0), 0.5, 1.0).unwrap();
        let uniform = GainMedium::new(3.0, 3.0, 0.1, reference_drive_atomic());
        let mut narrow = uniform;
        narrow.pump_profile = PumpProfile::Gaussian { waist: 0.2 };

        let gain_uniform = apply_gain_medium(&f, &uniform).unwrap().power();
        let gain_narrow = apply_gain_medium(&f, &narrow).unwrap().power();
        assert!(
            gain_narrow < gain_uniform,
            "pump starved off-axis should amplify less: {gain_narrow} vs {gain_uniform}"
        );
        assert!(gain_narrow > 1.0);
    }

    #[test]
    fn medium_validation() {
        let mut medium = GainMedium::new(3.0, 3.0, 0.1, reference_drive_atomic());
        medium.thin_slab = false;
        let g = grid();
        let f = lg_field(&g, LgIndex::new(0, 0), 0.5, 1.0).unwrap();
        assert!(apply_gain_medium(&f, &medium).is_err());
    }
}
