use std::f64::consts::PI;

use num_complex::Complex64;

use crate::field::ComplexField2D;
use crate::fourier::{fft2_inplace, fft_freq};
use crate::BeamError;

/// Fraction of spectral power the band limit may remove before propagation
/// is refused as aliased. Weak clipped tails below this level would have
/// wrapped around the window; zeroing them is the point of the band-limited
/// method.
const ALIAS_POWER_LIMIT: f64 = 1e-3;

/// Free-space transport by the band-limited angular-spectrum method.
///
/// The transfer function is exp(i(k_z − k)z) on propagating waves — the
/// on-axis plane phase is referenced out, which keeps the huge kz·z phases
/// out of the arithmetic — and zero on evanescent waves and beyond the
/// anti-aliasing band limit u ≤ 1/(λ√((2Δu·z)² + 1)) per axis. |H| = 1 on
/// the kept band, so power is conserved to rounding for any field whose
/// spectrum fits the band; fields that do not fit produce an aliasing error.
pub fn propagate(field: &ComplexField2D, distance: f64) -> Result<ComplexField2D, BeamError> {
    if !distance.is_finite() {
        return Err(BeamError::InvalidInput(format!(
            "distance must be finite, got {distance}"
        )));
    }
    if distance == 0.0 {
        return Ok(field.clone());
    }
    let g = field.grid;
    let lambda = field.wavelength;
    if !(lambda > 0.0) {
        return Err(BeamError::InvalidInput(format!(
            "wavelength must be > 0, got {lambda}"
        )));
    }
    let k = 2.0 * PI / lambda;
    let z = distance;
    let zabs = z.abs();

    // Matsushima band limit per axis, in cycles/mm.
    let du = 1.0 / g.span_x();
    let dv = 1.0 / g.span_y();
    let u_lim = 1.0 / (lambda * ((2.0 * du * zabs).powi(2) + 1.0).sqrt());
    let v_lim = 1.0 / (lambda * ((2.0 * dv * zabs).powi(2) + 1.0).sqrt());

    let mut spec = field.values.clone();
    fft2_inplace(&mut spec, g.nx, g.ny, true);

    let mut total_power = 0.0;
    let mut clipped_power = 0.0;
    for iy in 0..g.ny {
        let v = fft_freq(iy, g.ny, g.dy);
        for ix in 0..g.nx {
            let u = fft_freq(ix, g.nx, g.dx);
            let a = &mut spec[iy * g.nx + ix];
            let p = a.norm_sqr();
            total_power += p;
            let s = lambda * lambda * (u * u + v * v);
            if s >= 1.0 || u.abs() > u_lim || v.abs() > v_lim {
                clipped_power += p;
                *a = Complex64::new(0.0, 0.0);
            } else {
                // k_z − k = −k·s/(1 + √(1−s)): algebraically exact, avoids
                // catastrophic cancellation at small s.
                let kz_minus_k = -k * s / (1.0 + (1.0 - s).sqrt());
                *a *= Complex64::from_polar(1.0, kz_minus_k * z);
            }
        }
    }

    if total_power > 0.0 && clipped_power > ALIAS_POWER_LIMIT * total_power {
        return Err(BeamError::Aliasing(format!(
            "band limit removes {:.2e} of the spectral power over {distance} mm on this grid",
            clipped_power / total_power
        )));
    }

    fft2_inplace(&mut spec, g.nx, g.ny, false);
    Ok(ComplexField2D {
        grid: g,
        values: spec,
        wavelength: lambda,
    })
}

/// Astigmatic thin-lens transform used as the topological-charge diagnostic:
/// a spherical lens of focal length `focal`, tilted by `tilt` radians about
/// the y axis, acts with effective focal lengths f_x = f·cosθ and
/// f_y = f/cosθ; the field is then propagated `observe_z` downstream.
///
/// Observed between the two line foci, an input LG_ℓ produces |ℓ|+1 bright
/// lobes along a diagonal whose sign follows the sign of ℓ.
pub fn tilted_lens_transform(
    field: &ComplexField2D,
    focal: f64,
    tilt: f64,
    observe_z: f64,
) -> Result<ComplexField2D, BeamError> {
    if !(focal > 0.0) || !focal.is_finite() {
        return Err(BeamError::InvalidInput(format!(
            "focal length must be finite and > 0, got {focal}"
        )));
    }
    if !(tilt > 0.0 && tilt < 45f64.to_radians()) {
        return Err(BeamError::InvalidInput(format!(
            "tilt must lie in (0, 45°), got {} rad",
            tilt
        )));
    }
    let g = field.grid;
    let k = 2.0 * PI / field.wavelength;
    let fx = focal * tilt.cos();
    let fy = focal / tilt.cos();

    let mut out = field.clone();
    for iy in 0..g.ny {
        let y = g.y(iy);
        let phase_y = -k * y * y / (2.0 * fy);
        for ix in 0..g.nx {
            let x = g.x(ix);
            let phase = -k * x * x / (2.0 * fx) + phase_y;
            out.values[g.idx(ix, iy)] *= Complex64::from_polar(1.0, phase);
        }
    }
    propagate(&out, observe_z)
}

/// Midpoint of the two astigmatic line foci, the default observation plane
/// for the tilted-lens diagnostic.
pub fn astigmatic_midpoint(focal: f64, tilt: f64) -> f64 {
    0.5 * focal * (tilt.cos() + 1.0 / tilt.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use crate::modes::{gaussian_field, lg_field, LgIndex};
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_distance_is_identity() {
        let g = Grid2D::square(64, 4.0).unwrap();
        let f = gaussian_field(&g, 0.4, 1.0).unwrap();
        let p = propagate(&f, 0.0).unwrap();
        assert_eq!(f.values, p.values);
    }

    #[test]
    fn power_is_conserved() {
        let g = Grid2D::square(256, 6.0).unwrap();
        let f = gaussian_field(&g, 0.5, 1.0).unwrap();
        for z in [1.0, 50.0, 300.0, -120.0] {
            let out = propagate(&f, z).unwrap();
            assert_abs_diff_eq!(out.power(), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn gaussian_spreads_as_analytic_waist() {
        // w(z) = w₀ √(1 + (z/z_R)²) measured through second moments.
        let g = Grid2D::square(512, 8.0).unwrap();
        let w0 = 0.5;
        let f = gaussian_field(&g, w0, 1.0).unwrap();
        let zr = PI * w0 * w0 / f.wavelength;
        for z in [0.3 * zr, 0.7 * zr, 1.1 * zr] {
            let out = propagate(&f, z).unwrap();
            let (wx, wy) = out.intensity().second_moment_widths().unwrap();
            let expected = w0 * (1.0 + (z / zr).powi(2)).sqrt();
            // widths are w/√2 per axis
            assert!(
                ((wx * 2f64.sqrt()) - expected).abs() / expected < 0.01,
                "z = {z}: measured {}, expected {expected}",
                wx * 2f64.sqrt()
            );
            assert!(((wy * 2f64.sqrt()) - expected).abs() / expected < 0.01);
        }
    }

    #[test]
    fn winding_survives_propagation() {
        let g = Grid2D::square(256, 8.0).unwrap();
        let f = lg_field(&g, LgIndex::new(3, 0), 1.0, 1.0).unwrap();
        let out = propagate(&f, 200.0).unwrap();
        let winding = crate::diagnostics::phase_winding(&out, 1.3).unwrap();
        assert!((winding - 3.0).abs() < 0.01, "winding {winding}");
    }

    #[test]
    fn undersampled_kernel_is_an_aliasing_error() {
        // A tightly focused beam on a tiny window propagated very far: nearly
        // all of its spectrum violates the band limit.
        let g = Grid2D::square(64, 1.6).unwrap();
        let f = gaussian_field(&g, 0.2, 1.0).unwrap();
        assert!(matches!(propagate(&f, 5000.0), Err(BeamError::Aliasing(_))));
    }

    #[test]
    fn lens_rejects_bad_geometry() {
        let g = Grid2D::square(64, 4.0).unwrap();
        let f = gaussian_field(&g, 0.4, 1.0).unwrap();
        assert!(tilted_lens_transform(&f, -10.0, 0.3, 100.0).is_err());
        assert!(tilted_lens_transform(&f, 100.0, 0.0, 100.0).is_err());
        assert!(tilted_lens_transform(&f, 100.0, 50f64.to_radians(), 100.0).is_err());
    }

    #[test]
    fn untitled_lens_focuses_gaussian() {
        // Complex-q oracle: after a thin lens 1/q' = 1/q − 1/f, the width at
        // distance z follows from Im(−1/q(z)).
        let g = Grid2D::square(512, 8.0).unwrap();
        let w0 = 0.6;
        let f = gaussian_field(&g, w0, 1.0).unwrap();
        let lambda = f.wavelength;
        let focal = 400.0;
        let zr = PI * w0 * w0 / lambda;

        // Small tilt approximates an ordinary spherical lens within 0.5%.
        let tilt: f64 = 0.02;
        let z_obs = 380.0;
        let out = tilted_lens_transform(&f, focal, tilt, z_obs).unwrap();

        let q0 = Complex64::new(0.0, zr);
        let q1 = (q0.inv() - Complex64::new(1.0 / focal, 0.0)).inv();
        let q = q1 + z_obs;
        let w_expected = (-lambda / (PI * (q.inv()).im)).sqrt();

        let (wx, _) = out.intensity().second_moment_widths().unwrap();
        let w_measured = wx * 2f64.sqrt();
        assert!(
            (w_measured - w_expected).abs() / w_expected < 0.02,
            "measured {w_measured}, expected {w_expected}"
        );
    }
}
