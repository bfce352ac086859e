//! Fringe law across the full charge range at the default diagnostic
//! geometry, and the gain-versus-waist survey (all gains above unity; the
//! ordering itself depends on how far each ring samples the coupling
//! profile, so it is printed rather than asserted).

use beam_optics::{
    apply_gain_medium, astigmatic_midpoint, count_fringes, lg_field, phase_winding,
    tilted_lens_transform, GainMedium, Grid2D, LgIndex,
};
use bloch_core::{Complex64, LambdaSystem};

const FOCAL: f64 = 600.0;
const TILT_DEG: f64 = 30.0;

fn default_grid() -> Grid2D {
    Grid2D::square(512, 8.0).unwrap()
}

#[test]
fn fringe_law_holds_for_all_charges() {
    let grid = default_grid();
    let tilt = TILT_DEG.to_radians();
    let observe = astigmatic_midpoint(FOCAL, tilt);

    for ell in -4..=4i32 {
        let field = lg_field(&grid, LgIndex::new(ell, 0), 1.0, 1.0).unwrap();
        let image = tilted_lens_transform(&field, FOCAL, tilt, observe)
            .unwrap()
            .intensity();
        let report = count_fringes(&image).unwrap();
        assert_eq!(
            report.bright_fringes,
            ell.unsigned_abs() as usize + 1,
            "fringe count for ℓ = {ell}"
        );
        if ell != 0 {
            assert_eq!(report.tilt_sign, ell.signum(), "orientation for ℓ = {ell}");
            assert_eq!(report.inferred_ell, ell, "inferred charge for ℓ = {ell}");
        } else {
            assert_eq!(report.inferred_ell, 0);
        }
    }
}

#[test]
fn amplification_survey_over_measured_waists() {
    let grid = default_grid();
    let atomic = LambdaSystem::symmetric(0.1, Complex64::new(0.0, 0.0), 0.05, 0.0, 0.0);
    let medium = GainMedium::new(3.0, 3.0, 0.1, atomic);

    let mut gains = Vec::new();
    for (ell, waist) in [(0i32, 0.3), (1, 0.5), (2, 0.7), (3, 1.0), (4, 1.1)] {
        let field = lg_field(&grid, LgIndex::new(ell, 0), waist, 1.0).unwrap();
        let amplified = apply_gain_medium(&field, &medium).unwrap();
        let gain = amplified.power() / field.power();
        assert!(gain > 1.0, "ℓ = {ell}: gain {gain}");

        let radius = if ell == 0 {
            waist
        } else {
            waist * (ell as f64 / 2.0).sqrt()
        };
        let winding = phase_winding(&amplified, radius).unwrap();
        assert!(
            (winding - ell as f64).abs() < 0.01,
            "ℓ = {ell}: winding {winding}"
        );
        gains.push((ell, waist, gain));
    }
    println!("single-pass gain vs charge/waist: {gains:?}");
}
