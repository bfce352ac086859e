//! Scan tilted-lens geometries and report fringe counts for a range of
//! charges and waists. Useful when picking a diagnostic geometry for a new
//! grid or waist set:
//!
//! ```text
//! cargo run --release -p beam-optics --example lens_scan
//! ```

use beam_optics::{count_fringes, lg_field, phase_winding, tilted_lens_transform, Grid2D, LgIndex};

fn main() {
    let n = 512;
    let window = 8.0;
    let grid = Grid2D::square(n, window).unwrap();

    // (signal waist mm, charge) pairs of interest plus a fixed-waist sweep.
    let cases: Vec<(f64, i32)> = vec![
        (0.3, 0),
        (0.5, 1),
        (0.7, 2),
        (1.0, 3),
        (1.1, 4),
        (1.0, -1),
        (1.0, -4),
        (1.0, 1),
        (1.0, 4),
        (0.5, -1),
    ];

    for &(focal, tilt_deg) in &[
        (450.0f64, 25.0f64),
        (600.0, 25.0),
        (600.0, 30.0),
        (750.0, 30.0),
    ] {
        let tilt = tilt_deg.to_radians();
        let fx = focal * tilt.cos();
        let fy = focal / tilt.cos();
        let mid = 0.5 * (fx + fy);
        println!("== f = {focal} mm, tilt = {tilt_deg}°, observe at {mid:.1} mm ==");
        for &(w, ell) in &cases {
            let field = lg_field(&grid, LgIndex::new(ell, 0), w, 1.0).unwrap();
            let obs = match tilted_lens_transform(&field, focal, tilt, mid) {
                Ok(f) => f,
                Err(e) => {
                    println!("  w={w} ell={ell:+}: propagate failed: {e}");
                    continue;
                }
            };
            let radius = if ell == 0 {
                w
            } else {
                w * (ell.abs() as f64 / 2.0).sqrt()
            };
            let winding = phase_winding(&field, radius).unwrap();
            match count_fringes(&obs.intensity()) {
                Ok(report) => println!(
                    "  w={w} ell={ell:+}: fringes={} tilt_sign={:+} inferred={:+} (winding {winding:+.3})",
                    report.bright_fringes, report.tilt_sign, report.inferred_ell
                ),
                Err(e) => println!("  w={w} ell={ell:+}: count failed: {e}"),
            }
        }
    }
}
