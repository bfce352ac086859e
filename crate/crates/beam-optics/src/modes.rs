use num_complex::Complex64;
use rayon::prelude::*;

use crate::field::ComplexField2D;
use crate::grid::Grid2D;
use crate::BeamError;

/// Laguerre-Gauss mode indices: azimuthal (topological) charge ℓ and radial
/// index p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LgIndex {
    pub ell: i32,
    pub p: u32,
}

impl LgIndex {
    pub fn new(ell: i32, p: u32) -> Self {
        LgIndex { ell, p }
    }
}

/// Generalized Laguerre polynomial L_p^α(x) by the three-term recurrence.
fn laguerre(p: u32, alpha: f64, x: f64) -> f64 {
    if p == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn check_resolution(grid: &Grid2D, waist: f64) -> Result<(), BeamError> {
    if !waist.is_finite() || waist <= 0.0 {
        return Err(BeamError::InvalidInput(format!(
            "waist must be finite and > 0, got {waist}"
        )));
    }
    let pitch = grid.dx.max(grid.dy);
    if waist < 4.0 * pitch {
        return Err(BeamError::Resolution(format!(
            "waist {waist} mm under-sampled: needs ≥ 8 samples across, pitch is {pitch} mm"
        )));
    }
    let span = grid.span_x().min(grid.span_y());
    if span * (1.0 + 1e-12) < 6.0 * waist {
        return Err(BeamError::Resolution(format!(
            "grid window {span} mm spans less than 6× the waist {waist} mm"
        )));
    }
    Ok(())
}

/// Laguerre-Gauss field at its waist plane,
///
/// ```text
/// E(ρ, φ) = ε₀ (ρ√2/w₀)^{|ℓ|} e^{−ρ²/w₀²} e^{iℓφ} L_p^{|ℓ|}(2ρ²/w₀²)
/// ```
///
/// with ε₀ fixed so the grid-integrated power equals `power`.
pub fn lg_field(
    grid: &Grid2D,
    idx: LgIndex,
    waist: f64,
    power: f64,
) -> Result<ComplexField2D, BeamError> {
    check_resolution(grid, waist)?;
    if !power.is_finite() || power <= 0.0 {
        return Err(BeamError::InvalidInput(format!(
            "power must be finite and > 0, got {power}"
        )));
    }

    let abs_ell = idx.ell.unsigned_abs() as i32;
    let mut field = ComplexField2D::zeros(*grid);
    field
        .values
        .par_chunks_mut(grid.nx)
        .enumerate()
        .for_each(|(iy, row)| {
            let y = grid.y(iy);
            for (ix, out) in row.iter_mut().enumerate() {
                let x = grid.x(ix);
                let rho2 = x * x + y * y;
                let arg = 2.0 * rho2 / (waist * waist);
                let radial = (arg.sqrt()).powi(abs_ell)
                    * (-rho2 / (waist * waist)).exp()
                    * laguerre(idx.p, abs_ell as f64, arg);
                let phase = idx.ell as f64 * y.atan2(x);
                *out = Complex64::from_polar(radial, phase);
            }
        });

    let raw = field.power();
    if !(raw > 0.0) {
        return Err(BeamError::Resolution(
            "mode has no power on this grid".into(),
        ));
    }
    let scale = (power / raw).sqrt();
    for v in field.values.iter_mut() {
        *v *= scale;
    }
    Ok(field)
}

/// Fundamental Gaussian of the given waist: `lg_field` with ℓ = p = 0.
pub fn gaussian_field(grid: &Grid2D, waist: f64, power: f64) -> Result<ComplexField2D, BeamError> {
    lg_field(grid, LgIndex::new(0, 0), waist, power)
}

/// Power fraction carried by one LG basis mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePower {
    pub ell: i32,
    pub p: u32,
    pub fraction: f64,
}

/// Result of projecting a field onto the LG basis of a given waist.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecomposition {
    pub waist: f64,
    pub entries: Vec<ModePower>,
}

impl ModeDecomposition {
    pub fn fraction(&self, ell: i32, p: u32) -> f64 {
        self.entries
            .iter()
            .find(|m| m.ell == ell && m.p == p)
            .map(|m| m.fraction)
            .unwrap_or(0.0)
    }

    /// Power fraction in one topological charge, summed over radial orders.
    pub fn fraction_for_ell(&self, ell: i32) -> f64 {
        self.entries
            .iter()
            .filter(|m| m.ell == ell)
            .map(|m| m.fraction)
            .sum()
    }

    /// Charge holding the most power, with that summed fraction.
    pub fn dominant_ell(&self) -> (i32, f64) {
        let mut ells: Vec<i32> = self.entries.iter().map(|m| m.ell).collect();
        ells.dedup();
        ells.into_iter()
            .map(|ell| (ell, self.fraction_for_ell(ell)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0))
    }

    /// Total captured fraction; ≤ 1 (+ numerical slack) by Bessel's
    /// inequality.
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|m| m.fraction).sum()
    }
}

/// Overlap of `field` with every LG_p^ℓ of the given `waist` for
/// |ℓ| ≤ `max_ell`, p ≤ `max_p`; returns normalized power fractions.
pub fn decompose_lg(
    field: &ComplexField2D,
    waist: f64,
    max_ell: i32,
    max_p: u32,
) -> Result<ModeDecomposition, BeamError> {
    check_resolution(&field.grid, waist)?;
    if max_ell < 0 {
        return Err(BeamError::InvalidInput("max_ell must be ≥ 0".into()));
    }
    let total_power = field.power();
    if !(total_power > 0.0) {
        return Err(BeamError::InvalidInput("field carries no power".into()));
    }

    let indices: Vec<LgIndex> = (-max_ell..=max_ell)
        .flat_map(|ell| (0..=max_p).map(move |p| LgIndex::new(ell, p)))
        .collect();

    let cell = field.grid.cell_area();
    let entries = indices
        .par_iter()
        .map(|&idx| -> Result<ModePower, BeamError> {
            let basis = lg_field(&field.grid, idx, waist, 1.0)?;
            let overlap: Complex64 = basis
                .values
                .iter()
                .zip(&field.values)
                .map(|(b, f)| b.conj() * f)
                .sum();
            let coeff = overlap * cell;
            Ok(ModePower {
                ell: idx.ell,
                p: idx.p,
                fraction: coeff.norm_sqr() / total_power,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(ModeDecomposition { waist, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> Grid2D {
        Grid2D::square(256, 6.0).unwrap()
    }

    #[test]
    fn gaussian_peaks_on_axis_and_matches_lg0() {
        let g = grid();
        let lg = lg_field(&g, LgIndex::new(0, 0), 0.5, 1.0).unwrap();
        let gauss = gaussian_field(&g, 0.5, 1.0).unwrap();
        assert_eq!(lg.values, gauss.values);
        let peak_idx = g.idx(g.nx / 2, g.ny / 2);
        let peak = lg.values[peak_idx].norm();
        for v in &lg.values {
            assert!(v.norm() <= peak + 1e-15);
        }
    }

    #[test]
    fn power_normalization_is_exact() {
        let g = grid();
        for ell in [-4, -1, 0, 2, 4] {
            let f = lg_field(&g, LgIndex::new(ell, 0), 0.5, 2.5).unwrap();
            assert_abs_diff_eq!(f.power(), 2.5, epsilon = 2.5e-6);
        }
    }

    #[test]
    fn ring_radius_of_ell2() {
        // |E|² ∝ ρ^{2ℓ} e^{−2ρ²/w²} peaks at ρ = w√(ℓ/2) = w for ℓ = 2.
        let g = grid();
        let w = 0.5;
        let f = lg_field(&g, LgIndex::new(2, 0), w, 1.0).unwrap();
        let centre = g.idx(g.nx / 2, g.ny / 2);
        assert!(f.values[centre].norm_sqr() < 1e-20, "on-axis hole");
        // Scan along +x for the intensity maximum.
        let iy = g.ny / 2;
        let (imax, _) = (g.nx / 2..g.nx)
            .map(|ix| (ix, f.values[g.idx(ix, iy)].norm_sqr()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let rho_max = g.x(imax);
        assert!(
            (rho_max - w).abs() <= g.dx,
            "ring at {rho_max}, expected {w}"
        );
    }

    #[test]
    fn gaussian_second_moment_width() {
        let g = grid();
        let w = 0.4;
        let f = gaussian_field(&g, w, 1.0).unwrap();
        let (wx, wy) = f.intensity().second_moment_widths().unwrap();
        assert_abs_diff_eq!(wx, w / 2f64.sqrt(), epsilon = 1e-4);
        assert_abs_diff_eq!(wy, w / 2f64.sqrt(), epsilon = 1e-4);
    }

    #[test]
    fn undersampled_waist_is_rejected() {
        let g = grid(); // pitch 23.4 µm
        assert!(matches!(
            lg_field(&g, LgIndex::new(1, 0), 0.05, 1.0),
            Err(BeamError::Resolution(_))
        ));
        // window too small relative to the waist
        assert!(matches!(
            lg_field(&g, LgIndex::new(1, 0), 1.5, 1.0),
            Err(BeamError::Resolution(_))
        ));
    }

    #[test]
    fn decomposition_is_orthonormal() {
        let g = grid();
        let f = lg_field(&g, LgIndex::new(2, 0), 0.5, 1.0).unwrap();
        let table = decompose_lg(&f, 0.5, 4, 3).unwrap();
        assert!(
            table.fraction(2, 0) > 0.999,
            "self overlap {}",
            table.fraction(2, 0)
        );
        assert!(table.fraction_for_ell(-2) < 1e-9);
        assert!(table.total() <= 1.0 + 1e-6);
        let (ell, frac) = table.dominant_ell();
        assert_eq!(ell, 2);
        assert!(frac > 0.999);
    }

    #[test]
    fn laguerre_small_orders() {
        // L_1^α(x) = 1 + α − x, L_2^0(x) = (x² − 4x + 2)/2
        assert_eq!(laguerre(0, 3.0, 1.7), 1.0);
        assert_abs_diff_eq!(laguerre(1, 2.0, 0.5), 2.5, epsilon = 1e-15);
        assert_abs_diff_eq!(laguerre(2, 0.0, 1.0), -0.5, epsilon = 1e-15);
    }
}
