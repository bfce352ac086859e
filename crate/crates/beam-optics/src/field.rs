use num_complex::Complex64;

use crate::grid::Grid2D;
use crate::DEFAULT_WAVELENGTH_MM;

/// Sampled complex optical field envelope on a uniform transverse grid.
/// Row-major storage, index `iy * nx + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField2D {
    pub grid: Grid2D,
    pub values: Vec<Complex64>,
    /// Optical wavelength in mm.
    pub wavelength: f64,
}

impl ComplexField2D {
    pub fn zeros(grid: Grid2D) -> Self {
        ComplexField2D {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            wavelength: DEFAULT_WAVELENGTH_MM,
        }
    }

    pub fn with_wavelength(mut self, wavelength: f64) -> Self {
        self.wavelength = wavelength;
        self
    }

    /// Total power Σ|E|²·dx·dy.
    pub fn power(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn intensity(&self) -> IntensityMap {
        IntensityMap {
            grid: self.grid,
            values: self.values.iter().map(|v| v.norm_sqr()).collect(),
        }
    }

    /// Bilinear interpolation of the complex amplitude at (x, y) mm.
    /// Returns `None` outside the sampled area.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> Option<Complex64> {
        let g = &self.grid;
        let fx = x / g.dx + (g.nx / 2) as f64;
        let fy = y / g.dy + (g.ny / 2) as f64;
        if fx < 0.0 || fy < 0.0 || fx > (g.nx - 1) as f64 || fy > (g.ny - 1) as f64 {
            return None;
        }
        let ix = (fx.floor() as usize).min(g.nx - 2);
        let iy = (fy.floor() as usize).min(g.ny - 2);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        let v00 = self.values[g.idx(ix, iy)];
        let v10 = self.values[g.idx(ix + 1, iy)];
        let v01 = self.values[g.idx(ix, iy + 1)];
        let v11 = self.values[g.idx(ix + 1, iy + 1)];
        Some(
            v00 * ((1.0 - tx) * (1.0 - ty))
                + v10 * (tx * (1.0 - ty))
                + v01 * ((1.0 - tx) * ty)
                + v11 * (tx * ty),
        )
    }
}

/// |E|² samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityMap {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl IntensityMap {
    pub fn max(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(*v))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    /// Bilinear interpolation; zero outside the sampled area.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let g = &self.grid;
        let fx = x / g.dx + (g.nx / 2) as f64;
        let fy = y / g.dy + (g.ny / 2) as f64;
        if fx < 0.0 || fy < 0.0 || fx > (g.nx - 1) as f64 || fy > (g.ny - 1) as f64 {
            return 0.0;
        }
        let ix = (fx.floor() as usize).min(g.nx - 2);
        let iy = (fy.floor() as usize).min(g.ny - 2);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        self.values[g.idx(ix, iy)] * (1.0 - tx) * (1.0 - ty)
            + self.values[g.idx(ix + 1, iy)] * tx * (1.0 - ty)
            + self.values[g.idx(ix, iy + 1)] * (1.0 - tx) * ty
            + self.values[g.idx(ix + 1, iy + 1)] * tx * ty
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>()
    }

    /// Intensity-weighted centroid (mm).
    pub fn centroid(&self) -> Option<(f64, f64)> {
        let total = self.total();
        if !(total > 0.0) {
            return None;
        }
        let (mut cx, mut cy) = (0.0, 0.0);
        for iy in 0..self.grid.ny {
            let y = self.grid.y(iy);
            for ix in 0..self.grid.nx {
                let w = self.values[self.grid.idx(ix, iy)];
                cx += w * self.grid.x(ix);
                cy += w * y;
            }
        }
        Some((cx / total, cy / total))
    }

    /// Central second moments (μ20, μ02, μ11) about the centroid, in mm².
    pub fn central_second_moments(&self) -> Option<(f64, f64, f64)> {
        let (cx, cy) = self.centroid()?;
        let total = self.total();
        let (mut m20, mut m02, mut m11) = (0.0, 0.0, 0.0);
        for iy in 0..self.grid.ny {
            let y = self.grid.y(iy) - cy;
            for ix in 0..self.grid.nx {
                let x = self.grid.x(ix) - cx;
                let w = self.values[self.grid.idx(ix, iy)];
                m20 += w * x * x;
                m02 += w * y * y;
                m11 += w * x * y;
            }
        }
        Some((m20 / total, m02 / total, m11 / total))
    }

    /// Second-moment beam widths (√(2⟨x²⟩), √(2⟨y²⟩)); equals w/√2 per axis
    /// for a fundamental Gaussian of waist w.
    pub fn second_moment_widths(&self) -> Option<(f64, f64)> {
        let (m20, m02, _) = self.central_second_moments()?;
        Some(((2.0 * m20).sqrt(), (2.0 * m02).sqrt()))
    }
}
