use crate::BeamError;

/// Uniform transverse sampling grid, origin at the centre sample
/// (index nx/2, ny/2). Sample counts are powers of two so the spectral
/// propagator can always transform in place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    /// Sample pitch in mm.
    pub dx: f64,
    pub dy: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64) -> Result<Self, BeamError> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 64 || !n.is_power_of_two() {
                return Err(BeamError::InvalidGrid(format!(
                    "{name} must be a power of two ≥ 64, got {n}"
                )));
            }
        }
        for (name, d) in [("dx", dx), ("dy", dy)] {
            if !d.is_finite() || d <= 0.0 {
                return Err(BeamError::InvalidGrid(format!(
                    "{name} must be finite and > 0, got {d}"
                )));
            }
        }
        Ok(Grid2D { nx, ny, dx, dy })
    }

    /// Square grid of `n`×`n` samples covering `window` mm on each side.
    pub fn square(n: usize, window: f64) -> Result<Self, BeamError> {
        if !window.is_finite() || window <= 0.0 {
            return Err(BeamError::InvalidGrid(format!(
                "window must be finite and > 0, got {window}"
            )));
        }
        let d = window / n as f64;
        Grid2D::new(n, n, d, d)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn x(&self, ix: usize) -> f64 {
        (ix as isize - (self.nx / 2) as isize) as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, iy: usize) -> f64 {
        (iy as isize - (self.ny / 2) as isize) as f64 * self.dy
    }

    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn span_x(&self) -> f64 {
        self.nx as f64 * self.dx
    }

    pub fn span_y(&self) -> f64 {
        self.ny as f64 * self.dy
    }

    /// Pixel area dx·dy in mm².
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_sample_is_origin() {
        let g = Grid2D::square(128, 12.8).unwrap();
        assert_eq!(g.x(64), 0.0);
        assert_eq!(g.y(64), 0.0);
        assert_eq!(g.x(0), -6.4);
        assert!((g.span_x() - 12.8).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Grid2D::new(100, 128, 0.01, 0.01).is_err()); // not a power of two
        assert!(Grid2D::new(32, 128, 0.01, 0.01).is_err()); // too small
        assert!(Grid2D::new(128, 128, 0.0, 0.01).is_err());
        assert!(Grid2D::square(128, -1.0).is_err());
    }
}
