use num_complex::Complex64;

use crate::error::BlochError;

/// Slow-envelope density matrix σ of the Λ system.
///
/// Only the six independent components are stored; the conjugate coherences
/// (σ_ba, σ_bc, σ_ca) are derived, so the reconstructed matrix is Hermitian
/// by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub sigma_aa: f64,
    pub sigma_bb: f64,
    pub sigma_cc: f64,
    pub sigma_ab: Complex64,
    pub sigma_cb: Complex64,
    pub sigma_ac: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl DensityMatrix {
    /// Numerical tolerance for the physicality checks.
    pub const TOL: f64 = 1e-9;

    pub fn new(
        sigma_aa: f64,
        sigma_bb: f64,
        sigma_cc: f64,
        sigma_ab: Complex64,
        sigma_cb: Complex64,
        sigma_ac: Complex64,
    ) -> Self {
        DensityMatrix {
            sigma_aa,
            sigma_bb,
            sigma_cc,
            sigma_ab,
            sigma_cb,
            sigma_ac,
        }
    }

    pub fn ground_a() -> Self {
        DensityMatrix::new(1.0, 0.0, 0.0, ZERO, ZERO, ZERO)
    }

    pub fn excited_b() -> Self {
        DensityMatrix::new(0.0, 1.0, 0.0, ZERO, ZERO, ZERO)
    }

    pub fn ground_c() -> Self {
        DensityMatrix::new(0.0, 0.0, 1.0, ZERO, ZERO, ZERO)
    }

    pub fn trace(&self) -> f64 {
        self.sigma_aa + self.sigma_bb + self.sigma_cc
    }

    pub fn sigma_ba(&self) -> Complex64 {
        self.sigma_ab.conj()
    }

    pub fn sigma_bc(&self) -> Complex64 {
        self.sigma_cb.conj()
    }

    pub fn sigma_ca(&self) -> Complex64 {
        self.sigma_ac.conj()
    }

    /// Full 3×3 matrix in the basis (|a⟩, |b⟩, |c⟩); Hermitian by construction.
    pub fn full_matrix(&self) -> [[Complex64; 3]; 3] {
        [
            [self.sigma_aa.into(), self.sigma_ab, self.sigma_ac],
            [self.sigma_ba(), self.sigma_bb.into(), self.sigma_bc()],
            [self.sigma_ca(), self.sigma_cb, self.sigma_cc.into()],
        ]
    }

    /// Largest absolute componentwise difference over the six stored entries.
    pub fn max_component_distance(&self, other: &DensityMatrix) -> f64 {
        let mut d: f64 = 0.0;
        d = d.max((self.sigma_aa - other.sigma_aa).abs());
        d = d.max((self.sigma_bb - other.sigma_bb).abs());
        d = d.max((self.sigma_cc - other.sigma_cc).abs());
        for (x, y) in [
            (self.sigma_ab, other.sigma_ab),
            (self.sigma_cb, other.sigma_cb),
            (self.sigma_ac, other.sigma_ac),
        ] {
            d = d.max((x.re - y.re).abs());
            d = d.max((x.im - y.im).abs());
        }
        d
    }

    /// Physicality checks: populations in [0, 1], unit trace, and the
    /// Cauchy-Schwarz bound |σ_ij|² ≤ σ_ii σ_jj, all within [`Self::TOL`].
    pub fn validate(&self) -> Result<(), BlochError> {
        let tol = Self::TOL;
        for (name, p) in [
            ("sigma_aa", self.sigma_aa),
            ("sigma_bb", self.sigma_bb),
            ("sigma_cc", self.sigma_cc),
        ] {
            if !p.is_finite() || p < -tol || p > 1.0 + tol {
                return Err(BlochError::invalid(
                    "population",
                    format!("{name} = {p} outside [0, 1] (tol {tol})"),
                ));
            }
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > tol {
            return Err(BlochError::invalid(
                "trace",
                format!("trace = {trace}, expected 1 within {tol}"),
            ));
        }
        for (name, c, pi, pj) in [
            ("sigma_ab", self.sigma_ab, self.sigma_aa, self.sigma_bb),
            ("sigma_cb", self.sigma_cb, self.sigma_cc, self.sigma_bb),
            ("sigma_ac", self.sigma_ac, self.sigma_aa, self.sigma_cc),
        ] {
            if c.norm_sqr() > pi * pj + tol {
                return Err(BlochError::invalid(
                    "coherence",
                    format!(
                        "|{name}|² = {} exceeds σ_ii σ_jj = {} (tol {tol})",
                        c.norm_sqr(),
                        pi * pj
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Time derivative of the six independent density-matrix components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaDot {
    pub d_aa: f64,
    pub d_bb: f64,
    pub d_cc: f64,
    pub d_ab: Complex64,
    pub d_cb: Complex64,
    pub d_ac: Complex64,
}

impl SigmaDot {
    /// ‖dσ/dt‖∞ over all real and imaginary parts.
    pub fn inf_norm(&self) -> f64 {
        let mut n: f64 = 0.0;
        for v in [self.d_aa, self.d_bb, self.d_cc] {
            n = n.max(v.abs());
        }
        for c in [self.d_ab, self.d_cb, self.d_ac] {
            n = n.max(c.re.abs());
            n = n.max(c.im.abs());
        }
        n
    }

    /// Sum of the population derivatives; zero for a trace-preserving flow.
    pub fn population_sum(&self) -> f64 {
        (self.d_aa + self.d_cc) + self.d_bb
    }
}
