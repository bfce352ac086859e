//! Transverse optical fields for the Raman-gain experiment: Laguerre-Gauss
//! mode synthesis, band-limited angular-spectrum propagation, the thin-slab
//! complex gain mask of the pumped Λ medium, and topological-charge
//! diagnostics (tilted-lens fringe counting, phase winding, modal
//! decomposition).
//!
//! Lengths are in millimetres; the default wavelength is the cesium D2 line,
//! 852 nm.

mod diagnostics;
mod field;
mod fourier;
mod gain;
mod grid;
mod io;
mod modes;
mod propagate;

pub use diagnostics::{
    count_fringes, count_fringes_with, phase_winding, ChargeReport, FringeConfig,
};
pub use field::{ComplexField2D, IntensityMap};
pub use gain::{apply_gain_medium, GainMedium, PumpProfile};
pub use grid::Grid2D;
pub use io::{read_raw_field, write_pgm16, write_raw_field};
pub use modes::{decompose_lg, gaussian_field, lg_field, LgIndex, ModeDecomposition, ModePower};
pub use propagate::{astigmatic_midpoint, propagate, tilted_lens_transform};

pub use num_complex::Complex64;

/// Cesium D2 wavelength in millimetres.
pub const DEFAULT_WAVELENGTH_MM: f64 = 852e-6;

#[derive(Debug, thiserror::Error)]
pub enum BeamError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("under-resolved field: {0}")]
    Resolution(String),
    #[error("propagation kernel under-sampled: {0}")]
    Aliasing(String),
    #[error("no fringe clears the contrast thresholds")]
    LowContrast,
    #[error("phase undefined: intensity on the sampling circle below the noise floor")]
    UndefinedPhase,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("gain evaluation failed at sample ({ix}, {iy}) = ({x} mm, {y} mm): {source}")]
    GainSample {
        ix: usize,
        iy: usize,
        x: f64,
        y: f64,
        source: spectra::SpectraError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
