use std::io::Write;

use bloch_core::{gamma_to_mhz, LambdaSystem};
use rayon::prelude::*;

use crate::response::transmission;
use crate::{MediumSpec, SpectraError};

/// A sampled transmission spectrum T(δ) with the parameters that produced it.
///
/// `delta_gamma` is ordered (strictly increasing except for the degenerate
/// single-point range, where all samples coincide).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumScan {
    /// Two-photon detunings δ in units of Γ.
    pub delta_gamma: Vec<f64>,
    /// Transmission T(δ); T > 1 means gain.
    pub transmission: Vec<f64>,
    /// System template the scan was built from (its `delta_s` is overwritten
    /// point by point: Δ_S = Δ_C − δ at fixed Δ_C).
    pub system: LambdaSystem,
    pub medium: MediumSpec,
}

impl SpectrumScan {
    pub fn len(&self) -> usize {
        self.delta_gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta_gamma.is_empty()
    }

    pub fn validate(&self) -> Result<(), SpectraError> {
        if self.is_empty() {
            return Err(SpectraError::EmptyScan);
        }
        if self.delta_gamma.len() != self.transmission.len() {
            return Err(SpectraError::InvalidInput(
                "delta and transmission lengths differ".into(),
            ));
        }
        let degenerate = self.delta_gamma.iter().all(|d| d == &self.delta_gamma[0]);
        if !degenerate {
            for w in self.delta_gamma.windows(2) {
                if !(w[1] > w[0]) {
                    return Err(SpectraError::InvalidInput(format!(
                        "delta values not strictly increasing at {} → {}",
                        w[0], w[1]
                    )));
                }
            }
        }
        if self.transmission.iter().any(|t| !(t > &0.0)) {
            return Err(SpectraError::InvalidInput(
                "non-positive transmission".into(),
            ));
        }
        Ok(())
    }

    /// CSV export: `delta_MHz,delta_Gamma,transmission`, one row per sample.
    /// Values use shortest round-trip decimal formatting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "delta_MHz,delta_Gamma,transmission")?;
        for (d, t) in self.delta_gamma.iter().zip(&self.transmission) {
            writeln!(w, "{},{},{}", gamma_to_mhz(*d), d, t)?;
        }
        Ok(())
    }
}

fn delta_grid(range: (f64, f64), n_points: usize) -> Result<Vec<f64>, SpectraError> {
    let (lo, hi) = range;
    if n_points < 2 {
        return Err(SpectraError::InvalidInput(format!(
            "n_points must be ≥ 2, got {n_points}"
        )));
    }
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(SpectraError::InvalidInput(format!(
            "bad delta range [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / (n_points - 1) as f64;
    Ok((0..n_points).map(|i| lo + step * i as f64).collect())
}

/// Scan the two-photon detuning at fixed Δ_C (Δ_S = Δ_C − δ) and return
/// T(δ) on a uniform grid. Points are evaluated in parallel; each sample is
/// an independent pure computation, so the result is bit-identical to
/// [`scan_spectrum_serial`].
pub fn scan_spectrum(
    sys_template: &LambdaSystem,
    medium: &MediumSpec,
    delta_range: (f64, f64),
    n_points: usize,
) -> Result<SpectrumScan, SpectraError> {
    let deltas = delta_grid(delta_range, n_points)?;
    let transmission = deltas
        .par_iter()
        .map(|&delta| transmission(&sys_template.with_two_photon_detuning(delta), medium))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumScan {
        delta_gamma: deltas,
        transmission,
        system: *sys_template,
        medium: *medium,
    })
}

/// Single-threaded reference path for [`scan_spectrum`].
pub fn scan_spectrum_serial(
    sys_template: &LambdaSystem,
    medium: &MediumSpec,
    delta_range: (f64, f64),
    n_points: usize,
) -> Result<SpectrumScan, SpectraError> {
    let deltas = delta_grid(delta_range, n_points)?;
    let transmission = deltas
        .iter()
        .map(|&delta| transmission(&sys_template.with_two_photon_detuning(delta), medium))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumScan {
        delta_gamma: deltas,
        transmission,
        system: *sys_template,
        medium: *medium,
    })
}
