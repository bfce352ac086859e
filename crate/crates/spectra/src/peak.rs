use bloch_core::gamma_to_mhz;

use crate::scan::SpectrumScan;
use crate::SpectraError;

/// Gain-peak metrics extracted from a transmission scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    /// δ at the transmission maximum, in units of Γ.
    pub peak_delta_gamma: f64,
    pub peak_delta_mhz: f64,
    pub peak_transmission: f64,
    /// Whether the maximum exceeds unity (gain present).
    pub is_gain: bool,
    /// Full width at half maximum of T − 1 around the peak, in Γ units;
    /// `None` when there is no gain.
    pub fwhm_gamma: Option<f64>,
    pub fwhm_mhz: Option<f64>,
}

/// Locate the global transmission maximum and, if it exceeds unity, measure
/// the FWHM of T − 1 by linear interpolation between samples. Half-level
/// crossings that run off the scanned range are clamped to the range edge.
pub fn analyze_peak(scan: &SpectrumScan) -> Result<PeakReport, SpectraError> {
    if scan.is_empty() {
        return Err(SpectraError::EmptyScan);
    }
    let (ipk, tpk) = scan
        .transmission
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, t)| (i, *t))
        .unwrap();
    let peak_delta = scan.delta_gamma[ipk];
    let is_gain = tpk > 1.0;

    let fwhm = if is_gain {
        let half = 0.5 * (tpk - 1.0);
        let gain_at = |i: usize| scan.transmission[i] - 1.0;

        // Walk outward from the peak to the first samples below half level
        // and interpolate the crossing positions.
        let mut left = scan.delta_gamma[0];
        for i in (0..ipk).rev() {
            if gain_at(i) < half {
                let frac = (half - gain_at(i)) / (gain_at(i + 1) - gain_at(i));
                left = scan.delta_gamma[i] + frac * (scan.delta_gamma[i + 1] - scan.delta_gamma[i]);
                break;
            }
        }
        let mut right = scan.delta_gamma[scan.len() - 1];
        for i in ipk + 1..scan.len() {
            if gain_at(i) < half {
                let frac = (gain_at(i - 1) - half) / (gain_at(i - 1) - gain_at(i));
                right = scan.delta_gamma[i - 1]
                    + frac * (scan.delta_gamma[i] - scan.delta_gamma[i - 1]);
                break;
            }
        }
        Some(right - left)
    } else {
        None
    };

    Ok(PeakReport {
        peak_delta_gamma: peak_delta,
        peak_delta_mhz: gamma_to_mhz(peak_delta),
        peak_transmission: tpk,
        is_gain,
        fwhm_gamma: fwhm,
        fwhm_mhz: fwhm.map(gamma_to_mhz),
    })
}
