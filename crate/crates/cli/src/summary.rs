use std::collections::BTreeMap;

use serde::Serialize;

/// Machine-readable run record: resolved configuration echo, per-mode
/// results, stage timings and exit status. Written as JSON next to the
/// artifacts; complete even when a stage fails.
#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub tool: &'static str,
    pub version: &'static str,
    pub mode: &'static str,
    /// Canonical `key → value` echo of the fully resolved config, every key
    /// present whether defaulted or not.
    pub config: BTreeMap<String, String>,
    /// Keys that kept their documented default.
    pub defaulted_keys: Vec<String>,
    pub results: Results,
    /// Artifact file names written to the output directory.
    pub artifacts: Vec<String>,
    pub timings_ms: BTreeMap<String, f64>,
    /// `ok` or `failed`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Default, Serialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_state: Option<SteadyStateOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beam_gain: Option<BeamGainOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tilted_lens: Option<TiltedLensOut>,
}

#[derive(Debug, Serialize)]
pub struct SteadyStateOut {
    /// `direct` for the linear solve, `dark-state-ode-fallback` when the
    /// degenerate Γ_P = 0, δ = 0 point forced time integration.
    pub solver_path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub sigma_aa: f64,
    pub sigma_bb: f64,
    pub sigma_cc: f64,
    pub sigma_ab: [f64; 2],
    pub sigma_cb: [f64; 2],
    pub sigma_ac: [f64; 2],
}

#[derive(Debug, Serialize)]
pub struct SpectrumOut {
    pub peak_delta_gamma: f64,
    pub peak_delta_mhz: f64,
    pub peak_transmission: f64,
    pub is_gain: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fwhm_gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fwhm_mhz: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct BeamGainOut {
    pub power_in: f64,
    pub power_out: f64,
    pub power_gain: f64,
    pub phase_winding: f64,
    pub dominant_ell: i32,
    pub dominant_ell_fraction: f64,
    /// Power fraction captured by the whole decomposition basis.
    pub captured_fraction: f64,
    /// Slab length over signal Rayleigh range (thin-slab validity; small is
    /// good).
    pub thin_slab_ratio: f64,
}

#[derive(Debug, Serialize)]
pub struct TiltedLensOut {
    pub bright_fringes: usize,
    pub tilt_sign: i32,
    pub inferred_ell: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant_mode_fraction: Option<f64>,
}

impl RunSummary {
    pub fn new(
        mode: &'static str,
        config: BTreeMap<String, String>,
        defaulted: Vec<String>,
    ) -> Self {
        RunSummary {
            tool: "ramansim",
            version: env!("CARGO_PKG_VERSION"),
            mode,
            config,
            defaulted_keys: defaulted,
            results: Results::default(),
            artifacts: Vec::new(),
            timings_ms: BTreeMap::new(),
            status: "ok".to_string(),
            failed_stage: None,
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialization cannot fail")
    }
}
