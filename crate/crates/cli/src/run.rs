use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use beam_optics::{
    apply_gain_medium, count_fringes, decompose_lg, lg_field, phase_winding, tilted_lens_transform,
    write_pgm16, write_raw_field, ComplexField2D, GainMedium, Grid2D, LgIndex,
};
use bloch_core::{
    full_steady_state, integrate_to_steady_state, BlochError, Complex64, DensityMatrix,
    LambdaSystem,
};
use spectra::{analyze_peak, scan_spectrum, MediumSpec};

use crate::config::RunConfig;
use crate::summary::{BeamGainOut, RunSummary, SpectrumOut, SteadyStateOut, TiltedLensOut};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    SteadyState,
    Spectrum,
    BeamGain,
    TiltedLens,
    FullPipeline,
}

impl RunMode {
    pub fn name(&self) -> &'static str {
        match self {
            RunMode::SteadyState => "steady-state",
            RunMode::Spectrum => "spectrum",
            RunMode::BeamGain => "beam-gain",
            RunMode::TiltedLens => "tilted-lens",
            RunMode::FullPipeline => "full-pipeline",
        }
    }
}

/// Runtime failure (solver, propagation, I/O): exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{stage}: {message}")]
pub struct RunError {
    pub stage: String,
    pub message: String,
}

impl RunConfig {
    pub fn lambda_system(&self) -> LambdaSystem {
        LambdaSystem::symmetric(
            self.omega_c,
            Complex64::new(self.omega_s, 0.0),
            self.gamma_p,
            self.delta_c,
            self.delta_c - self.delta,
        )
    }

    fn medium_spec(&self) -> MediumSpec {
        MediumSpec {
            optical_density: self.optical_density,
        }
    }

    fn gain_medium(&self) -> GainMedium {
        GainMedium::new(
            self.optical_density,
            self.coupling_waist,
            self.omega_c,
            self.lambda_system(),
        )
    }

    fn grid(&self) -> Result<Grid2D, beam_optics::BeamError> {
        Grid2D::square(self.grid_n, self.grid_window)
    }

    /// Radius for the phase-winding probe: the ring radius w√(|ℓ|/2), or the
    /// waist itself for a fundamental beam.
    fn winding_radius(&self) -> f64 {
        if self.ell == 0 {
            self.waist
        } else {
            self.waist * (self.ell.unsigned_abs() as f64 / 2.0).sqrt()
        }
    }
}

struct Stages<'a> {
    timings: &'a mut BTreeMap<String, f64>,
}

impl Stages<'_> {
    fn time<T, E: std::fmt::Display>(
        &mut self,
        stage: &str,
        f: impl FnOnce() -> Result<T, E>,
    ) -> Result<T, RunError> {
        let start = Instant::now();
        let out = f();
        self.timings
            .insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out.map_err(|e| RunError {
            stage: stage.to_string(),
            message: e.to_string(),
        })
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.to_path_buf();
    tmp.set_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn save_pgm(
    stages: &mut Stages,
    summary: &mut RunSummary,
    dir: &Path,
    name: &str,
    field: &ComplexField2D,
) -> Result<(), RunError> {
    stages.time(&format!("write:{name}"), || -> std::io::Result<()> {
        let mut buf = Vec::new();
        write_pgm16(&mut buf, &field.intensity())?;
        write_atomic(&dir.join(name), &buf)
    })?;
    summary.artifacts.push(name.to_string());
    Ok(())
}

fn save_raw(
    stages: &mut Stages,
    summary: &mut RunSummary,
    dir: &Path,
    name: &str,
    field: &ComplexField2D,
) -> Result<(), RunError> {
    stages.time(&format!("write:{name}"), || -> std::io::Result<()> {
        let mut buf = Vec::new();
        write_raw_field(&mut buf, field)?;
        write_atomic(&dir.join(name), &buf)
    })?;
    summary.artifacts.push(name.to_string());
    Ok(())
}

/// Execute one mode and report into a always-complete summary; the `Err`
/// side only classifies the exit code, the details live in the summary.
pub fn run(
    mode: RunMode,
    cfg: &RunConfig,
    defaulted: Vec<String>,
    out_dir: &Path,
) -> (RunSummary, Result<(), RunError>) {
    let config_echo: BTreeMap<String, String> = cfg.canonical_lines().into_iter().collect();
    let mut summary = RunSummary::new(mode.name(), config_echo, defaulted);

    let result = execute(mode, cfg, out_dir, &mut summary);
    if let Err(e) = &result {
        summary.status = "failed".to_string();
        summary.failed_stage = Some(e.stage.clone());
        summary.error = Some(e.message.clone());
    }
    (summary, result)
}

fn execute(
    mode: RunMode,
    cfg: &RunConfig,
    out_dir: &Path,
    summary: &mut RunSummary,
) -> Result<(), RunError> {
    let mut timings = std::mem::take(&mut summary.timings_ms);
    let mut stages = Stages {
        timings: &mut timings,
    };

    let outcome = match mode {
        RunMode::SteadyState => steady_state_mode(cfg, &mut stages, summary),
        RunMode::Spectrum => spectrum_mode(cfg, out_dir, &mut stages, summary),
        RunMode::BeamGain => beam_mode(cfg, out_dir, &mut stages, summary, false),
        RunMode::TiltedLens => tilted_lens_mode(cfg, out_dir, &mut stages, summary),
        RunMode::FullPipeline => beam_mode(cfg, out_dir, &mut stages, summary, true),
    };

    summary.timings_ms = timings;
    outcome
}

fn steady_state_mode(
    cfg: &RunConfig,
    stages: &mut Stages,
    summary: &mut RunSummary,
) -> Result<(), RunError> {
    let sys = cfg.lambda_system();
    let (rho, solver_path, note) = stages.time("solve", || -> Result<_, BlochError> {
        match full_steady_state(&sys) {
            Ok(rho) => Ok((rho, "direct".to_string(), None)),
            Err(BlochError::SingularSystem { reason }) => {
                let out = integrate_to_steady_state(&sys, &DensityMatrix::ground_a(), 2e5, 1e-8)?;
                Ok((
                    out.state,
                    "dark-state-ode-fallback".to_string(),
                    Some(format!(
                        "linear solve refused ({reason}); integrated from |a⟩ to t = {:.1} (residual {:.2e})",
                        out.t_final, out.residual
                    )),
                ))
            }
            Err(e) => Err(e),
        }
    })?;

    summary.results.steady_state = Some(SteadyStateOut {
        solver_path,
        note,
        sigma_aa: rho.sigma_aa,
        sigma_bb: rho.sigma_bb,
        sigma_cc: rho.sigma_cc,
        sigma_ab: [rho.sigma_ab.re, rho.sigma_ab.im],
        sigma_cb: [rho.sigma_cb.re, rho.sigma_cb.im],
        sigma_ac: [rho.sigma_ac.re, rho.sigma_ac.im],
    });
    Ok(())
}

fn spectrum_mode(
    cfg: &RunConfig,
    out_dir: &Path,
    stages: &mut Stages,
    summary: &mut RunSummary,
) -> Result<(), RunError> {
    let sys = cfg.lambda_system();
    let medium = cfg.medium_spec();
    let scan = stages.time("scan", || {
        scan_spectrum(
            &sys,
            &medium,
            (cfg.scan_delta_min, cfg.scan_delta_max),
            cfg.scan_points,
        )
    })?;
    let report = stages.time("analyze", || analyze_peak(&scan))?;

    stages.time("write:spectrum.csv", || -> std::io::Result<()> {
        let mut buf = Vec::new();
        scan.write_csv(&mut buf)?;
        write_atomic(&out_dir.join("spectrum.csv"), &buf)
    })?;
    summary.artifacts.push("spectrum.csv".to_string());

    summary.results.spectrum = Some(SpectrumOut {
        peak_delta_gamma: report.peak_delta_gamma,
        peak_delta_mhz: report.peak_delta_mhz,
        peak_transmission: report.peak_transmission,
        is_gain: report.is_gain,
        fwhm_gamma: report.fwhm_gamma,
        fwhm_mhz: report.fwhm_mhz,
    });
    Ok(())
}

fn tilted_lens_mode(
    cfg: &RunConfig,
    out_dir: &Path,
    stages: &mut Stages,
    summary: &mut RunSummary,
) -> Result<(), RunError> {
    let grid = cfg.grid().map_err(|e| RunError {
        stage: "grid".into(),
        message: e.to_string(),
    })?;
    let field = stages.time("synthesize", || {
        lg_field(&grid, LgIndex::new(cfg.ell, cfg.p), cfg.waist, cfg.power)
    })?;
    let observed = stages.time("tilted-lens", || {
        tilted_lens_transform(
            &field,
            cfg.focal,
            cfg.tilt_deg.to_radians(),
            cfg.observe_z.expect("config finalized"),
        )
    })?;
    save_pgm(
        stages,
        summary,
        out_dir,
        "diagnostic_intensity.pgm",
        &observed,
    )?;
    let report = stages.time("count-fringes", || count_fringes(&observed.intensity()))?;

    summary.results.tilted_lens = Some(TiltedLensOut {
        bright_fringes: report.bright_fringes,
        tilt_sign: report.tilt_sign,
        inferred_ell: report.inferred_ell,
        dominant_mode_fraction: None,
    });
    Ok(())
}

/// Beam amplification; with `diagnose` set this is the full pipeline:
/// synthesize → amplify → tilted lens → count fringes → decompose.
fn beam_mode(
    cfg: &RunConfig,
    out_dir: &Path,
    stages: &mut Stages,
    summary: &mut RunSummary,
    diagnose: bool,
) -> Result<(), RunError> {
    let grid = cfg.grid().map_err(|e| RunError {
        stage: "grid".into(),
        message: e.to_string(),
    })?;
    let field = stages.time("synthesize", || {
        lg_field(&grid, LgIndex::new(cfg.ell, cfg.p), cfg.waist, cfg.power)
    })?;
    save_pgm(stages, summary, out_dir, "input_intensity.pgm", &field)?;

    let medium = cfg.gain_medium();
    let amplified = stages.time("gain", || apply_gain_medium(&field, &medium))?;
    save_pgm(
        stages,
        summary,
        out_dir,
        "amplified_intensity.pgm",
        &amplified,
    )?;
    save_raw(stages, summary, out_dir, "amplified_field.raw", &amplified)?;

    let winding = stages.time("phase-winding", || {
        phase_winding(&amplified, cfg.winding_radius())
    })?;
    let table = stages.time("decompose", || {
        decompose_lg(&amplified, cfg.waist, cfg.max_ell, cfg.max_p)
    })?;
    let (dominant_ell, dominant_fraction) = table.dominant_ell();

    summary.results.beam_gain = Some(BeamGainOut {
        power_in: field.power(),
        power_out: amplified.power(),
        power_gain: amplified.power() / field.power(),
        phase_winding: winding,
        dominant_ell,
        dominant_ell_fraction: dominant_fraction,
        captured_fraction: table.total(),
        thin_slab_ratio: medium.thin_slab_ratio(cfg.waist, amplified.wavelength),
    });

    if diagnose {
        let observed = stages.time("tilted-lens", || {
            tilted_lens_transform(
                &amplified,
                cfg.focal,
                cfg.tilt_deg.to_radians(),
                cfg.observe_z.expect("config finalized"),
            )
        })?;
        save_pgm(
            stages,
            summary,
            out_dir,
            "diagnostic_intensity.pgm",
            &observed,
        )?;
        let report = stages.time("count-fringes", || count_fringes(&observed.intensity()))?;
        summary.results.tilted_lens = Some(TiltedLensOut {
            bright_fringes: report.bright_fringes,
            tilt_sign: report.tilt_sign,
            inferred_ell: report.inferred_ell,
            dominant_mode_fraction: Some(dominant_fraction),
        });
    }
    Ok(())
}

/// Output directory + summary writing shared by `main`.
pub fn write_summary(out_dir: &Path, summary: &RunSummary) -> std::io::Result<PathBuf> {
    let path = out_dir.join("summary.json");
    write_atomic(&path, summary.to_json().as_bytes())?;
    Ok(path)
}
