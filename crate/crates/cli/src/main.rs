mod config;
mod run;
mod summary;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{apply_overrides, parse_config};
use run::{run, write_summary, RunMode};

/// Raman amplification of optical vortex beams in a pumped Λ medium:
/// steady states, gain spectra, thin-slab beam amplification and
/// tilted-lens topological-charge diagnostics.
#[derive(Parser)]
#[command(name = "ramansim", version, about)]
struct Cli {
    #[command(subcommand)]
    mode: ModeCommand,
}

#[derive(Subcommand)]
enum ModeCommand {
    /// Solve the driven Λ system's steady state at one detuning point.
    SteadyState(RunArgs),
    /// Scan the two-photon detuning and extract the gain peak and width.
    Spectrum(RunArgs),
    /// Amplify an LG beam through the thin slab and decompose the output.
    BeamGain(RunArgs),
    /// Image a synthesized beam through the tilted lens and count fringes.
    TiltedLens(RunArgs),
    /// Synthesize → amplify → tilted lens → fringe count → decomposition.
    FullPipeline(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file (`key = value`, `#` comments); defaults apply
    /// when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for artifacts and summary.json.
    #[arg(long)]
    out: PathBuf,
    /// Config overrides applied after the file, e.g. --override "beam.ell=3".
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.mode {
        ModeCommand::SteadyState(a) => (RunMode::SteadyState, a),
        ModeCommand::Spectrum(a) => (RunMode::Spectrum, a),
        ModeCommand::BeamGain(a) => (RunMode::BeamGain, a),
        ModeCommand::TiltedLens(a) => (RunMode::TiltedLens, a),
        ModeCommand::FullPipeline(a) => (RunMode::FullPipeline, a),
    };

    let text = match &args.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("ramansim: cannot read config {}: {e}", path.display());
                return ExitCode::from(EXIT_VALIDATION);
            }
        },
        None => String::new(),
    };

    let (mut cfg, mut defaulted) = match parse_config(&text) {
        Ok(parsed) => parsed,
        Err(e) => {
            eprintln!("ramansim: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    if let Err(e) = apply_overrides(&mut cfg, &mut defaulted, &args.overrides) {
        eprintln!("ramansim: {e}");
        return ExitCode::from(EXIT_VALIDATION);
    }

    if let Err(e) = fs::create_dir_all(&args.out) {
        eprintln!("ramansim: cannot create output directory: {e}");
        return ExitCode::from(EXIT_RUNTIME);
    }

    let (summary, result) = run(mode, &cfg, defaulted, &args.out);
    match write_summary(&args.out, &summary) {
        Ok(path) => println!("{}", path.display()),
        Err(e) => {
            eprintln!("ramansim: cannot write summary: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ramansim: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
