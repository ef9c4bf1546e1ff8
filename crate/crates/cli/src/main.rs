//! `teleport`: runs the optomechanical teleportation scenarios and writes
//! `<run>.manifest.json` plus `<run>.results.csv`.

mod config;
mod error;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use teleport_core::analysis::fidelity_curve;
use teleport_core::protocol::{run_ideal, run_thermal, run_wcs, run_with_loss, LossScenario, ProtocolConfig, TeleportReport};

use config::{Amplitude, ConfigFile, ModelName, NormName};
use error::CliError;
use output::{curve_csv, results_csv, CurveRange, CurveRow, ResultsOut, RunManifest};

#[derive(Parser)]
#[command(name = "teleport", version, about = "Fock-space simulator for pulsed optomechanical teleportation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lossless run with single-photon sources and ground-state mechanics.
    Ideal(Common),
    /// Thermal mechanics with the given mean occupation.
    Thermal(Common),
    /// Weak coherent blue and resonant pulses.
    Wcs(Common),
    /// Nondetection loss, detection loss, or a two-photon blue pulse.
    Loss {
        #[arg(long, value_enum)]
        scenario: LossKind,
        /// Transmittance for the chosen scenario.
        #[arg(long = "T")]
        t: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fidelity and additional-term probability against mean occupation.
    Curve {
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 0.5)]
        end: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Re-run the scenario and config recorded in a manifest.
    Replay {
        manifest: PathBuf,
        #[command(flatten)]
        target: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LossKind {
    Nondetection,
    Detection,
    BlueTwoPhoton,
}

impl LossKind {
    fn scenario(self) -> LossScenario {
        match self {
            LossKind::Nondetection => LossScenario::NonDetection,
            LossKind::Detection => LossScenario::Detection,
            LossKind::BlueTwoPhoton => LossScenario::BlueTwoPhoton,
        }
    }
}

#[derive(Args, Default)]
struct OutputArgs {
    /// Directory for the manifest and CSV; without it the CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run name used in the file names; defaults to the scenario.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long)]
    nbar: Option<f64>,
    /// Blue pulse amplitude, `re` or `re,im`.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<Amplitude>,
    /// Resonant pulse amplitude, `re` or `re,im`.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<Amplitude>,
    #[arg(long = "T-nd")]
    t_nd: Option<f64>,
    #[arg(long = "T-det")]
    t_det: Option<f64>,
    #[arg(long)]
    p_dark: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, value_enum)]
    model: Option<ModelName>,
    #[arg(long)]
    pair_amplitude: Option<f64>,
    #[arg(long)]
    thermal_order: Option<usize>,
    #[arg(long, value_enum)]
    thermal_norm: Option<NormName>,
    #[command(flatten)]
    output: OutputArgs,
}

impl Common {
    fn flags(&self) -> ConfigFile {
        ConfigFile {
            theta: self.theta,
            phi: self.phi,
            nbar: self.nbar,
            alpha: self.alpha,
            beta: self.beta,
            t_nd: self.t_nd,
            t_det: self.t_det,
            p_dark: self.p_dark,
            n_max: self.n_max,
            model: self.model,
            pair_amplitude: self.pair_amplitude,
            thermal_order: self.thermal_order,
            thermal_norm: self.thermal_norm,
        }
    }

    fn resolve(&self, extra: ConfigFile) -> Result<ProtocolConfig, CliError> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let cfg = base.overlay(&self.flags()).overlay(&extra).resolve();
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A resolved run, ready to execute.
enum Job {
    Scenario { name: &'static str, cfg: ProtocolConfig },
    Curve { cfg: ProtocolConfig, range: CurveRange },
}

fn job_for(scenario: &str, cfg: ProtocolConfig, range: Option<CurveRange>) -> Result<Job, CliError> {
    let name = match scenario {
        "ideal" => "ideal",
        "thermal" => "thermal",
        "wcs" => "wcs",
        "nondetection" => "nondetection",
        "detection" => "detection",
        "blue_two_photon" => "blue_two_photon",
        "curve" => {
            let range = range.ok_or_else(|| CliError::Config("curve manifest without curve_range".into()))?;
            return Ok(Job::Curve { cfg, range });
        }
        other => return Err(CliError::Config(format!("unknown scenario {other:?}"))),
    };
    Ok(Job::Scenario { name, cfg })
}

fn run_scenario(name: &str, cfg: &ProtocolConfig) -> Result<TeleportReport, CliError> {
    Ok(match name {
        "ideal" => run_ideal(cfg)?,
        "thermal" => run_thermal(cfg)?,
        "wcs" => run_wcs(cfg)?,
        "nondetection" => run_with_loss(cfg, LossScenario::NonDetection)?,
        "detection" => run_with_loss(cfg, LossScenario::Detection)?,
        "blue_two_photon" => run_with_loss(cfg, LossScenario::BlueTwoPhoton)?,
        other => return Err(CliError::Config(format!("unknown scenario {other:?}"))),
    })
}

/// Sanity checks on a finished report.
fn check_report(r: &TeleportReport) -> Result<(), CliError> {
    const TOL: f64 = 1e-9;
    let pattern_sum = r.patterns.iter().fold(0.0, |a, p| a + p.weight);
    if !r.total_weight.is_finite() || r.total_weight > 1.0 + TOL || (pattern_sum - r.total_weight).abs() > TOL {
        return Err(CliError::Invariant(format!(
            "pattern weights sum to {pattern_sum}, total weight {}",
            r.total_weight
        )));
    }
    for c in &r.classes {
        if !(-TOL..=1.0 + TOL).contains(&c.weight) || !(-TOL..=1.0 + TOL).contains(&c.fidelity) {
            return Err(CliError::Invariant(format!(
                "{} has weight {} and fidelity {}",
                c.class.name(),
                c.weight,
                c.fidelity
            )));
        }
    }
    let closure = r.closure_error()?;
    if closure > TOL {
        return Err(CliError::Invariant(format!("fidelity + p_add deviates from 1 by {closure}")));
    }
    Ok(())
}

fn curve_grid(range: CurveRange) -> Result<Vec<f64>, CliError> {
    let CurveRange { start, end, step } = range;
    if !(start >= 0.0 && start < end && step > 0.0 && end.is_finite()) {
        return Err(CliError::Config(format!("empty range: start {start}, end {end}, step {step}")));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn execute(job: Job, target: &OutputArgs) -> Result<(), CliError> {
    let (scenario, cfg, results, curve, range, csv) = match job {
        Job::Scenario { name, cfg } => {
            let report = run_scenario(name, &cfg)?;
            check_report(&report)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            (name, cfg, Some(ResultsOut::from(&report)), None, None, results_csv(&report))
        }
        Job::Curve { cfg, range } => {
            let points = fidelity_curve(&curve_grid(range)?, Some(&cfg))?;
            let rows: Vec<CurveRow> = points.iter().map(CurveRow::from).collect();
            ("curve", cfg, None, Some(rows), Some(range), curve_csv(&points))
        }
    };
    let manifest = RunManifest {
        scenario: scenario.into(),
        engine_version: teleport_core::ENGINE_VERSION.into(),
        config: ConfigFile::echo(&cfg),
        results,
        curve_range: range,
        curve,
    };
    match &target.out {
        None => print!("{csv}"),
        Some(dir) => {
            let name = target.name.as_deref().unwrap_or(scenario);
            std::fs::create_dir_all(dir)?;
            let m = dir.join(format!("{name}.manifest.json"));
            let c = dir.join(format!("{name}.results.csv"));
            std::fs::write(&m, manifest.to_json())?;
            std::fs::write(&c, csv)?;
            println!("{}\n{}", m.display(), c.display());
        }
    }
    Ok(())
}

fn replay(path: &Path, target: &OutputArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let cfg = manifest.config.resolve();
    cfg.validate()?;
    execute(job_for(&manifest.scenario, cfg, manifest.curve_range)?, target)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ideal(c) => execute(job_for("ideal", c.resolve(ConfigFile::default())?, None)?, &c.output),
        Command::Thermal(c) => execute(job_for("thermal", c.resolve(ConfigFile::default())?, None)?, &c.output),
        Command::Wcs(c) => execute(job_for("wcs", c.resolve(ConfigFile::default())?, None)?, &c.output),
        Command::Loss { scenario, t, common } => {
            let extra = match scenario {
                LossKind::Detection => ConfigFile { t_det: t, ..Default::default() },
                _ => ConfigFile { t_nd: t, ..Default::default() },
            };
            let cfg = common.resolve(extra)?;
            execute(job_for(scenario.scenario().scenario().name(), cfg, None)?, &common.output)
        }
        Command::Curve { start, end, step, common } => {
            let range = CurveRange { start, end, step };
            curve_grid(range)?;
            execute(Job::Curve { cfg: common.resolve(ConfigFile::default())?, range }, &common.output)
        }
        Command::Replay { manifest, target } => replay(&manifest, &target),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
