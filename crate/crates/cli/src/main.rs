//! `fractal-eigen`: simulate, estimate and Monte Carlo front end.
//!
//! Exit codes: 0 on success, 2 for configuration or input errors, 3 for
//! numerical failures. Failures print one JSON object on standard error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fractal_eigen::commands::{cmd_estimate, cmd_mc, cmd_simulate};
use fractal_eigen::config::{preset, Preset, RunConfig};
use fractal_eigen::par::default_workers;
use fractal_eigen::Error;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "fractal-eigen",
    version,
    about = "Wavelet eigenvalue regression for high-dimensional fractal series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize one realization of Y = P X + Z.
    Simulate(Common),
    /// Estimate Hurst exponents and the effective dimension of a series.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Series file (.csv or the binary layout); overrides io.data.
        #[arg(long, value_name = "PATH")]
        data: Option<PathBuf>,
        #[arg(long)]
        j1: Option<u32>,
        #[arg(long)]
        j2: Option<u32>,
        /// Latent dimension for the Hurst block; r-hat is used when absent.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Run a Monte Carlo study.
    Mc(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in study configuration.
    #[arg(long, value_parser = Preset::NAMES)]
    preset: Option<String>,
    /// Master seed; overrides mc.seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Number of replications; overrides mc.replications.
    #[arg(long, value_name = "M")]
    reps: Option<usize>,
    /// Threshold for r-hat; overrides analysis.kappa.
    #[arg(long, value_name = "F")]
    kappa: Option<f64>,
    /// Output directory; overrides io.out_dir.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self, allow_empty: bool) -> Result<RunConfig, Error> {
        let mut config = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter {
                    name: "config".into(),
                    reason: format!("cannot read {}: {e}", path.display()),
                })?;
                RunConfig::from_json(&text)?
            }
            (None, Some(name)) => preset(Preset::from_name(name)?),
            (None, None) if allow_empty => RunConfig::from_json("{}")?,
            (None, None) => {
                return Err(Error::InvalidParameter {
                    name: "config".into(),
                    reason: "one of --config or --preset is required".into(),
                })
            }
        };
        if let Some(seed) = self.seed {
            config.mc.seed = seed;
        }
        if let Some(reps) = self.reps {
            config.mc.replications = reps;
        }
        if let Some(kappa) = self.kappa {
            config.analysis.kappa = kappa;
        }
        if let Some(out) = &self.out {
            config.io.out_dir = out.display().to_string();
        }
        Ok(config)
    }

    fn workers(&self) -> usize {
        self.workers.unwrap_or_else(default_workers).max(1)
    }
}

fn run(cli: Cli) -> Result<serde_json::Value, Error> {
    let report = match cli.command {
        Command::Simulate(common) => cmd_simulate(&common.load(false)?)?,
        Command::Estimate {
            common,
            data,
            j1,
            j2,
            r,
        } => {
            let mut config = common.load(data.is_some())?;
            if let Some(path) = data {
                config.io.data = Some(path.display().to_string());
            }
            config.analysis.j1 = j1.or(config.analysis.j1);
            config.analysis.j2 = j2.or(config.analysis.j2);
            config.analysis.r = r.or(config.analysis.r);
            cmd_estimate(&config)?
        }
        Command::Mc(common) => {
            let workers = common.workers();
            cmd_mc(&common.load(false)?, workers)?
        }
    };
    Ok(report.to_json())
}

fn error_json(e: &Error) -> serde_json::Value {
    let mut v = json!({
        "status": "error",
        "kind": e.kind(),
        "message": e.to_string(),
    });
    match e {
        Error::InvalidParameter { name, .. } => v["field"] = json!(name),
        Error::InfeasibleOctave {
            requested,
            last_feasible,
            ..
        } => {
            v["requested_octave"] = json!(requested);
            v["last_feasible_octave"] = json!(last_feasible);
        }
        _ => {}
    }
    v
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!(
                "{}",
                json!({ "status": "error", "kind": "usage", "message": first })
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}
