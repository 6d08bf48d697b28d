use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use tavis_core::simulate;
use tavis_sim::config::load_config;
use tavis_sim::figures::{write_figure, FigureName, FigureOptions};
use tavis_sim::output::{file_entry, time_series_csv, write_file, write_manifest, RunManifest};
use tavis_sim::verify::{run_checks, Outcome, VerifyOptions, DEFAULT_MAX_DIM, DEFAULT_SEED};
use tavis_sim::{configure_threads, CliError, Result};

/// Collapse and revival of qubit-register dynamics in a resonant cavity.
#[derive(Parser)]
#[command(name = "tavis-sim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a JSON scenario; writes <stem>.csv and <stem>.manifest.json.
    Run {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Write the data behind one of fig1, fig2, fig3, fig4, qfunc.
    Figure {
        name: String,
        #[arg(long)]
        nbar: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Comma-separated snapshot times in units of t_r (qfunc only).
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
        /// Scale Q by 1/π.
        #[arg(long)]
        pi_normalized: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compare block evolution and metrics against independent oracles.
    Verify {
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run(config_path: &Path, out: &Path) -> Result<()> {
    let config = load_config(config_path)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::Io {
        context: format!("cannot create {}", out.display()),
        source: e,
    })?;
    let stem = config_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    let start = Instant::now();
    let series = simulate::<f64>(&config)?;
    let csv_name = format!("{stem}.csv");
    write_file(&out.join(&csv_name), &time_series_csv(&series))?;
    let manifest = RunManifest {
        config: serde_json::to_value(&config).expect("config serializes"),
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration_seconds: start.elapsed().as_secs_f64(),
        files: vec![file_entry(out, &csv_name)?],
    };
    let manifest_path = out.join(format!("{stem}.manifest.json"));
    write_manifest(&manifest_path, &manifest)?;
    println!("{}", out.join(&csv_name).display());
    println!("{}", manifest_path.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Run { config, out } => run(&config, &out),
        Command::Figure {
            name,
            nbar,
            theta,
            samples,
            times,
            pi_normalized,
            out,
        } => {
            let name: FigureName = name.parse()?;
            let opts = FigureOptions {
                nbar,
                theta,
                samples,
                times,
                pi_normalized,
            };
            for path in write_figure(name, &opts, &out)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Verify {
            max_dim,
            seed,
            inject_fault,
        } => {
            let checks = run_checks(&VerifyOptions {
                max_dim,
                seed,
                inject_fault,
            })?;
            for check in &checks {
                println!("{}", check.line());
            }
            let failed = checks.iter().filter(|c| c.outcome == Outcome::Fail).count();
            if failed > 0 {
                return Err(CliError::VerifyFailed {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
