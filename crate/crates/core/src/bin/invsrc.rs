use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spectral_inverse::experiment::{compare_energy, run_experiment, write_energy_table, ExperimentConfig, Overrides};
use spectral_inverse::Error;

/// Reconstruct cooling sources and verify them against a forward solver.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every (epsilon, l) cell and write CSV, SVG and JSON artifacts.
    Run(Common),
    /// Tabulate source and temperature norms across epsilon values.
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// key = value configuration file
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    operator: Option<String>,
    /// One value, or a comma-separated list to sweep
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Comma-separated truncation levels
    #[arg(long)]
    modes: Option<String>,
    /// Comma-separated snapshot times
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long)]
    space_n: Option<usize>,
    #[arg(long)]
    time_m: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    plots: Option<bool>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        cfg.apply(&Overrides {
            operator: self.operator.clone(),
            epsilon: self.epsilon.clone(),
            alpha: self.alpha,
            horizon: self.horizon,
            modes: self.modes.clone(),
            snapshots: self.snapshots.clone(),
            space_n: self.space_n,
            time_m: self.time_m,
            out: self.out.clone(),
            plots: self.plots,
        })?;
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.config()?;
            let run = run_experiment(&cfg)?;
            for cell in &run.cells {
                println!(
                    "{:<28} l = {:>3}  |f| = {:.6e}  terminal error = {:.3e}  {}",
                    cell.operator,
                    cell.modes,
                    cell.f_norm,
                    cell.report.terminal_error,
                    if cell.report.passed { "pass" } else { "FAIL" }
                );
            }
            println!("wrote {} files to {}", run.manifest.files.len(), cfg.output_dir.display());
            Ok(run.all_passed())
        }
        Command::Compare(args) => {
            let cfg = args.config()?;
            let table = compare_energy(&cfg)?;
            write_energy_table(&table, &cfg.output_dir)?;
            print!("{}", table.to_csv());
            Ok(table.rows.iter().all(|r| r.terminal_error <= cfg.tolerance))
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
