use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod serve;

/// Simulator for a three-wheel screen-reader navigation device.
#[derive(Debug, Parser)]
#[command(name = "wheeler", version)]
struct Cli {
    /// Device configuration (JSON with DeviceConfig fields).
    #[arg(long, global = true, env = "WHEELER_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replay an input script and write the full JSONL event log.
    Sim(SimArgs),
    /// Compare keyboard and wheel navigation cost between two nodes.
    Cost(CostArgs),
    /// Evaluate the movement-time model for one pointing movement.
    #[command(allow_negative_numbers = true)]
    Mt(MtArgs),
    /// Compute per-trial metrics from an event log.
    Analyze(AnalyzeArgs),
    /// Run the interactive session protocol.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Screen description; a blank 1366x768 screen when omitted.
    #[arg(long)]
    pub scene: Option<PathBuf>,
    #[arg(long)]
    pub script: PathBuf,
    /// Writes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Start with the wheels focused on this node.
    #[arg(long)]
    pub focus: Option<String>,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    /// Forward (first-child) move.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Backward move, to the parent or to ROOT.
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Cross move between siblings, also one wheel detent.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Level shift on the device; defaults to gamma.
    #[arg(long)]
    pub level_shift: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct MtArgs {
    /// Horizontal leg.
    #[arg(long, value_parser = positive)]
    pub a1: f64,
    /// Vertical leg.
    #[arg(long, value_parser = positive)]
    pub a2: f64,
    /// Target width.
    #[arg(long, value_parser = positive)]
    pub w: f64,
    /// Gain of the first-order lag; a number or `ln2`.
    #[arg(long, value_parser = gain, default_value = "ln2")]
    pub k: f64,
    /// Cursor speed factor for the sped-up rectilinear time.
    #[arg(long, value_parser = positive)]
    pub s: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub log: PathBuf,
    #[arg(long)]
    pub json: bool,
    /// Print the trajectory of this trial (0-based) instead of the metrics.
    #[arg(long)]
    pub trajectory: Option<usize>,
    /// With --trajectory, print CSV instead of JSON.
    #[arg(long, requires = "trajectory")]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// 0 picks a free port.
    #[arg(long, default_value_t = 7878)]
    pub port: u16,
    /// Serve a single session over stdin/stdout instead of a socket.
    #[arg(long)]
    pub stdio: bool,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn gain(s: &str) -> Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "ln2" | "ln(2)" => Ok(std::f64::consts::LN_2),
        _ => positive(s),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config::load(cli.config.as_deref()).and_then(|cfg| match cli.command {
        Command::Sim(a) => commands::sim(&a, cfg),
        Command::Cost(a) => commands::cost(&a),
        Command::Mt(a) => commands::mt(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Serve(a) => serve::run(&a, cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gain_accepts_ln2() {
        assert_eq!(gain("ln2"), Ok(std::f64::consts::LN_2));
        assert_eq!(gain("2.5"), Ok(2.5));
        assert!(gain("0").is_err());
        assert!(positive("-1").is_err());
        assert!(positive("nan").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
