use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use srcseek::equilibria::equilibrium_report;
use srcseek::harness::export::{write_averaged_csv, write_file, write_json, write_trajectory_csv};
use srcseek::harness::{integrate_averaged, monte_carlo, report, run_scenario, validate_averaging, Scenario};
use srcseek::stability::stability_report;
use srcseek::{Result, SeekError};

#[derive(Parser)]
#[command(name = "srcseek", version, about = "Stochastic extremum-seeking source localization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one run: trajectory.csv and metrics.json.
    Simulate(Common),
    /// Monte Carlo ensemble: monte_carlo.json.
    MonteCarlo {
        #[command(flatten)]
        common: Common,
        /// Override the number of runs.
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Integrate the averaged ODE from the lifted initial condition: averaged.csv.
    Average {
        #[command(flatten)]
        common: Common,
        /// Horizon (defaults to the scenario's).
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Recording interval.
        #[arg(long, default_value_t = 0.01)]
        every: f64,
    },
    /// Closed-form equilibria, gammas and thresholds: equilibria.json.
    Equilibria(Common),
    /// Jacobians, Hurwitz verdicts and hypothesis checks: stability.json.
    Stability(Common),
    /// Ensemble mean vs averaged ODE across eps values: averaging.json.
    ValidateAveraging(Common),
    /// Combined analysis and one simulated run: report.json.
    Report {
        #[command(flatten)]
        common: Common,
        /// Skip the simulation.
        #[arg(long)]
        no_sim: bool,
    },
}

fn load(c: &Common) -> Result<Scenario> {
    let mut s = Scenario::load(&c.config)?;
    if let Some(seed) = c.seed {
        s = s.with_seed(seed);
    }
    std::fs::create_dir_all(&c.out)?;
    Ok(s)
}

fn out(c: &Common, name: &str) -> PathBuf {
    Path::new(&c.out).join(name)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(c) => {
            let s = load(&c)?;
            let (traj, m) = run_scenario(&s)?;
            write_file(out(&c, "trajectory.csv"), |w| write_trajectory_csv(&traj, w))?;
            write_json(out(&c, "metrics.json"), &m)?;
            for w in &traj.meta.warnings {
                eprintln!("warning: {w}");
            }
            println!("trailing mean distance {:.6e}, heading cos {:.3}", m.trailing_mean_distance, m.heading_cos);
        }
        Command::MonteCarlo { common: c, runs } => {
            let s = load(&c)?;
            let r = monte_carlo(&s, runs.unwrap_or(s.runs));
            write_json(out(&c, "monte_carlo.json"), &r)?;
            println!(
                "{} runs ({} failed): median trailing distance {:.6e}",
                r.n_runs, r.n_failed, r.trailing_mean_distance.median
            );
        }
        Command::Average { common: c, t_end, dt, every } => {
            let s = load(&c)?;
            let run = integrate_averaged(&s, t_end.unwrap_or(s.sde.t_end), dt, every)?;
            write_file(out(&c, "averaged.csv"), |w| write_averaged_csv(&run, w))?;
            println!("final r_tilde {:.6e}", run.r_tilde.last().copied().unwrap_or(f64::NAN));
        }
        Command::Equilibria(c) => {
            let s = load(&c)?;
            let r = equilibrium_report(&s.controller, &s.field()?)?;
            write_json(out(&c, "equilibria.json"), &r)?;
            println!("iota: {:?}", r.iota);
        }
        Command::Stability(c) => {
            let s = load(&c)?;
            let r = stability_report(&s.controller, &s.field()?)?;
            write_json(out(&c, "stability.json"), &r)?;
            println!("{} equilibria analysed", r.equilibria.len());
        }
        Command::ValidateAveraging(c) => {
            let s = load(&c)?;
            let r = validate_averaging(&s)?;
            write_json(out(&c, "averaging.json"), &r)?;
            for row in &r.rows {
                println!("eps {:e}: discrepancy {:.6e}", row.eps, row.discrepancy);
            }
        }
        Command::Report { common: c, no_sim } => {
            let s = load(&c)?;
            let r = report(&s, !no_sim)?;
            write_json(out(&c, "report.json"), &r)?;
            println!("report written to {}", out(&c, "report.json").display());
        }
    }
    Ok(())
}

fn kind(e: &SeekError) -> &'static str {
    match e {
        SeekError::Config(_) | SeekError::InvalidConfig(_) | SeekError::InvalidField(_) | SeekError::InvalidParams(_) => {
            "config"
        }
        SeekError::Io(_) => "io",
        _ => "fault",
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let issues = match &e {
                SeekError::Config(v) => serde_json::to_value(v).unwrap_or_default(),
                _ => json!([]),
            };
            eprintln!("{}", json!({ "error": kind(&e), "message": e.to_string(), "issues": issues }));
            ExitCode::from(if kind(&e) == "fault" { 2 } else { 1 })
        }
    }
}
