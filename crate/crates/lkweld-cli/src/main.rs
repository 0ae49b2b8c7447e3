use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lkweld_cli::config::Scenario;
use lkweld_cli::runner::{self, RunFlags};

/// Numerical laboratory for Löwner-Kufarev evolution and asymptotic
/// conformal welding of near-circular domains.
#[derive(Parser)]
#[command(name = "lkweld", version, about)]
struct Cli {
    /// Scenario config file (line-oriented `key = value`; defaults apply
    /// when omitted).
    #[arg(long, global = true, env = "LKWELD_CONFIG")]
    config: Option<PathBuf>,

    /// Output directory override.
    #[arg(long, global = true, env = "LKWELD_OUT")]
    out: Option<PathBuf>,

    /// Boundary grid size override (power of two, ≥ 16).
    #[arg(long, global = true, env = "LKWELD_GRID")]
    grid: Option<usize>,

    /// ODE step-count override (default: 256 per unit time).
    #[arg(long, global = true, env = "LKWELD_STEPS")]
    steps: Option<usize>,

    /// Render SVG plots next to the CSV output.
    #[arg(long, global = true, env = "LKWELD_PLOTS")]
    plots: bool,

    /// Run scenario families (t/ε lists) in parallel; output order is
    /// unchanged.
    #[arg(long, global = true, env = "LKWELD_PARALLEL")]
    parallel: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the boundary under the scenario driving function to time t.
    Evolve,
    /// Solve the interior conformal map of the scenario curve.
    MapInterior,
    /// Solve the exterior conformal map of the scenario curve.
    MapExterior,
    /// Compute the conformal welding from the two oracle maps.
    WeldOracle,
    /// Compute the first-order asymptotic welding of the scenario curve.
    WeldAsymptotic,
    /// Measure the first-order welding law of the evolution over t_list.
    VerifyTheorem1,
    /// Measure the welding relation of an explicit deficit over eps_list.
    #[command(name = "verify-theoremB")]
    VerifyTheoremB,
    /// Measure the exterior duality with the reflected driving over t_list.
    VerifyDuality,
    /// Measure the capacity inequality slack over t_list.
    VerifyLebedev,
}

fn run(cli: Cli) -> Result<(), lkweld_cli::CliError> {
    let mut scenario = Scenario::load(cli.config.as_deref())?;
    if let Some(out) = cli.out {
        scenario.out = out;
    }
    if let Some(grid) = cli.grid {
        if !grid.is_power_of_two() || grid < 16 {
            return Err(lkweld_cli::CliError::Config(format!(
                "--grid {grid} must be a power of two ≥ 16"
            )));
        }
        scenario.grid = grid;
    }
    if let Some(steps) = cli.steps {
        scenario.steps = if steps == 0 { None } else { Some(steps) };
    }
    let flags = RunFlags { plots: cli.plots, parallel: cli.parallel };
    match cli.command {
        Command::Evolve => runner::evolve(&scenario, flags),
        Command::MapInterior => runner::map_interior(&scenario, flags),
        Command::MapExterior => runner::map_exterior(&scenario, flags),
        Command::WeldOracle => runner::weld_oracle(&scenario, flags),
        Command::WeldAsymptotic => runner::weld_asymptotic(&scenario, flags),
        Command::VerifyTheorem1 => runner::verify_theorem1(&scenario, flags),
        Command::VerifyTheoremB => runner::verify_theorem_b(&scenario, flags),
        Command::VerifyDuality => runner::verify_duality(&scenario, flags),
        Command::VerifyLebedev => runner::verify_lebedev(&scenario, flags),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("lkweld: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
