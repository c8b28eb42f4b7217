//! Experiment front end: scenario sweeps, built-in presets and
//! analytic-vs-simulation comparison.

mod compare;
mod error;
mod output;
mod presets;
mod run;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::{CliError, Result};
use hetnet_core::QuadratureSpec;
use scenario::{parse_scenario, CurveSide, RunMode, Scenario};

#[derive(Parser)]
#[command(
    name = "hetnet",
    about = "Handoff-rate and coverage experiments in multi-tier Poisson networks",
    version
)]
struct Cli {
    /// Override the scenario's RNG seed.
    #[arg(long, global = true, env = "HETNET_SEED")]
    seed: Option<u64>,

    /// Override the scenario's replication count.
    #[arg(long, global = true, env = "HETNET_REPS")]
    reps: Option<usize>,

    /// Output directory for CSV artifacts.
    #[arg(long, global = true, env = "HETNET_OUT", default_value = "out")]
    out: PathBuf,

    /// Absolute quadrature tolerance (relative tolerance is 100x this).
    #[arg(long, global = true, env = "HETNET_TOL")]
    tol: Option<f64>,

    /// Suppress per-file progress lines.
    #[arg(long, global = true, env = "HETNET_QUIET", default_value_t = false)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytic curves of a scenario.
    Analytic { scenario: PathBuf },
    /// Run the Monte Carlo curves of a scenario.
    Simulate { scenario: PathBuf },
    /// Maximize coverage over the association simplex along the sweep.
    Optimize { scenario: PathBuf },
    /// Compare an analytic curve file against a Monte Carlo curve file.
    Compare { analytic: PathBuf, mc: PathBuf },
    /// Run a built-in preset (fig3, fig4, fig5, fig6, fig7).
    Preset {
        name: String,
        /// Print the preset's scenario files instead of running them.
        #[arg(long, default_value_t = false)]
        print: bool,
    },
}

fn quadrature_spec(tol: Option<f64>) -> Result<QuadratureSpec> {
    let mut spec = QuadratureSpec::default();
    if let Some(t) = tol {
        if !t.is_finite() || t <= 0.0 {
            return Err(CliError::config(format!("--tol must be positive, got {t}")));
        }
        spec.abs_tol = t;
        spec.rel_tol = 100.0 * t;
    }
    Ok(spec)
}

fn load_scenario(path: &PathBuf, cli: &Cli) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read scenario {}: {e}", path.display())))?;
    let mut s = parse_scenario(&text)?;
    apply_overrides(&mut s, cli);
    Ok(s)
}

fn apply_overrides(s: &mut Scenario, cli: &Cli) {
    if let Some(seed) = cli.seed {
        s.sim.seed = seed;
    }
    if let Some(reps) = cli.reps {
        s.sim.reps = reps;
    }
}

fn real_main(cli: &Cli) -> Result<()> {
    let quad = quadrature_spec(cli.tol)?;
    match &cli.command {
        Command::Analytic { scenario } => {
            let mut s = load_scenario(scenario, cli)?;
            s.curves = CurveSide::Analytic;
            run::run_scenario(&s, &cli.out, &quad, cli.quiet)?;
        }
        Command::Simulate { scenario } => {
            let mut s = load_scenario(scenario, cli)?;
            s.curves = CurveSide::Mc;
            if s.mode == RunMode::Optimize {
                return Err(CliError::config(
                    "optimize-mode scenarios run through the `optimize` subcommand",
                ));
            }
            run::run_scenario(&s, &cli.out, &quad, cli.quiet)?;
        }
        Command::Optimize { scenario } => {
            let mut s = load_scenario(scenario, cli)?;
            s.mode = RunMode::Optimize;
            run::run_scenario(&s, &cli.out, &quad, cli.quiet)?;
        }
        Command::Compare { analytic, mc } => {
            let report = compare::compare(analytic, mc)?;
            let json =
                serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
            println!("{json}");
        }
        Command::Preset { name, print } => {
            let preset = presets::find(name).ok_or_else(|| {
                CliError::config(format!(
                    "unknown preset {name:?}; available: {}",
                    presets::PRESETS
                        .iter()
                        .map(|p| p.name)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
            if *print {
                println!("# {}: {}", preset.name, preset.about);
                for text in preset.scenarios {
                    println!("{}", text.trim());
                    println!();
                }
                return Ok(());
            }
            if !cli.quiet {
                println!("preset {}: {}", preset.name, preset.about);
            }
            for text in preset.scenarios {
                let mut s = parse_scenario(text)?;
                apply_overrides(&mut s, cli);
                run::run_scenario(&s, &cli.out, &quad, cli.quiet)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
