use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sta_fields_cli::config::ScenarioConfig;
use sta_fields_cli::error::{CliError, Result};
use sta_fields_cli::output::{prepare_dir, write_json};
use sta_fields_cli::verify::{self, Suite};
use sta_fields_cli::{simulate, spin, wave};

/// Spacetime-algebra field verification, wave evaluation and simulation.
#[derive(Parser, Debug)]
#[command(name = "sta-fields", version)]
struct Cli {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; overrides `output.directory` in the scenario.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "STA_FIELDS_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the invariant suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Sample a plane-wave superposition on the grid.
    Wave,
    /// Evolve the potential with sources and probes.
    Simulate,
    /// Compare traditional and corrected spin densities.
    Spin,
}

fn scenario(cli: &Cli) -> Result<(ScenarioConfig, PathBuf)> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
    let cfg = ScenarioConfig::load(path)?;
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.directory.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok((cfg, out))
}

fn run_verify(out: Option<&Path>, suite: Suite, seed: u64, fault: Option<String>) -> Result<()> {
    let report = verify::run(suite, seed, fault);
    for c in &report.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {} residual={:e} tolerance={:e}",
            c.name, c.residual, c.tolerance
        );
    }
    println!("{} passed, {} failed", report.passed, report.failed);
    if let Some(dir) = out {
        write_json(&prepare_dir(dir)?.join("verify_report.json"), &report)?;
    }
    if report.failed > 0 {
        return Err(CliError::ChecksFailed {
            failed: report.failed,
            total: report.checks.len(),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads: must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Verify {
            suite,
            seed,
            inject_fault,
        } => run_verify(cli.out.as_deref(), *suite, *seed, inject_fault.clone()),
        Command::Wave => {
            let (cfg, out) = scenario(&cli)?;
            let s = wave::run(&cfg, &out)?;
            println!(
                "wave: {} sites, energy {:e}, max residual {:e}, output in {}",
                s.sites,
                s.energy,
                s.max_residual,
                out.display()
            );
            Ok(())
        }
        Command::Simulate => {
            let (cfg, out) = scenario(&cli)?;
            let s = simulate::run(&cfg, &out)?;
            println!(
                "simulate: {} steps to t = {:e}, max energy drift {:e}, output in {}",
                s.steps,
                s.end_time,
                s.max_drift,
                out.display()
            );
            Ok(())
        }
        Command::Spin => {
            let (cfg, out) = scenario(&cli)?;
            let s = spin::run(&cfg, &out)?;
            println!(
                "spin: traditional {:?}, corrected {:?}, output in {}",
                s.traditional,
                s.corrected,
                out.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
