use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use momenta::checks::run_suite;
use momenta::config::{parse_config, Loaded};
use momenta::orbit::sample_orbit;
use momenta::report::analyze;

/// Momentum maps, Hamiltonian holonomy and reduced-space covers for magnetic
/// cotangent bundles of tori and the Heisenberg group.
#[derive(Parser)]
#[command(name = "momenta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the exact and numeric analysis report as JSON.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite. Exits 1 if any check fails.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `verify.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the check reports as JSON instead of a table.
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        inject_sign_flip: bool,
    },
    /// Sample the orbit of the affine action through `mu[I]` as CSV.
    Orbit {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        mu: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn load(path: &Path) -> anyhow::Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, anyhow::Error> {
    match cli.command {
        Command::Analyze { config, out } => {
            let loaded = load(&config)?;
            let report = analyze(&loaded);
            emit(out.as_deref(), &format!("{}\n", report.to_json()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config, seed, json, inject_sign_flip } => {
            let mut loaded = load(&config)?;
            if let Some(s) = seed {
                loaded.config.verify.seed = s;
            }
            let scenario = if inject_sign_flip {
                log::warn!("running with a flipped canonical form");
                loaded.scenario.with_flipped_canonical_sign()
            } else {
                loaded.scenario.clone()
            };
            let outcome = run_suite(&loaded, &scenario, &loaded.config.verify);
            if json {
                println!("{}", serde_json::to_string_pretty(&outcome)?);
            } else {
                for c in &outcome.checks {
                    let err = c.max_error.map_or("n/a".to_string(), |e| format!("{e:.3e}"));
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    println!("{status} {:<36} max {err:>10} tol {:.1e} n={} {}", c.check_name, c.tolerance, c.sample_count, c.notes);
                }
                for s in &outcome.skipped {
                    println!("SKIP {:<36} {}", s.check_name, s.reason);
                }
            }
            Ok(if outcome.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_CHECK_FAILED) })
        }
        Command::Orbit { config, mu, samples, out } => {
            let loaded = load(&config)?;
            let orbit = sample_orbit(&loaded, mu, samples)?;
            emit(out.as_deref(), &orbit.to_csv()?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MOMENTA_LOG", "off")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
