//! `realroots`: predictions and Monte Carlo checks for real roots of random
//! trigonometric systems.
//!
//! Exit codes: 0 success, 2 invalid input, 3 a verification check failed.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use realroots::lattice::{BodySpec, SupportSet};
use realroots::rootcount::RootKind;
use realroots::McConfig;

const EXIT_INVALID: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "realroots", version, about = "Expected real roots of random trigonometric systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected real roots, BKK count and real fraction for n supports.
    Predict {
        #[command(flatten)]
        supports: SupportArgs,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare the prediction with actual root counts of sampled systems.
    Verify {
        #[command(flatten)]
        supports: SupportArgs,
        #[command(flatten)]
        mc: McArgs,
        /// Base grid cells per axis for two-variable counting.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum, default_value_t = Kind::Real)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Real fraction of dilated lattice supports against the limit.
    Asymptotics {
        /// Body description (JSON).
        #[arg(long)]
        body: PathBuf,
        /// Comma-separated dilation factors.
        #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,50")]
        m_list: Vec<i64>,
        /// Samples per row for the Monte Carlo column; 0 disables it.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Largest dilation factor that gets a Monte Carlo column.
        #[arg(long, default_value_t = 3)]
        mc_max_m: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// β_n, σ_n and both candidate ball constants.
    BetaTable {
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Containment, volume and Alexandrov–Fenchel checks on given or random supports.
    Inequalities {
        /// Support files; without any, random supports are drawn.
        #[arg(long = "support")]
        supports: Vec<PathBuf>,
        /// Random supports to draw when none are given.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Dimension of random supports.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Largest coordinate of random supports.
        #[arg(long, default_value_t = 6)]
        max_frequency: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct SupportArgs {
    /// Support file (JSON), once per equation.
    #[arg(long = "support", required = true)]
    paths: Vec<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl McArgs {
    fn config(&self, default_samples: usize) -> McConfig {
        McConfig::new(self.samples.unwrap_or(default_samples), self.seed).with_workers(self.workers)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Real,
    Complex,
}

impl From<Kind> for RootKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Real => RootKind::Real,
            Kind::Complex => RootKind::Complex,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_supports(paths: &[PathBuf]) -> Result<Vec<SupportSet>> {
    paths.iter().map(read_json).collect()
}

fn run(cli: Cli) -> Result<commands::Output> {
    match cli.command {
        Command::Predict { supports, mc, format } => {
            commands::predict(&read_supports(&supports.paths)?, &mc.config(100_000), format)
        }
        Command::Verify { supports, mc, grid, kind, format } => {
            commands::verify(&read_supports(&supports.paths)?, &mc.config(2000), kind.into(), grid, format)
        }
        Command::Asymptotics { body, m_list, samples, mc_max_m, seed, workers, format } => {
            let body: BodySpec = read_json(&body)?;
            let mc = (samples > 0).then(|| McConfig::new(samples, seed).with_workers(workers));
            commands::asymptotics(&body, &m_list, mc, mc_max_m, format)
        }
        Command::BetaTable { n_max, format } => commands::beta_table(n_max, format),
        Command::Inequalities { supports, count, dim, max_frequency, seed, format } => {
            let given = read_supports(&supports)?;
            commands::inequalities(given, count, dim, max_frequency, seed, format)
        }
    }
}

fn exit_code(result: &Result<commands::Output>) -> u8 {
    match result {
        Ok(out) if out.passed => 0,
        Ok(_) => EXIT_CHECK_FAILED,
        Err(_) => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("REALROOTS_LOG")).init();
    let result = run(Cli::parse());
    match &result {
        Ok(out) => print!("{}", out.text),
        Err(e) => eprintln!("error: {e:#}"),
    }
    ExitCode::from(exit_code(&result))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        let out = |passed| Ok(commands::Output { text: String::new(), passed });
        assert_eq!(exit_code(&out(true)), 0);
        assert_eq!(exit_code(&out(false)), 3);
        assert_eq!(exit_code(&Err(anyhow::anyhow!("bad input"))), 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
