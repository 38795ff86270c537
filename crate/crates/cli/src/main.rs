use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use escqe::harness::{cmd_dissociation, cmd_integrals, cmd_spectrum, cmd_validate, RunConfig};
use escqe::refstates::GuessKind;

#[derive(Parser)]
#[command(name = "escqe", version, about = "Excited-state contracted quantum eigensolver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the k lowest (or all) states of one geometry.
    Spectrum(Common),
    /// Scan the rectangle width and compare both methods against exact energies.
    Dissociation(Common),
    /// Run the headless property checks.
    Validate(Common),
    /// Write the MO-basis FCIDUMP of the configured geometry.
    Integrals {
        #[command(flatten)]
        common: Common,
        /// Destination file.
        #[arg(long, default_value = "FCIDUMP")]
        output: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults are used for absent keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Constraint strategy, e.g. `augmented:mu=1` (repeatable).
    #[arg(long)]
    strategy: Vec<String>,
    /// Guess pool: sd, csf or mixed.
    #[arg(long)]
    guess: Option<GuessKind>,
    #[arg(long)]
    k: Option<usize>,
    /// Only compute the exact reference spectrum.
    #[arg(long)]
    fci_only: bool,
}

impl Common {
    fn resolve(&self, base: RunConfig) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => base,
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if !self.strategy.is_empty() {
            cfg.strategies = self.strategy.clone();
        }
        if let Some(g) = self.guess {
            cfg.guess = g;
        }
        if self.k.is_some() {
            cfg.k = self.k;
        }
        cfg.fci_only |= self.fci_only;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spectrum(c) => {
            let cfg = c.resolve(RunConfig::default())?;
            let o = cmd_spectrum(&cfg, &c.out)?;
            println!("sector dimension {}", o.summary.sector_dimension);
            for s in &o.summary.strategies {
                println!(
                    "{}: {}/{} converged, {} with variance < 1e-5, mean log10 variance {:.2}, k-matched {:.4} mH",
                    s.strategy,
                    s.converged,
                    s.states,
                    s.variance_below_1e5,
                    s.mean_log10_variance,
                    s.k_matched_error_mh
                );
            }
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Dissociation(c) => {
            let cfg = c.resolve(RunConfig::dissociation())?;
            let o = cmd_dissociation(&cfg, &c.out)?;
            println!("{:>6} {:>5} {:>14} {:>14}", "d", "method", "k-matched mH", "nearest mH");
            for r in &o.errors {
                println!("{:>6.3} {:>5} {:>14.4} {:>14.4}", r.d, r.method, r.k_matched_mh, r.nearest_unique_mh);
            }
            Ok(true)
        }
        Command::Validate(c) => {
            let cfg = c.resolve(RunConfig::default())?;
            let report = cmd_validate(&cfg, &c.out)?;
            print!("{}", report.render());
            Ok(report.all_passed)
        }
        Command::Integrals { common, output } => {
            let cfg = common.resolve(RunConfig::default())?;
            let dump = cmd_integrals(&cfg, &output)?;
            println!("wrote {} (NORB={})", output.display(), dump.header.norb);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
