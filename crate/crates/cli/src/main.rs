use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use atsp_core::harness::{
    check_instance, emit_report, gen_instance, parse_tsplib, run_experiment, Distribution, ExperimentConfig,
    InstanceSpec, ReportFormat, RunOptions,
};
use atsp_core::oracle::{brute_force_atsp_limited, held_karp_limited};
use atsp_core::{
    build_symmetric, normalize, pairing_involution, permuted_matrix, solve_named, AsymCostMatrix, SolveOptions,
    UpperBoundChoice, Variant,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Exit code for an internal soundness violation.
const EXIT_SOUNDNESS: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "atsp", version, about = "Pairing-cycle search for the asymmetric TSP, with exact oracles")]
struct Cli {
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// City count for generated instances.
    #[arg(long, global = true, default_value_t = 8)]
    n: usize,
    /// Distribution for generated instances, e.g. `uniform:1:100`,
    /// `near-symmetric:1:100:5`, `planted:1:100:200`, `negative-shifted:-50:50`.
    #[arg(long, global = true, default_value = "uniform:1:100")]
    dist: DistArg,
    /// Read the instance from a TSPLIB ATSP file instead of generating it.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Retention width K of the candidate table.
    #[arg(long = "k-best", global = true, default_value_t = 3)]
    k_best: usize,
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::ZeroDiag)]
    variant: VariantArg,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Largest n verified with Held-Karp.
    #[arg(long = "limit-oracle", global = true, default_value_t = 16)]
    limit_oracle: usize,
    #[arg(long = "upper-bound", global = true, value_enum, default_value_t = BoundArg::Best)]
    upper_bound: BoundArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the symmetric matrix and, for zero-diag, the permuted matrix.
    Transform,
    /// Run the pipeline on one instance.
    Solve {
        /// Skip the Held-Karp comparison.
        #[arg(long)]
        no_verify: bool,
    },
    /// Solve one instance exactly.
    Oracle {
        #[arg(long, value_enum, default_value_t = OracleArg::HeldKarp)]
        method: OracleArg,
    },
    /// Run a campaign described by a TOML file.
    Experiment {
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Archive SUBOPTIMAL instances in this directory.
        #[arg(long)]
        counterexamples: Option<PathBuf>,
        /// Record per-row wall-clock time (breaks byte-identical reruns).
        #[arg(long)]
        timings: bool,
    },
    /// Run the invariant suite on one instance.
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    ZeroDiag,
    JvNegm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundArg {
    Best,
    Worst,
    First,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleArg {
    HeldKarp,
    BruteForce,
}

#[derive(Debug, Clone, Copy)]
struct DistArg(Distribution);

impl FromStr for DistArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Vec<i64> = parts[1..]
            .iter()
            .map(|p| p.parse::<i64>().map_err(|_| format!("{p:?} is not an integer")))
            .collect::<Result<_, _>>()?;
        let d = match (parts[0], nums.as_slice()) {
            ("uniform", &[lo, hi]) => Distribution::Uniform { lo, hi },
            ("near-symmetric", &[lo, hi, perturbation]) => Distribution::NearSymmetric { lo, hi, perturbation },
            ("planted", &[cheap, lo, hi]) => Distribution::Planted { cheap, lo, hi },
            ("negative-shifted", &[lo, hi]) => Distribution::NegativeShifted { lo, hi },
            _ => return Err(format!("unrecognized distribution {s:?}")),
        };
        Ok(DistArg(d))
    }
}

impl Cli {
    fn instance(&self) -> Result<(String, AsymCostMatrix)> {
        match &self.input {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let inst = parse_tsplib(&text).with_context(|| format!("parsing {}", path.display()))?;
                Ok((inst.name.unwrap_or_else(|| path.display().to_string()), inst.matrix))
            }
            None => {
                let spec = InstanceSpec {
                    n: self.n,
                    distribution: self.dist.0,
                    seed: self.seed,
                };
                Ok((spec.id(), gen_instance(&spec)?))
            }
        }
    }

    fn solve_options(&self, verify: bool) -> SolveOptions {
        SolveOptions {
            k_best: self.k_best,
            verify,
            oracle_limit: self.limit_oracle,
            upper_bound: match self.upper_bound {
                BoundArg::Best => UpperBoundChoice::Best,
                BoundArg::Worst => UpperBoundChoice::Worst,
                BoundArg::First => UpperBoundChoice::First,
            },
        }
    }
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Soundness(String),
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Transform => {
            let (id, m) = cli.instance()?;
            let norm = normalize(&m);
            let variant = match cli.variant {
                VariantArg::ZeroDiag => Variant::ZeroDiag,
                VariantArg::JvNegm => Variant::JvNegM,
            };
            let sym = build_symmetric(&norm, variant);
            let permuted = match variant {
                Variant::ZeroDiag => Some(permuted_matrix(&sym, &pairing_involution(m.n()))?.grid().rows()),
                Variant::JvNegM => None,
            };
            print_json(&json!({
                "instance": id,
                "n": m.n(),
                "variant": variant,
                "shift": norm.shift,
                "mprime": sym.mprime(),
                "symmetric": sym.grid().rows(),
                "permuted": permuted,
            }))?;
            Ok(Outcome::Ok)
        }
        Command::Solve { no_verify } => {
            let (id, m) = cli.instance()?;
            let r = solve_named(&m, &cli.solve_options(!no_verify), &id)?;
            print_json(&r)?;
            if r.sandwich_holds() {
                Ok(Outcome::Ok)
            } else {
                Ok(Outcome::Soundness(format!("sandwich violated on {id}")))
            }
        }
        Command::Oracle { method } => {
            let (_, m) = cli.instance()?;
            let r = match method {
                OracleArg::HeldKarp => held_karp_limited(&m, cli.limit_oracle)?,
                OracleArg::BruteForce => brute_force_atsp_limited(&m, cli.limit_oracle.min(9))?,
            };
            print_json(&r)?;
            Ok(Outcome::Ok)
        }
        Command::Experiment {
            config,
            out,
            counterexamples,
            timings,
        } => {
            let cfg = ExperimentConfig::load(config).with_context(|| format!("loading {}", config.display()))?;
            let opts = RunOptions {
                timings: *timings,
                counterexample_dir: counterexamples.clone(),
            };
            let report = run_experiment(&cfg, &opts)?;
            let format = match cli.format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
            };
            let bytes = emit_report(&report, format)?;
            match out {
                Some(path) => fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?,
                None => std::io::stdout().lock().write_all(&bytes)?,
            }
            let o = &report.aggregates.overall;
            eprintln!(
                "{} rows: {} optimal, {} suboptimal, {} errors, optimality rate {:.4}",
                o.instances, o.optimal, o.suboptimal, o.errors, o.optimality_rate
            );
            match report.sandwich_violations() {
                0 => Ok(Outcome::Ok),
                v => Ok(Outcome::Soundness(format!("{v} rows violate oracle <= final <= bound"))),
            }
        }
        Command::Verify => {
            let (_, m) = cli.instance()?;
            let r = check_instance(&m, &cli.solve_options(true))?;
            print_json(&r)?;
            if r.all_passed() {
                Ok(Outcome::Ok)
            } else {
                let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                Ok(Outcome::Soundness(format!("failed checks: {}", failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.k_best == 0 {
        eprintln!("error: --k-best must be at least 1");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Soundness(msg)) => {
            eprintln!("soundness violation: {msg}");
            ExitCode::from(EXIT_SOUNDNESS)
        }
        Err(e) => {
            if let Some(atsp_core::Error::Soundness(msg)) = e.downcast_ref::<atsp_core::Error>() {
                eprintln!("soundness violation: {msg}");
                return ExitCode::from(EXIT_SOUNDNESS);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_arg_parsing() {
        assert!(matches!(
            "uniform:1:100".parse::<DistArg>().unwrap().0,
            Distribution::Uniform { lo: 1, hi: 100 }
        ));
        assert!(matches!(
            "negative-shifted:-5:9".parse::<DistArg>().unwrap().0,
            Distribution::NegativeShifted { lo: -5, hi: 9 }
        ));
        assert!("uniform:1".parse::<DistArg>().is_err());
        assert!("gauss:1:2".parse::<DistArg>().is_err());
    }
}
