use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use radabound::bounds::{bounds_table_csv, compare_bounds_table};
use radabound::io::{powers_of_two, run_configured, RunConfig, SEED_ENV};
use radabound::thresholdout::{comparison_report, ThresholdoutParams};
use radabound::Error;

#[derive(Parser)]
#[command(
    name = "radabound",
    version,
    about = "Guarded holdout experiments and bound calculators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the greedy-classifier experiment once per configured epsilon.
    RunExperiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print estimate-error bounds for a range of l as CSV.
    CompareBounds {
        #[arg(long, default_value_t = 1000)]
        m: usize,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 2)]
        l_min: usize,
        #[arg(long, default_value_t = 64)]
        l_max: usize,
        /// Single l value; overrides the range.
        #[arg(long)]
        l: Option<usize>,
    },
    /// Print the Thresholdout holdout-size comparison as JSON.
    ThresholdoutSize {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 4000)]
        radabound_m: u64,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::RunExperiment { config } => {
            let cfg = RunConfig::load(&config).map_err(|e| match e {
                // An unreadable config is a usage problem, not an output failure.
                Error::Io(io) => Error::InvalidConfig(format!("{}: {io}", config.display())),
                other => other,
            })?;
            let cfg = cfg.apply_seed_override(std::env::var(SEED_ENV).ok().as_deref())?;
            let summary = run_configured(&cfg)?;
            let halts: Vec<String> = summary
                .runs
                .iter()
                .map(|r| match r.halt_index {
                    Some(k) => format!("eps={} halt@{k}", r.epsilon),
                    None => format!("eps={} no-halt ({} queries)", r.epsilon, r.queries),
                })
                .collect();
            println!("wrote {}: {}", cfg.output_dir.display(), halts.join(", "));
        }
        Command::CompareBounds {
            m,
            eps,
            l_min,
            l_max,
            l,
        } => {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "--eps {eps} must lie in (0, 1)"
                )));
            }
            if m == 0 {
                return Err(Error::InvalidConfig("--m must be >= 1".into()));
            }
            let ls = match l {
                Some(0) => return Err(Error::InvalidConfig("--l must be >= 1".into())),
                Some(l) => vec![l],
                None => powers_of_two(l_min.max(1), l_max),
            };
            if ls.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "no power of two in [{l_min}, {l_max}]"
                )));
            }
            print!("{}", bounds_table_csv(&compare_bounds_table(m, eps, &ls)?));
        }
        Command::ThresholdoutSize {
            k,
            b,
            eps,
            delta,
            radabound_m,
        } => {
            let report = comparison_report(
                &ThresholdoutParams {
                    k,
                    b,
                    epsilon: eps,
                    delta,
                },
                radabound_m,
            )?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
