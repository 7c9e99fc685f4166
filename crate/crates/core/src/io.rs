//! Run configuration, output files, and the bodies of the CLI commands.
//!
//! Output formats:
//!
//! * `trace_eps<ε>.csv`: one row per guard query, header [`TRACE_HEADER`].
//! * `summary.json`: halt index per ε, final classifiers, column permutation,
//!   seeds and generator identities (schema in `docs/summary.schema.json`).
//! * `compare-bounds` CSV: header [`crate::bounds::BOUNDS_CSV_HEADER`].
//!
//! Floats are written with 10 significant digits by [`fmt_sig10`]. Nothing
//! time- or host-dependent is written, so a config reproduces its outputs
//! byte for byte.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::guard::GuardConfig;
use crate::harness::{run_experiment, ExperimentResult, ExperimentTrace};
use crate::seed::GENERATOR_ID;
use crate::synthdata::{generate, DatasetSpec, NORMAL_SAMPLER_ID};

pub const TRACE_HEADER: &str =
    "query_index,holdout_acc,fresh_acc,r_tilde,delta_prime,accepted,halted";

/// Environment variable that replaces both configured seeds when set.
pub const SEED_ENV: &str = "RADABOUND_SEED";

/// Formats `v` with 10 significant digits.
///
/// Plain notation for magnitudes in `[1e−5, 1e10)`, scientific otherwise.
pub fn fmt_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.9e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific format has an exponent");
    if (-5..10).contains(&exp) {
        format!("{:.*}", (9 - exp) as usize, v)
    } else {
        sci
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Contents of a `run-experiment` config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: DatasetSpec,
    pub guard: GuardConfig,
    /// Runs the experiment once per listed ε; empty means `guard.epsilon`.
    #[serde(default)]
    pub epsilon_list: Vec<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub emit_dataset_dump: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.experiment.validate()?;
        self.guard.validate()?;
        for e in &self.epsilon_list {
            if !(*e > 0.0 && *e < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "epsilon_list entry {e} must lie in (0, 1)"
                )));
            }
        }
        if self.epsilon_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "epsilon_list must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// The ε values this config runs.
    pub fn epsilons(&self) -> Vec<f64> {
        if self.epsilon_list.is_empty() {
            vec![self.guard.epsilon]
        } else {
            self.epsilon_list.clone()
        }
    }

    /// Replaces both seeds with `seed`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.experiment.seed = seed;
        self.guard.seed = seed;
        self
    }

    /// Applies the value of [`SEED_ENV`], if any.
    pub fn apply_seed_override(self, value: Option<&str>) -> Result<Self> {
        match value {
            None => Ok(self),
            Some(v) => {
                let seed = v
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidConfig(format!("{SEED_ENV}={v} is not a u64")))?;
                Ok(self.with_seed(seed))
            }
        }
    }
}

/// Trace as CSV text.
pub fn trace_csv(trace: &ExperimentTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.rows.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in &trace.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.query_index,
            r.holdout_accuracy.map(fmt_sig10).unwrap_or_default(),
            fmt_sig10(r.fresh_accuracy),
            fmt_sig10(r.r_tilde),
            fmt_sig10(r.delta_prime),
            r.accepted,
            r.halted
        ));
    }
    out
}

/// File name of the trace for `epsilon`.
pub fn trace_file_name(epsilon: f64) -> String {
    format!("trace_eps{epsilon}.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub epsilon: f64,
    pub trace_file: String,
    pub halt_index: Option<usize>,
    pub queries: usize,
    pub final_fresh_accuracy: f64,
    pub final_support: usize,
    pub final_weights: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedInfo {
    pub dataset_seed: u64,
    pub guard_seed: u64,
    pub generator: &'static str,
    pub normal_sampler: &'static str,
    pub streams: &'static str,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub version: &'static str,
    pub config: RunConfig,
    pub seeds: SeedInfo,
    pub column_permutation: Vec<usize>,
    pub biased_columns: Vec<usize>,
    pub feature_order: Vec<usize>,
    pub runs: Vec<RunRecord>,
}

fn record(result: &ExperimentResult, epsilon: f64) -> RunRecord {
    RunRecord {
        epsilon,
        trace_file: trace_file_name(epsilon),
        halt_index: result.trace.halt_index,
        queries: result.queries,
        final_fresh_accuracy: result.final_fresh_accuracy,
        final_support: result.classifier.support(),
        final_weights: result.classifier.weights().to_vec(),
    }
}

/// Runs every ε in `config`, writing traces and `summary.json` into
/// `config.output_dir`.
pub fn run_configured(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let dir = &config.output_dir;
    fs::create_dir_all(dir)?;

    let mut runs = Vec::new();
    let mut bookkeeping = None;
    for epsilon in config.epsilons() {
        let guard = GuardConfig {
            epsilon,
            ..config.guard
        };
        let result = run_experiment(&config.experiment, &guard)?;
        fs::write(dir.join(trace_file_name(epsilon)), trace_csv(&result.trace))?;
        runs.push(record(&result, epsilon));
        bookkeeping.get_or_insert((
            result.permutation.clone(),
            result.biased_columns.clone(),
            result.feature_order.clone(),
        ));
    }
    let (column_permutation, biased_columns, feature_order) =
        bookkeeping.expect("at least one epsilon is always run");

    if config.emit_dataset_dump {
        let data = generate(&config.experiment)?;
        for (name, set) in [
            ("train", &data.train),
            ("holdout", &data.holdout),
            ("fresh", &data.fresh),
        ] {
            let file = fs::File::create(dir.join(format!("dataset_{name}.csv")))?;
            set.write_csv(std::io::BufWriter::new(file))?;
        }
    }

    let summary = RunSummary {
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        seeds: SeedInfo {
            dataset_seed: config.experiment.seed,
            guard_seed: config.guard.seed,
            generator: GENERATOR_ID,
            normal_sampler: NORMAL_SAMPLER_ID,
            streams: "train/holdout/fresh features: label ids 1/2/3; signs: 4; labels: 5 with index 0/1/2 per set; permutation: 6",
        },
        column_permutation,
        biased_columns,
        feature_order,
        runs,
    };
    let mut file = fs::File::create(dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut file, &summary)?;
    file.write_all(b"\n")?;
    Ok(summary)
}

/// Powers of two in `[l_min, l_max]`.
pub fn powers_of_two(l_min: usize, l_max: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |l| l.checked_mul(2))
        .take_while(|&l| l <= l_max)
        .filter(|&l| l >= l_min)
        .collect()
}
