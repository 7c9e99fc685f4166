//! Runs a JSON experiment config and writes traces plus `summary.json`.
//!
//! Run with `cargo run --release --example run_config -- configs/no_signal.json`.

use std::path::PathBuf;

use radabound::io::{run_configured, RunConfig, SEED_ENV};

fn main() -> radabound::Result<()> {
    let path: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| {
            concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/no_signal.json").into()
        })
        .into();
    let config =
        RunConfig::load(&path)?.apply_seed_override(std::env::var(SEED_ENV).ok().as_deref())?;
    let summary = run_configured(&config)?;
    for run in &summary.runs {
        println!(
            "eps = {}: {} queries, halt {:?}, fresh accuracy {:.4} -> {}",
            run.epsilon, run.queries, run.halt_index, run.final_fresh_accuracy, run.trace_file
        );
    }
    println!("outputs in {}", config.output_dir.display());
    Ok(())
}
