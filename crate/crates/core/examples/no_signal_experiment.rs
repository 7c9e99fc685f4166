//! Greedy classifier search on data with no signal. Released holdout
//! accuracies stay near 0.5 and the guard stops the search once its error
//! budget is spent.
//!
//! Run with `cargo run --release --example no_signal_experiment`.

use radabound::{run_experiment, BoundMethod, DatasetSpec, GuardConfig};

fn main() -> radabound::Result<()> {
    let spec = DatasetSpec::no_signal(500, 1.0, 1);
    for eps in [0.05, 0.1] {
        let result = run_experiment(&spec, &GuardConfig::new(eps, 0.1, 32, BoundMethod::Mclt, 1))?;
        let worst = result
            .trace
            .rows
            .iter()
            .filter_map(|r| r.holdout_accuracy)
            .map(|a| (a - 0.5).abs())
            .fold(0.0, f64::max);
        println!(
            "eps = {eps}: {} queries, halt at {:?}, max |holdout acc - 0.5| = {worst:.4}, fresh acc {:.4}",
            result.queries, result.trace.halt_index, result.final_fresh_accuracy
        );
    }
    Ok(())
}
