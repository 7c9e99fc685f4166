//! Greedy classifier search on data where 50 of 500 features carry signal,
//! run under the MCLT and single-Bernstein stopping rules.
//!
//! Run with `cargo run --release --example signal_experiment`.

use radabound::{run_experiment, BoundMethod, DatasetSpec, GuardConfig};

fn main() -> radabound::Result<()> {
    let spec = DatasetSpec::signal(500, 4.0, 50, 0.5, 2);
    for method in [BoundMethod::Mclt, BoundMethod::BernsteinSingle] {
        let result = run_experiment(&spec, &GuardConfig::new(0.055, 0.1, 32, method, 2))?;
        let halt = result
            .trace
            .halt_index
            .map_or("never".to_string(), |k| format!("at query {k}"));
        println!(
            "{:<16} halted {halt:<14} final support {:>3}, fresh accuracy {:.4}",
            method.as_str(),
            result.classifier.support(),
            result.final_fresh_accuracy
        );
    }
    Ok(())
}
