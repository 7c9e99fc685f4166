//! Holdout size required by Thresholdout compared with a fixed guarded
//! holdout.
//!
//! Run with `cargo run --example thresholdout_size`.

use radabound::{comparison_report, ThresholdoutParams};

fn main() -> radabound::Result<()> {
    let example = ThresholdoutParams::WORKED_EXAMPLE;
    println!(
        "{}",
        serde_json::to_string_pretty(&comparison_report(&example, 4000)?)?
    );
    for epsilon in [0.5, 0.2, 0.1, 0.05] {
        let r = comparison_report(&ThresholdoutParams { epsilon, ..example }, 4000)?;
        println!(
            "eps = {epsilon:<5} n = {:>12.1}  ratio to m = 4000: {:>8.2}",
            r.formula_n, r.ratio_formula
        );
    }
    Ok(())
}
