//! Compares the estimate-error bounds and the four stopping bounds.
//!
//! Run with `cargo run --example bound_comparison`.

use radabound::bounds::{bounds_table_csv, compare_bounds_table};
use radabound::io::powers_of_two;
use radabound::{BoundInputs, BoundMethod};

fn main() -> radabound::Result<()> {
    println!("estimate error at m = 1000, eps = 0.01:");
    print!(
        "{}",
        bounds_table_csv(&compare_bounds_table(1000, 0.01, &powers_of_two(2, 64))?)
    );

    println!("\nstopping bound delta' at m = 4000, l = 32:");
    print!("{:>6}", "slack");
    for method in BoundMethod::ALL {
        print!("  {:>20}", method.as_str());
    }
    println!();
    for slack in [0.01, 0.02, 0.03, 0.05, 0.08] {
        print!("{slack:>6}");
        for method in BoundMethod::ALL {
            print!(
                "  {:>20.6e}",
                method.delta_prime(BoundInputs::new(4000, 32, slack)?)
            );
        }
        println!();
    }
    Ok(())
}
