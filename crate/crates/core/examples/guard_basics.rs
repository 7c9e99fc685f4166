//! Submits adaptively chosen threshold queries to a guarded holdout until it
//! halts.
//!
//! Run with `cargo run --example guard_basics`.

use radabound::{BoundMethod, Guard, GuardConfig, HoldoutSample, QueryStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn main() -> radabound::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let points: Vec<f64> = (0..400).map(|_| rng.gen()).collect();
    let config = GuardConfig::new(0.15, 0.1, 32, BoundMethod::Mclt, 7);
    let mut guard = Guard::new(HoldoutSample::new(points)?, config)?;

    println!("threshold on delta': {:.4}", guard.threshold());
    println!("query  mean      r_tilde   slack     delta'");
    for q in 0..200 {
        let cut = (q as f64 * 0.618_033_988_75).fract();
        let out = guard.submit_query(|x| if *x < cut { 1.0 } else { 0.0 })?;
        let mean = out
            .mean
            .map_or("withheld".to_string(), |m| format!("{m:.4}"));
        println!(
            "{:>5}  {mean:<8}  {:.5}   {:.5}   {:.3e}",
            out.index, out.r_tilde, out.slack, out.delta_prime
        );
        if out.status == QueryStatus::Halted {
            break;
        }
    }
    match guard.halt_index() {
        Some(k) => println!("halted at query {k}; later queries are refused"),
        None => println!("answered all queries"),
    }
    Ok(())
}
