//! Compares the online Monte-Carlo estimate with the exact empirical
//! Rademacher complexity of a small family.
//!
//! Run with `cargo run --example exact_rademacher`.

use radabound::{exact_empirical_rademacher, RademacherState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn main() -> radabound::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let m = 12;
    let family: Vec<Vec<f64>> = (0..4)
        .map(|_| (0..m).map(|_| rng.gen()).collect())
        .collect();
    let exact = exact_empirical_rademacher(&family, true)?;
    println!("exact over 2^{m} sign vectors: {exact:.6}");
    for l in [1, 10, 100, 1000, 10_000] {
        let mut state = RademacherState::new(m, l, true, &mut rng)?;
        for f in &family {
            state.update(f)?;
        }
        println!("l = {l:>6}: estimate {:.6}", state.estimate());
    }
    Ok(())
}
