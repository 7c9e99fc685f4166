//! Holdout-size lower bound of the Thresholdout reusable holdout, for
//! sample-complexity comparisons.
//!
//! ```text
//! n ≥ 96 ε⁻² ln(4k/δ) · min(80 √(B ln(1/(εδ))), 16B)
//! ```
//!
//! The published worked example for `(k, B, ε, δ) = (10, 1, 0.5, 0.1)` quotes
//! `n ≥ 3.7 × 10⁶`, but its arithmetic uses `ε⁻² = 400` (i.e. `ε = 0.05`);
//! the formula at `ε = 0.5` gives about `3.68 × 10⁴`. Reports carry both
//! numbers.

use serde::Serialize;

use crate::error::{Error, Result};

/// The published figure for the worked example.
pub const PRINTED_EXAMPLE_N: f64 = 3.7e6;

const EXAMPLE_NOTE: &str =
    "printed figure 3.7e6 evaluates the formula with eps^-2 = 400 (eps = 0.05); \
     at the stated eps = 0.5 the formula gives formula_n";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdoutParams {
    /// Number of queries.
    pub k: u64,
    /// Overfitting budget.
    pub b: u64,
    pub epsilon: f64,
    pub delta: f64,
}

impl ThresholdoutParams {
    /// The worked example: 10 queries, budget 1, `ε = 0.5`, `δ = 0.1`.
    pub const WORKED_EXAMPLE: ThresholdoutParams = ThresholdoutParams {
        k: 10,
        b: 1,
        epsilon: 0.5,
        delta: 0.1,
    };

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.b == 0 {
            return Err(Error::Domain("k and B must be >= 1".into()));
        }
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.epsilon) || !open_unit(self.delta) {
            return Err(Error::Domain(format!(
                "epsilon {} and delta {} must lie in (0, 1)",
                self.epsilon, self.delta
            )));
        }
        if self.epsilon * self.delta >= 1.0 {
            return Err(Error::Domain("epsilon * delta must be < 1".into()));
        }
        Ok(())
    }

    fn is_worked_example(&self) -> bool {
        *self == Self::WORKED_EXAMPLE
    }
}

/// Minimum holdout size, evaluated literally from the formula.
pub fn min_holdout_size(p: &ThresholdoutParams) -> Result<f64> {
    p.validate()?;
    let (k, b) = (p.k as f64, p.b as f64);
    let sqrt_branch = 80.0 * (b * (1.0 / (p.epsilon * p.delta)).ln()).sqrt();
    let linear_branch = 16.0 * b;
    Ok(96.0 / (p.epsilon * p.epsilon) * (4.0 * k / p.delta).ln() * sqrt_branch.min(linear_branch))
}

/// Side-by-side comparison with a guarded holdout of size `radabound_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub k: u64,
    pub b: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub formula_n: f64,
    /// Only present for the published worked example.
    pub printed_n: Option<f64>,
    pub radabound_m: u64,
    pub ratio_formula: f64,
    pub ratio_printed: Option<f64>,
    /// Set when the Thresholdout requirement is below `radabound_m`.
    pub thresholdout_smaller: bool,
    pub note: Option<&'static str>,
}

pub fn comparison_report(p: &ThresholdoutParams, radabound_m: u64) -> Result<ComparisonReport> {
    if radabound_m == 0 {
        return Err(Error::Domain("radabound_m must be >= 1".into()));
    }
    let formula_n = min_holdout_size(p)?;
    let m = radabound_m as f64;
    let printed = p.is_worked_example().then_some(PRINTED_EXAMPLE_N);
    Ok(ComparisonReport {
        k: p.k,
        b: p.b,
        epsilon: p.epsilon,
        delta: p.delta,
        formula_n,
        printed_n: printed,
        radabound_m,
        ratio_formula: formula_n / m,
        ratio_printed: printed.map(|n| n / m),
        thresholdout_smaller: formula_n < m,
        note: printed.map(|_| EXAMPLE_NOTE),
    })
}
