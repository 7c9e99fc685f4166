//! Tail bounds on the generalization error of an adaptively grown query
//! family, and on the error of the Monte-Carlo Rademacher estimate.
//!
//! Every `psi_bound_*` function bounds
//!
//! ```text
//! Pr[ Ψ(F_k, x̄) > 2·R̃ + slack ]
//! ```
//!
//! where `Ψ` is the largest gap between empirical and true means over the
//! family, `R̃` is the estimate kept by [`crate::rademacher::RademacherState`]
//! from `ℓ` sign vectors, and `m` is the sample size. The `est_error_*`
//! functions bound `Pr[R − R̃ > ε]` alone.
//!
//! All results are probabilities clamped to `[0, 1]`. At `slack = 0` the
//! exponential bounds return 1 and the Gaussian ones return 1/2.

mod minimize;
pub mod normal;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_sig10;

pub use minimize::{grid_golden_min, GRID_POINTS, REFINE_TOL};
pub use normal::{erfc, normal_cdf, normal_sf};

/// Which bound the guard uses to turn the remaining slack into `δ′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    /// Union of the McDiarmid generalization bound and the Bernstein
    /// estimate-error bound, minimized over the split.
    BernsteinTwoTerm,
    /// One Bernstein application over the joint martingale.
    BernsteinSingle,
    /// Martingale central limit theorem.
    Mclt,
    /// Both halves bounded with McDiarmid.
    McdiarmidCombined,
}

impl BoundMethod {
    pub const ALL: [BoundMethod; 4] = [
        BoundMethod::BernsteinTwoTerm,
        BoundMethod::BernsteinSingle,
        BoundMethod::Mclt,
        BoundMethod::McdiarmidCombined,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundMethod::BernsteinTwoTerm => "bernstein_two_term",
            BoundMethod::BernsteinSingle => "bernstein_single",
            BoundMethod::Mclt => "mclt",
            BoundMethod::McdiarmidCombined => "mcdiarmid_combined",
        }
    }

    /// `δ′` for the given inputs.
    pub fn delta_prime(self, inputs: BoundInputs) -> f64 {
        let BoundInputs { m, l, slack } = inputs;
        match self {
            BoundMethod::BernsteinTwoTerm => two_term(m, l, slack),
            BoundMethod::BernsteinSingle => single_bim(m, l, slack),
            BoundMethod::Mclt => mclt(m, l, slack),
            BoundMethod::McdiarmidCombined => mcdiarmid_combined(m, l, slack),
        }
    }
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown bound method '{s}'")))
    }
}

/// Validated `(m, ℓ, slack)` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    m: usize,
    l: usize,
    slack: f64,
}

impl BoundInputs {
    pub fn new(m: usize, l: usize, slack: f64) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::InvalidConfig(format!(
                "bounds need m >= 1 and l >= 1 (got m = {m}, l = {l})"
            )));
        }
        if !(slack >= 0.0 && slack.is_finite()) {
            return Err(Error::Domain(format!(
                "slack {slack} must be finite and >= 0"
            )));
        }
        Ok(Self { m, l, slack })
    }

    /// Inputs for the guard: `slack = max(0, ε − 2R̃)`.
    pub fn from_estimate(m: usize, l: usize, epsilon: f64, r_tilde: f64) -> Result<Self> {
        Self::new(m, l, (epsilon - 2.0 * r_tilde).max(0.0))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "estimation error {eps} must be finite and > 0"
        )))
    }
}

fn clamp01(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `ℓ + 4√ℓ + 20`, the variance constant of the joint martingale.
fn variance_constant(l: f64) -> f64 {
    l + 4.0 * l.sqrt() + 20.0
}

/// `Pr[R − R̃ > ε] ≤ exp(−6mℓε² / (15 + 8ℓε))`.
pub fn est_error_bernstein(m: usize, l: usize, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    BoundInputs::new(m, l, 0.0)?;
    let (m, l) = (m as f64, l as f64);
    Ok(clamp01(
        (-6.0 * m * l * eps * eps / (15.0 + 8.0 * l * eps)).exp(),
    ))
}

/// `Pr[R − R̃ > ε] ≤ exp(−2mℓε² / (ℓ + 4))`.
pub fn est_error_mcdiarmid(m: usize, l: usize, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    BoundInputs::new(m, l, 0.0)?;
    let (m, l) = (m as f64, l as f64);
    Ok(clamp01((-2.0 * m * l * eps * eps / (l + 4.0)).exp()))
}

/// Single sign vector: `Pr[R − R̃ > ε] ≤ exp(−mε²/2)`.
pub fn est_error_mcdiarmid_single(m: usize, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    BoundInputs::new(m, 1, 0.0)?;
    Ok(clamp01((-(m as f64) * eps * eps / 2.0).exp()))
}

/// `min over α ∈ (0, slack)` of `exp(−2m(slack−α)²) + exp(−3mℓα² / (30 + 8ℓα))`.
pub fn psi_bound_two_term(m: usize, l: usize, slack: f64) -> Result<f64> {
    let i = BoundInputs::new(m, l, slack)?;
    Ok(two_term(i.m, i.l, i.slack))
}

/// The objective minimized by [`psi_bound_two_term`], unclamped.
pub fn two_term_objective(m: usize, l: usize, slack: f64, alpha: f64) -> f64 {
    let (m, l) = (m as f64, l as f64);
    let gen = (-2.0 * m * (slack - alpha).powi(2)).exp();
    let est = (-3.0 * m * l * alpha * alpha / (30.0 + 8.0 * l * alpha)).exp();
    gen + est
}

fn two_term(m: usize, l: usize, slack: f64) -> f64 {
    if slack == 0.0 {
        return 1.0;
    }
    let (_, v) = grid_golden_min(0.0, slack, |a| two_term_objective(m, l, slack, a));
    clamp01(v)
}

/// `exp(−slack² / ((ℓ + 4√ℓ + 20)/(2mℓ) + 4·slack/(3m)))`.
pub fn psi_bound_single_bim(m: usize, l: usize, slack: f64) -> Result<f64> {
    let i = BoundInputs::new(m, l, slack)?;
    Ok(single_bim(i.m, i.l, i.slack))
}

fn single_bim(m: usize, l: usize, slack: f64) -> f64 {
    if slack == 0.0 {
        return 1.0;
    }
    let (m, l) = (m as f64, l as f64);
    let denom = variance_constant(l) / (2.0 * m * l) + 4.0 * slack / (3.0 * m);
    clamp01((-slack * slack / denom).exp())
}

/// `1 − Φ(slack · 2√(ℓm) / √(ℓ + 4√ℓ + 20))`.
pub fn psi_bound_mclt(m: usize, l: usize, slack: f64) -> Result<f64> {
    let i = BoundInputs::new(m, l, slack)?;
    Ok(mclt(i.m, i.l, i.slack))
}

/// Standardized argument of [`psi_bound_mclt`].
pub fn mclt_z(m: usize, l: usize, slack: f64) -> f64 {
    let (m, l) = (m as f64, l as f64);
    slack * (4.0 * l * m / variance_constant(l)).sqrt()
}

fn mclt(m: usize, l: usize, slack: f64) -> f64 {
    clamp01(normal_sf(mclt_z(m, l, slack)))
}

/// `min over slack = ε₁ + 2ε₂` of `exp(−2mε₁²) + exp(−2mℓε₂² / (ℓ + 4))`.
pub fn psi_bound_mcdiarmid_combined(m: usize, l: usize, slack: f64) -> Result<f64> {
    let i = BoundInputs::new(m, l, slack)?;
    Ok(mcdiarmid_combined(i.m, i.l, i.slack))
}

/// Objective of [`psi_bound_mcdiarmid_combined`] at `ε₂ = t`, `ε₁ = slack − 2t`.
pub fn mcdiarmid_combined_objective(m: usize, l: usize, slack: f64, t: f64) -> f64 {
    let (m, l) = (m as f64, l as f64);
    let e1 = slack - 2.0 * t;
    (-2.0 * m * e1 * e1).exp() + (-2.0 * m * l * t * t / (l + 4.0)).exp()
}

fn mcdiarmid_combined(m: usize, l: usize, slack: f64) -> f64 {
    if slack == 0.0 {
        return 1.0;
    }
    let (_, v) = grid_golden_min(0.0, slack / 2.0, |t| {
        mcdiarmid_combined_objective(m, l, slack, t)
    });
    clamp01(v)
}

/// `Pr[Ψ − E[Ψ] > slack] ≲ 1 − Φ(2·slack·√m)` (two-step analysis, first step).
pub fn mclt_two_step_gen(m: usize, slack: f64) -> Result<f64> {
    let i = BoundInputs::new(m, 1, slack)?;
    Ok(normal_sf(2.0 * i.slack * (i.m as f64).sqrt()))
}

/// `Pr[R − R̃ > slack] ≲ 1 − Φ(2·slack·√(ℓm/5))` (two-step analysis, second step).
pub fn mclt_two_step_rade(m: usize, l: usize, slack: f64) -> Result<f64> {
    let i = BoundInputs::new(m, l, slack)?;
    Ok(normal_sf(
        2.0 * i.slack * (i.l as f64 * i.m as f64 / 5.0).sqrt(),
    ))
}

/// One row of the estimate-error comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub l: usize,
    pub mcdiarmid: f64,
    pub bernstein: f64,
    pub mclt: f64,
}

/// Estimate-error bounds of the three analyses for each `ℓ`.
pub fn compare_bounds_table(m: usize, eps: f64, l_values: &[usize]) -> Result<Vec<BoundRow>> {
    l_values
        .iter()
        .map(|&l| {
            Ok(BoundRow {
                l,
                mcdiarmid: est_error_mcdiarmid(m, l, eps)?,
                bernstein: est_error_bernstein(m, l, eps)?,
                mclt: mclt_two_step_rade(m, l, eps)?,
            })
        })
        .collect()
}

pub const BOUNDS_CSV_HEADER: &str = "l,mcdiarmid,bernstein,mclt";

/// CSV rendering of [`compare_bounds_table`].
pub fn bounds_table_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from(BOUNDS_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.l,
            fmt_sig10(r.mcdiarmid),
            fmt_sig10(r.bernstein),
            fmt_sig10(r.mclt)
        ));
    }
    out
}
