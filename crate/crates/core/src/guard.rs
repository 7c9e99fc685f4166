//! The guarded holdout.
//!
//! A [`Guard`] owns the holdout sample and answers queries `f: X → [0, 1]`
//! with their empirical mean. Every query is folded into the Rademacher
//! estimate first; the guard then turns the remaining slack
//! `max(0, ε − 2R̃)` into a probability `δ′` with the configured
//! [`BoundMethod`]. The mean is released only while `δ′ ≤ δ(1 − δ)`. The
//! first query that fails the test halts the guard for good and its mean is
//! withheld.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundInputs, BoundMethod};
use crate::error::{Error, Result};
use crate::rademacher::RademacherState;
use crate::seed::{seed_substream, StreamLabel};

/// The protected sample. Immutable once handed to a guard.
#[derive(Debug, Clone, PartialEq)]
pub struct HoldoutSample<P> {
    points: Vec<P>,
}

impl<P> HoldoutSample<P> {
    pub fn new(points: Vec<P>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfig(
                "holdout sample must contain at least one point".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn default_negation_closure() -> bool {
    true
}

/// Guard parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuardConfig {
    /// Target accuracy `ε ∈ (0, 1)`.
    pub epsilon: f64,
    /// Failure probability `δ ∈ (0, 1)`.
    pub delta: f64,
    /// Number of Rademacher sign vectors `ℓ`.
    pub l: usize,
    pub method: BoundMethod,
    /// Treat the query family as closed under negation (default `true`).
    #[serde(default = "default_negation_closure")]
    pub negation_closure: bool,
    pub seed: u64,
}

impl GuardConfig {
    pub fn new(epsilon: f64, delta: f64, l: usize, method: BoundMethod, seed: u64) -> Self {
        Self {
            epsilon,
            delta,
            l,
            method,
            negation_closure: true,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.epsilon) {
            return Err(Error::InvalidConfig(format!(
                "epsilon {} must lie in (0, 1)",
                self.epsilon
            )));
        }
        if !open_unit(self.delta) {
            return Err(Error::InvalidConfig(format!(
                "delta {} must lie in (0, 1)",
                self.delta
            )));
        }
        if self.l == 0 {
            return Err(Error::InvalidConfig("l must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryStatus {
    Answered,
    Halted,
}

/// Result of one submission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QueryOutcome {
    /// 1-based position of the query in the stream.
    pub index: usize,
    /// `(1/m) Σ f(x_i)`; `None` when the guard halted on this query.
    pub mean: Option<f64>,
    pub r_tilde: f64,
    pub slack: f64,
    pub delta_prime: f64,
    pub status: QueryStatus,
}

impl QueryOutcome {
    pub fn is_answered(&self) -> bool {
        self.status == QueryStatus::Answered
    }
}

/// `δ(1 − δ)`, the per-query threshold on `δ′`.
pub fn stopping_threshold(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta {delta} must lie in (0, 1)")));
    }
    Ok(delta * (1.0 - delta))
}

/// `min(1, (1 − p_k) / p_{k−1})`: the probability of `Ψ(F_k) > ε` under the
/// distribution conditioned on the answers released through step `k − 1`.
///
/// `p_km1 = 0` means the conditioning event is impossible; reported as 1.
pub fn filtration_bound(p_k: f64, p_km1: f64) -> Result<f64> {
    for (name, p) in [("p_k", p_k), ("p_km1", p_km1)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("{name} = {p} is not a probability")));
        }
    }
    if p_km1 == 0.0 {
        return Ok(1.0);
    }
    Ok(((1.0 - p_k) / p_km1).min(1.0))
}

/// Holdout guard.
#[derive(Debug, Clone)]
pub struct Guard<P> {
    sample: HoldoutSample<P>,
    config: GuardConfig,
    rad: RademacherState,
    threshold: f64,
    halted: bool,
    history: Vec<QueryOutcome>,
    values: Vec<f64>,
}

impl<P> Guard<P> {
    pub fn new(sample: HoldoutSample<P>, config: GuardConfig) -> Result<Self> {
        config.validate()?;
        let m = sample.len();
        let mut rng = seed_substream(config.seed, StreamLabel::Signs);
        let rad = RademacherState::new(m, config.l, config.negation_closure, &mut rng)?;
        Ok(Self {
            threshold: stopping_threshold(config.delta)?,
            sample,
            config,
            rad,
            halted: false,
            history: Vec::new(),
            values: Vec::with_capacity(m),
        })
    }

    /// Submits `f` and returns the outcome.
    ///
    /// A query returning a value outside `[0, 1]` is rejected with
    /// [`Error::Domain`] and leaves the guard unchanged. Submitting after a
    /// halt returns [`Error::Halted`].
    pub fn submit_query<F>(&mut self, mut f: F) -> Result<QueryOutcome>
    where
        F: FnMut(&P) -> f64,
    {
        self.submit_indexed_query(|_, x| f(x))
    }

    /// Like [`Guard::submit_query`], but `f` also receives the point's
    /// position so callers can reuse per-point work across queries.
    ///
    /// `f` is called exactly once per point, in sample order.
    pub fn submit_indexed_query<F>(&mut self, mut f: F) -> Result<QueryOutcome>
    where
        F: FnMut(usize, &P) -> f64,
    {
        if self.halted {
            return Err(Error::Halted {
                halt_index: self.history.len(),
            });
        }
        self.values.clear();
        self.values
            .extend(self.sample.points.iter().enumerate().map(|(i, x)| f(i, x)));

        // Validates the values; on error the estimator is untouched.
        let r_tilde = self.rad.update(&self.values)?;
        let m = self.sample.len();
        let mean = self.values.iter().sum::<f64>() / m as f64;

        let inputs = BoundInputs::from_estimate(m, self.config.l, self.config.epsilon, r_tilde)?;
        let delta_prime = self.config.method.delta_prime(inputs);
        let answered = delta_prime <= self.threshold;
        if !answered {
            self.halted = true;
        }
        let outcome = QueryOutcome {
            index: self.history.len() + 1,
            mean: answered.then_some(mean),
            r_tilde,
            slack: inputs.slack(),
            delta_prime,
            status: if answered {
                QueryStatus::Answered
            } else {
                QueryStatus::Halted
            },
        };
        self.history.push(outcome);
        Ok(outcome)
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    /// Index of the query that halted the guard.
    pub fn halt_index(&self) -> Option<usize> {
        self.halted.then_some(self.history.len())
    }

    pub fn history(&self) -> &[QueryOutcome] {
        &self.history
    }

    pub fn config(&self) -> &GuardConfig {
        &self.config
    }

    pub fn r_tilde(&self) -> f64 {
        self.rad.estimate()
    }

    pub fn rademacher(&self) -> &RademacherState {
        &self.rad
    }

    pub fn query_count(&self) -> usize {
        self.rad.query_count()
    }

    pub fn sample_size(&self) -> usize {
        self.sample.len()
    }

    /// `δ(1 − δ)` for this guard's `δ`.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}
