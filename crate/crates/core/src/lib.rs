//! Reusable holdout guarded by online Rademacher-complexity estimates.
//!
//! A [`Guard`] answers adaptively chosen statistical queries on a fixed
//! holdout sample. After each query it re-estimates the Rademacher
//! complexity of everything asked so far and bounds the probability that
//! any answer is off by more than `ε`; once that probability cannot be kept
//! below `δ(1 − δ)` it halts for good.
//!
//! ```
//! use radabound::{BoundMethod, Guard, GuardConfig, HoldoutSample};
//!
//! let sample = HoldoutSample::new((0..1000).map(|i| i as f64 / 1000.0).collect())?;
//! let mut guard = Guard::new(sample, GuardConfig::new(0.2, 0.1, 32, BoundMethod::Mclt, 7))?;
//! let outcome = guard.submit_query(|x| if *x < 0.25 { 1.0 } else { 0.0 })?;
//! assert_eq!(outcome.mean, Some(0.25));
//! # Ok::<(), radabound::Error>(())
//! ```
//!
//! The remaining modules reproduce a synthetic adaptive-learning experiment
//! ([`synthdata`], [`harness`]), compare concentration bounds ([`bounds`]),
//! and compute the Thresholdout holdout size ([`thresholdout`]).

pub mod bounds;
pub mod error;
pub mod guard;
pub mod harness;
pub mod io;
pub mod rademacher;
pub mod seed;
pub mod synthdata;
pub mod thresholdout;

pub use bounds::{BoundInputs, BoundMethod};
pub use error::{Error, Result};
pub use guard::{
    filtration_bound, stopping_threshold, Guard, GuardConfig, HoldoutSample, QueryOutcome,
    QueryStatus,
};
pub use harness::{run_experiment, ExperimentResult, ExperimentTrace, LinearClassifier, TraceRow};
pub use rademacher::{exact_empirical_rademacher, RademacherState, SignMatrix};
pub use synthdata::{generate, DatasetSpec, LabeledDataset};
pub use thresholdout::{comparison_report, min_holdout_size, ThresholdoutParams};
