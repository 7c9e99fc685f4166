//! Adaptive greedy learner driven through a [`Guard`].
//!
//! Features are ranked by their training-set correlation with the label. The
//! learner starts from `w = 0` and, feature by feature, tries weight `−1` and
//! then `+1`, keeping a candidate only when the holdout loss released by the
//! guard is strictly lower than the current best. Every submitted classifier
//! costs one guard query and produces one trace row; the same classifier is
//! also scored on an independent fresh set as ground truth.
//!
//! The learner decides from released means only. Holdout scores `w·x` are
//! cached across queries, but the cache is filled from inside query
//! evaluations, never by reading the holdout directly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::guard::{Guard, GuardConfig, HoldoutSample, QueryStatus};
use crate::synthdata::{generate, DatasetSpec, LabeledDataset};

/// Weight vector in `{−1, 0, +1}^d`; predicts `sign(w·x)` with `sign(0) = +1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearClassifier {
    weights: Vec<i8>,
}

impl LinearClassifier {
    pub fn zeros(d: usize) -> Self {
        Self {
            weights: vec![0; d],
        }
    }

    pub fn from_weights(weights: Vec<i8>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.abs() > 1) {
            return Err(Error::Domain(format!("weight {w} is not in {{-1, 0, 1}}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[i8] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn set(&mut self, feature: usize, weight: i8) {
        assert!(weight.abs() <= 1);
        self.weights[feature] = weight;
    }

    /// Number of non-zero weights.
    pub fn support(&self) -> usize {
        self.weights.iter().filter(|w| **w != 0).count()
    }

    pub fn score(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::Dimension {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(x)
            .filter(|(w, _)| **w != 0)
            .map(|(w, v)| f64::from(*w) * v)
            .sum())
    }

    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        Ok(sign(self.score(x)?))
    }

    pub fn negated(&self) -> Self {
        Self {
            weights: self.weights.iter().map(|w| -w).collect(),
        }
    }
}

fn sign(score: f64) -> i8 {
    if score >= 0.0 {
        1
    } else {
        -1
    }
}

#[inline]
fn loss_from_score(score: f64, label: i8) -> f64 {
    if sign(score) == label {
        0.0
    } else {
        1.0
    }
}

/// One holdout observation as seen by the guard.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub features: Vec<f64>,
    pub label: i8,
}

/// The 0-1 loss of a fixed classifier.
#[derive(Debug, Clone)]
pub struct ZeroOneLoss {
    w: LinearClassifier,
}

/// `x ↦ 0` if `sign(w·x)` equals the label of `x`, else `1`.
pub fn zero_one_loss_query(w: LinearClassifier) -> ZeroOneLoss {
    ZeroOneLoss { w }
}

impl ZeroOneLoss {
    pub fn evaluate(&self, features: &[f64], label: i8) -> Result<f64> {
        Ok(loss_from_score(self.w.score(features)?, label))
    }

    pub fn classifier(&self) -> &LinearClassifier {
        &self.w
    }
}

/// Accuracy `1 − mean 0-1 loss` of `w` on `dataset`.
pub fn evaluate_on(dataset: &LabeledDataset, w: &LinearClassifier) -> Result<f64> {
    let loss = zero_one_loss_query(w.clone());
    let mut total = 0.0;
    for (row, label) in dataset.rows() {
        total += loss.evaluate(row, label)?;
    }
    Ok(1.0 - total / dataset.len() as f64)
}

/// Feature indices by decreasing `|c_i|`, `c_i = (1/m) Σ x[i]·l(x)` over the
/// training set; ties go to the lower index.
pub fn feature_order(train: &LabeledDataset) -> Vec<usize> {
    let mut corr = vec![0.0; train.dim()];
    for (row, label) in train.rows() {
        let l = f64::from(label);
        for (c, v) in corr.iter_mut().zip(row) {
            *c += v * l;
        }
    }
    let m = train.len() as f64;
    let strength: Vec<f64> = corr.iter().map(|c| (c / m).abs()).collect();
    let mut order: Vec<usize> = (0..train.dim()).collect();
    order.sort_by(|&a, &b| strength[b].total_cmp(&strength[a]).then(a.cmp(&b)));
    order
}

/// One submitted classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub query_index: usize,
    /// Released holdout accuracy; `None` on the query that halted the guard.
    pub holdout_accuracy: Option<f64>,
    pub fresh_accuracy: f64,
    pub r_tilde: f64,
    pub delta_prime: f64,
    pub accepted: bool,
    pub halted: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExperimentTrace {
    pub rows: Vec<TraceRow>,
    pub halt_index: Option<usize>,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub spec: DatasetSpec,
    pub config: GuardConfig,
    pub trace: ExperimentTrace,
    /// The final classifier. A feature whose test was cut short by a halt has
    /// weight 0.
    pub classifier: LinearClassifier,
    pub final_fresh_accuracy: f64,
    pub feature_order: Vec<usize>,
    pub permutation: Vec<usize>,
    pub biased_columns: Vec<usize>,
    /// Guard query count at the end (equals the number of trace rows).
    pub queries: usize,
}

/// Runs the greedy experiment for one dataset and one guard configuration.
pub fn run_experiment(spec: &DatasetSpec, config: &GuardConfig) -> Result<ExperimentResult> {
    let data = generate(spec)?;
    let order = feature_order(&data.train);
    let d = spec.d;

    let points = data
        .holdout
        .rows()
        .map(|(row, label)| LabeledPoint {
            features: row.to_vec(),
            label,
        })
        .collect();
    let mut guard = Guard::new(HoldoutSample::new(points)?, *config)?;
    let fresh = &data.fresh;

    let mut w = LinearClassifier::zeros(d);
    let mut trace = ExperimentTrace::default();

    // Scores w·x of the current best classifier.
    let mut best_holdout = vec![0.0; spec.m_holdout];
    let mut best_fresh = vec![0.0; spec.m_fresh];
    let mut cand_holdout = vec![0.0; spec.m_holdout];
    let mut cand_fresh = vec![0.0; spec.m_fresh];

    let fresh_accuracy = |scores: &[f64]| {
        let wrong: f64 = scores
            .iter()
            .zip(fresh.labels())
            .map(|(s, l)| loss_from_score(*s, *l))
            .sum();
        1.0 - wrong / scores.len() as f64
    };

    // Baseline w = 0.
    let outcome = guard.submit_query(|p| loss_from_score(0.0, p.label))?;
    let mut best_loss = outcome.mean;
    trace.rows.push(TraceRow {
        query_index: outcome.index,
        holdout_accuracy: outcome.mean.map(|l| 1.0 - l),
        fresh_accuracy: fresh_accuracy(&best_fresh),
        r_tilde: outcome.r_tilde,
        delta_prime: outcome.delta_prime,
        accepted: outcome.status == QueryStatus::Answered,
        halted: outcome.status == QueryStatus::Halted,
    });

    'features: for &feature in &order {
        let Some(_) = best_loss else { break };
        let base_holdout = best_holdout.clone();
        let base_fresh = best_fresh.clone();
        for value in [-1i8, 1] {
            let v = f64::from(value);
            let outcome = guard.submit_indexed_query(|i, p| {
                let s = base_holdout[i] + v * p.features[feature];
                cand_holdout[i] = s;
                loss_from_score(s, p.label)
            })?;
            for (i, (row, _)) in fresh.rows().enumerate() {
                cand_fresh[i] = base_fresh[i] + v * row[feature];
            }
            let halted = outcome.status == QueryStatus::Halted;
            let accepted = match (outcome.mean, best_loss) {
                (Some(loss), Some(best)) => loss < best,
                _ => false,
            };
            trace.rows.push(TraceRow {
                query_index: outcome.index,
                holdout_accuracy: outcome.mean.map(|l| 1.0 - l),
                fresh_accuracy: fresh_accuracy(&cand_fresh),
                r_tilde: outcome.r_tilde,
                delta_prime: outcome.delta_prime,
                accepted,
                halted,
            });
            if halted {
                // A partially tested feature is reported with weight 0.
                w.set(feature, 0);
                break 'features;
            }
            if accepted {
                best_loss = outcome.mean;
                w.set(feature, value);
                std::mem::swap(&mut best_holdout, &mut cand_holdout);
                std::mem::swap(&mut best_fresh, &mut cand_fresh);
            }
        }
    }
    trace.halt_index = guard.halt_index();

    Ok(ExperimentResult {
        spec: *spec,
        config: *config,
        final_fresh_accuracy: evaluate_on(fresh, &w)?,
        classifier: w,
        trace,
        feature_order: order,
        permutation: data.permutation,
        biased_columns: data.biased_columns,
        queries: guard.query_count(),
    })
}
