//! Synthetic classification data.
//!
//! Labels are iid uniform on `{−1, +1}`. Features are iid `N(0, variance)`;
//! in the signal scenario `n_biased` of them additionally get `bias · label`
//! added. The biased features are the canonical columns `0..n_biased`, after
//! which all columns go through one seeded permutation shared by the three
//! sets, so column order carries no information.
//!
//! Streams (see [`crate::seed`]): features of each set come from its own
//! label (`train`, `holdout`, `fresh`), labels from `labels[0|1|2]`, and the
//! column permutation from `permutation`.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{seed_substream, seed_substream_indexed, StreamLabel};

/// Identity of the normal sampler, written to run metadata.
pub const NORMAL_SAMPLER_ID: &str = "marsaglia-polar";

fn default_set_size() -> usize {
    4000
}

/// Shape of a synthetic experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    #[serde(default = "default_set_size")]
    pub m_train: usize,
    #[serde(default = "default_set_size")]
    pub m_holdout: usize,
    #[serde(default = "default_set_size")]
    pub m_fresh: usize,
    pub d: usize,
    /// Feature variance `σ²`.
    pub variance: f64,
    #[serde(default)]
    pub n_biased: usize,
    #[serde(default)]
    pub bias: f64,
    pub seed: u64,
}

impl DatasetSpec {
    /// No-signal data at the default set sizes.
    pub fn no_signal(d: usize, variance: f64, seed: u64) -> Self {
        Self {
            m_train: default_set_size(),
            m_holdout: default_set_size(),
            m_fresh: default_set_size(),
            d,
            variance,
            n_biased: 0,
            bias: 0.0,
            seed,
        }
    }

    /// Signal data: `n_biased` features shifted by `bias · label`.
    pub fn signal(d: usize, variance: f64, n_biased: usize, bias: f64, seed: u64) -> Self {
        Self {
            n_biased,
            bias,
            ..Self::no_signal(d, variance, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_train == 0 || self.m_holdout == 0 || self.m_fresh == 0 {
            return Err(Error::InvalidConfig(
                "train, holdout and fresh sets need at least one point".into(),
            ));
        }
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be >= 1".into()));
        }
        if !(self.variance > 0.0 && self.variance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "variance {} must be finite and > 0",
                self.variance
            )));
        }
        if self.n_biased > self.d {
            return Err(Error::InvalidConfig(format!(
                "n_biased = {} exceeds d = {}",
                self.n_biased, self.d
            )));
        }
        if !self.bias.is_finite() {
            return Err(Error::InvalidConfig("bias must be finite".into()));
        }
        Ok(())
    }
}

/// Dense row-major feature matrix with ±1 labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Vec<f64>,
    labels: Vec<i8>,
    d: usize,
}

impl LabeledDataset {
    pub fn new(features: Vec<f64>, labels: Vec<i8>, d: usize) -> Result<Self> {
        if d == 0 || labels.is_empty() {
            return Err(Error::InvalidConfig(
                "dataset must have points and features".into(),
            ));
        }
        if features.len() != labels.len() * d {
            return Err(Error::Dimension {
                expected: labels.len() * d,
                got: features.len(),
            });
        }
        if let Some(l) = labels.iter().find(|l| l.abs() != 1) {
            return Err(Error::Domain(format!("label {l} is not ±1")));
        }
        Ok(Self {
            features,
            labels,
            d,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn label(&self, i: usize) -> i8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], i8)> {
        self.features
            .chunks_exact(self.d)
            .zip(self.labels.iter().copied())
    }

    /// Writes `f0,…,f{d−1},label` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = (0..self.d)
            .map(|j| format!("f{j}"))
            .chain(["label".into()])
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for (row, label) in self.rows() {
            for v in row {
                write!(w, "{},", crate::io::fmt_sig10(*v))?;
            }
            writeln!(w, "{label}")?;
        }
        Ok(())
    }
}

/// Train, holdout and fresh sets plus the column bookkeeping.
#[derive(Debug, Clone)]
pub struct GeneratedData {
    pub train: LabeledDataset,
    pub holdout: LabeledDataset,
    pub fresh: LabeledDataset,
    /// `permutation[c]` is the canonical feature stored in output column `c`.
    pub permutation: Vec<usize>,
    /// Output columns carrying signal, ascending.
    pub biased_columns: Vec<usize>,
}

/// Marsaglia's polar method; keeps the second variate of each pair.
#[derive(Debug, Clone, Default)]
pub struct PolarNormal {
    spare: Option<f64>,
}

impl PolarNormal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (z0, z1) = polar_pair(rng);
        self.spare = Some(z1);
        z0
    }
}

fn polar_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let k = (-2.0 * s.ln() / s).sqrt();
            return (u * k, v * k);
        }
    }
}

/// One standard normal variate (the pair's second value is discarded).
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    polar_pair(rng).0
}

/// Generates all three sets for `spec`.
pub fn generate(spec: &DatasetSpec) -> Result<GeneratedData> {
    spec.validate()?;
    let permutation = column_permutation(spec.d, spec.seed);
    let mut biased_columns: Vec<usize> = permutation
        .iter()
        .enumerate()
        .filter(|(_, &canon)| canon < spec.n_biased)
        .map(|(c, _)| c)
        .collect();
    biased_columns.sort_unstable();

    let make = |label: StreamLabel, index: u32, m: usize| {
        generate_set(spec, &permutation, label, index, m)
    };
    Ok(GeneratedData {
        train: make(StreamLabel::Train, 0, spec.m_train)?,
        holdout: make(StreamLabel::Holdout, 1, spec.m_holdout)?,
        fresh: make(StreamLabel::Fresh, 2, spec.m_fresh)?,
        permutation,
        biased_columns,
    })
}

fn column_permutation(d: usize, seed: u64) -> Vec<usize> {
    let mut rng = seed_substream(seed, StreamLabel::Permutation);
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

fn generate_set(
    spec: &DatasetSpec,
    permutation: &[usize],
    features_label: StreamLabel,
    labels_index: u32,
    m: usize,
) -> Result<LabeledDataset> {
    let mut label_rng = seed_substream_indexed(spec.seed, StreamLabel::Labels, labels_index);
    let labels: Vec<i8> = (0..m)
        .map(|_| if label_rng.gen::<bool>() { 1 } else { -1 })
        .collect();

    let mut rng = seed_substream(spec.seed, features_label);
    let mut normal = PolarNormal::new();
    let sd = spec.variance.sqrt();
    let mut features = Vec::with_capacity(m * spec.d);
    for &label in &labels {
        for &canon in permutation {
            let mut v = sd * normal.sample(&mut rng);
            if canon < spec.n_biased {
                v += spec.bias * f64::from(label);
            }
            features.push(v);
        }
    }
    LabeledDataset::new(features, labels, spec.d)
}
