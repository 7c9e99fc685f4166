//! Online Monte-Carlo estimate of the empirical Rademacher complexity of a
//! growing query family.
//!
//! `ℓ` sign vectors `σ_j ∈ {−1,+1}^m` are drawn once. For every vector the
//! state keeps the running supremum
//!
//! ```text
//! M_j = max over answered f of (1/m) Σ_i f(x_i) σ_{j,i}
//! ```
//!
//! and the estimate is `R̃ = (1/ℓ) Σ_j M_j`. Each running supremum starts at
//! 0, so the tracked family always contains the zero function.
//!
//! With `negation_closure` (the default) the correlation enters as `|c_j|`,
//! i.e. the family is treated as closed under `f ↦ −f`. Without it the raw
//! signed correlation is used.

use rand::Rng;

use crate::error::{Error, Result};

/// Largest sample size accepted by [`exact_empirical_rademacher`].
pub const MAX_EXACT_M: usize = 20;

/// `ℓ × m` matrix of Rademacher signs, stored row-major as `±1.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignMatrix {
    entries: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl SignMatrix {
    /// Draws `rows × cols` iid uniform signs from `rng`, row by row.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidConfig(format!(
                "sign matrix needs l >= 1 and m >= 1 (got l = {rows}, m = {cols})"
            )));
        }
        let entries = (0..rows * cols)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        Ok(Self {
            entries,
            rows,
            cols,
        })
    }

    /// Builds a matrix from explicit rows of `±1`.
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::InvalidConfig("sign matrix must be non-empty".into()));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    got: row.len(),
                });
            }
            for &s in row {
                match s {
                    1 => entries.push(1.0),
                    -1 => entries.push(-1.0),
                    other => return Err(Error::Domain(format!("sign entry {other} is not ±1"))),
                }
            }
        }
        Ok(Self {
            entries,
            rows: rows.len(),
            cols,
        })
    }

    /// Number of sign vectors `ℓ`.
    pub fn vector_count(&self) -> usize {
        self.rows
    }

    /// Sample size `m`.
    pub fn sample_size(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, i: usize) -> i8 {
        if self.entries[j * self.cols + i] > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.entries[j * self.cols..(j + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.cols)
    }
}

/// Running state of the estimator.
#[derive(Debug, Clone)]
pub struct RademacherState {
    signs: SignMatrix,
    running_sup: Vec<f64>,
    query_count: usize,
    negation_closure: bool,
}

impl RademacherState {
    /// Fresh state with `ℓ` sign vectors of length `m` drawn from `rng`.
    pub fn new<R: Rng + ?Sized>(
        m: usize,
        l: usize,
        negation_closure: bool,
        rng: &mut R,
    ) -> Result<Self> {
        Ok(Self::with_signs(
            SignMatrix::random(l, m, rng)?,
            negation_closure,
        ))
    }

    /// Fresh state over a caller-supplied sign matrix.
    pub fn with_signs(signs: SignMatrix, negation_closure: bool) -> Self {
        let l = signs.vector_count();
        Self {
            signs,
            running_sup: vec![0.0; l],
            query_count: 0,
            negation_closure,
        }
    }

    /// Folds one more function into the family and returns the new estimate.
    ///
    /// `values[i]` is `f(x_i)` and must lie in `[0, 1]`. The state is left
    /// untouched when validation fails.
    pub fn update(&mut self, values: &[f64]) -> Result<f64> {
        let m = self.signs.sample_size();
        if values.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: values.len(),
            });
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::Domain(format!(
                "query value {v} at point {i} is outside [0, 1]"
            )));
        }
        let inv_m = 1.0 / m as f64;
        for (sup, row) in self.running_sup.iter_mut().zip(self.signs.rows()) {
            let corr = dot(row, values) * inv_m;
            let corr = if self.negation_closure {
                corr.abs()
            } else {
                corr
            };
            if corr > *sup {
                *sup = corr;
            }
        }
        self.query_count += 1;
        Ok(self.estimate())
    }

    /// Current estimate `R̃`.
    pub fn estimate(&self) -> f64 {
        self.running_sup.iter().sum::<f64>() / self.running_sup.len() as f64
    }

    pub fn running_sup(&self) -> &[f64] {
        &self.running_sup
    }

    pub fn query_count(&self) -> usize {
        self.query_count
    }

    pub fn negation_closure(&self) -> bool {
        self.negation_closure
    }

    pub fn signs(&self) -> &SignMatrix {
        &self.signs
    }

    pub fn sample_size(&self) -> usize {
        self.signs.sample_size()
    }

    pub fn vector_count(&self) -> usize {
        self.signs.vector_count()
    }
}

// Fixed left-to-right order keeps results bit-reproducible.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let k = c * 4;
        acc[0] += a[k] * b[k];
        acc[1] += a[k + 1] * b[k + 1];
        acc[2] += a[k + 2] * b[k + 2];
        acc[3] += a[k + 3] * b[k + 3];
    }
    let mut tail = 0.0;
    for k in chunks * 4..a.len() {
        tail += a[k] * b[k];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Exact empirical Rademacher complexity of a finite family by enumerating
/// all `2^m` sign vectors.
///
/// `value_matrix[f][i]` is the value of function `f` on point `i`. With
/// `negation_closure` the supremum also ranges over `−f`.
pub fn exact_empirical_rademacher(
    value_matrix: &[Vec<f64>],
    negation_closure: bool,
) -> Result<f64> {
    let m = value_matrix.first().map_or(0, Vec::len);
    if value_matrix.is_empty() || m == 0 {
        return Err(Error::InvalidConfig(
            "need at least one function and one point".into(),
        ));
    }
    if m > MAX_EXACT_M {
        return Err(Error::EnumerationTooLarge {
            m,
            limit: MAX_EXACT_M,
        });
    }
    for row in value_matrix {
        if row.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: row.len(),
            });
        }
        if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Domain(format!("value {v} is outside [0, 1]")));
        }
    }

    let total: u32 = 1 << m;
    let mut acc = 0.0;
    for mask in 0..total {
        let sup = value_matrix
            .iter()
            .map(|row| {
                let s: f64 = row
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if mask >> i & 1 == 1 { *v } else { -*v })
                    .sum::<f64>()
                    / m as f64;
                if negation_closure {
                    s.abs()
                } else {
                    s
                }
            })
            .fold(f64::NEG_INFINITY, f64::max);
        acc += sup;
    }
    Ok(acc / f64::from(total))
}
