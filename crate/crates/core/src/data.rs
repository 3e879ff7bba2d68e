//! Dataset loading, synthetic instances and the barycentric transform.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::ConstraintSpec;
use crate::linalg::{norm1, ColumnMatrix};

/// How samples are laid out in the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// One row per sample, one column per feature (regression, logistic).
    SamplesAsRows,
    /// One column per sample (SVM and MEB duals).
    SamplesAsColumns,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub matrix: ColumnMatrix,
    pub targets: Vec<f64>,
    pub orientation: Orientation,
}

impl LabeledDataset {
    pub fn n_samples(&self) -> usize {
        match self.orientation {
            Orientation::SamplesAsRows => self.matrix.n_rows(),
            Orientation::SamplesAsColumns => self.matrix.n_cols(),
        }
    }

    pub fn is_binary(&self) -> bool {
        self.targets.iter().all(|&t| t == 1.0 || t == -1.0)
    }

    /// Columns `yᵢ·āᵢ` with samples as columns. Labels must be ±1.
    pub fn label_folded_columns(&self) -> Result<ColumnMatrix> {
        if !self.is_binary() {
            return Err(Error::InvalidParameter("labels must be -1 or +1".into()));
        }
        let samples = self.sample_rows();
        let n_features = self.n_features();
        let mut trip = Vec::new();
        for (s, row) in samples.iter().enumerate() {
            for &(f, v) in row {
                trip.push((f, s, self.targets[s] * v));
            }
        }
        let m = ColumnMatrix::from_triplets(n_features, samples.len(), &trip)?;
        Ok(if self.matrix.is_sparse() { m } else { m.to_dense() })
    }

    /// Rows `−yᵢ·āᵢ` with samples as rows, the logistic-loss layout.
    pub fn label_folded_rows(&self) -> Result<ColumnMatrix> {
        if !self.is_binary() {
            return Err(Error::InvalidParameter("labels must be -1 or +1".into()));
        }
        let samples = self.sample_rows();
        let mut trip = Vec::new();
        for (s, row) in samples.iter().enumerate() {
            for &(f, v) in row {
                trip.push((s, f, -self.targets[s] * v));
            }
        }
        let m = ColumnMatrix::from_triplets(samples.len(), self.n_features(), &trip)?;
        Ok(if self.matrix.is_sparse() { m } else { m.to_dense() })
    }

    pub fn n_features(&self) -> usize {
        match self.orientation {
            Orientation::SamplesAsRows => self.matrix.n_cols(),
            Orientation::SamplesAsColumns => self.matrix.n_rows(),
        }
    }

    /// Sparse feature list per sample.
    pub fn sample_rows(&self) -> Vec<Vec<(usize, f64)>> {
        match self.orientation {
            Orientation::SamplesAsRows => self.matrix.rows(),
            Orientation::SamplesAsColumns => (0..self.matrix.n_cols())
                .map(|c| {
                    self.matrix
                        .column(c)
                        .to_dense(self.matrix.n_rows())
                        .into_iter()
                        .enumerate()
                        .filter(|(_, v)| *v != 0.0)
                        .collect()
                })
                .collect(),
        }
    }
}

/// Parses libsvm text: `<label> <index>:<value> …` with 1-based, strictly increasing indices.
/// Samples become rows.
pub fn parse_libsvm(text: &str, expected_dim: Option<usize>) -> Result<LabeledDataset> {
    let mut targets = Vec::new();
    let mut trip = Vec::new();
    let mut max_index = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line");
        let label: f64 = label_tok
            .parse()
            .map_err(|_| err(format!("bad label {label_tok:?}")))?;
        if !label.is_finite() {
            return Err(err("non-finite label".into()));
        }
        let row = targets.len();
        targets.push(label);
        let mut prev = 0usize;
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| err(format!("expected index:value, got {tok:?}")))?;
            let idx: usize = idx.parse().map_err(|_| err(format!("bad index {idx:?}")))?;
            let val: f64 = val.parse().map_err(|_| err(format!("bad value {val:?}")))?;
            if idx == 0 {
                return Err(err("indices are 1-based".into()));
            }
            if idx <= prev {
                return Err(err(format!("index {idx} not greater than {prev}")));
            }
            if !val.is_finite() {
                return Err(err("non-finite value".into()));
            }
            prev = idx;
            max_index = max_index.max(idx);
            if val != 0.0 {
                trip.push((row, idx - 1, val));
            }
        }
    }
    if targets.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no samples".into(),
        });
    }
    let dim = match expected_dim {
        Some(d) if d < max_index => {
            return Err(Error::Parse {
                line: 0,
                message: format!("feature index {max_index} exceeds expected dimension {d}"),
            })
        }
        Some(d) => d,
        None => max_index.max(1),
    };
    Ok(LabeledDataset {
        matrix: ColumnMatrix::from_triplets(targets.len(), dim, &trip)?,
        targets,
        orientation: Orientation::SamplesAsRows,
    })
}

pub fn read_libsvm(path: &Path, expected_dim: Option<usize>) -> Result<LabeledDataset> {
    let text = std::fs::read_to_string(path)?;
    parse_libsvm(&text, expected_dim)
}

pub fn format_libsvm(data: &LabeledDataset) -> String {
    let mut out = String::new();
    for (label, row) in data.targets.iter().zip(data.sample_rows()) {
        let _ = write!(out, "{label}");
        for (f, v) in row {
            let _ = write!(out, " {}:{v:?}", f + 1);
        }
        out.push('\n');
    }
    out
}

pub fn write_libsvm(path: &Path, data: &LabeledDataset) -> Result<()> {
    std::fs::write(path, format_libsvm(data))?;
    Ok(())
}

/// Gaussian regression instance with a sparse ±1 ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub d: usize,
    pub n: usize,
    pub support: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.n == 0 {
            return Err(Error::InvalidParameter("d and n must be positive".into()));
        }
        if self.support > self.n {
            return Err(Error::InvalidParameter(format!(
                "support {} exceeds n {}",
                self.support, self.n
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidParameter("noise_sigma must be ≥ 0".into()));
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Result<ColumnMatrix> {
    let data: Vec<f64> = (0..d * n).map(|_| rng.sample(StandardNormal)).collect();
    ColumnMatrix::from_col_major(d, n, data)
}

/// `b = Ax* + σ·ε` with `A` standard normal and `x*` having `support` entries of ±1.
pub fn synth_regression(spec: &SyntheticSpec) -> Result<(LabeledDataset, Vec<f64>)> {
    spec.validate()?;
    let mut rng = rng(spec.seed);
    let a = gaussian_matrix(&mut rng, spec.d, spec.n)?;
    let mut idx: Vec<usize> = (0..spec.n).collect();
    for k in 0..spec.support {
        let j = rng.random_range(k..spec.n);
        idx.swap(k, j);
    }
    let mut x = vec![0.0; spec.n];
    for &i in &idx[..spec.support] {
        x[i] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    }
    let mut b = a.mat_vec(&x)?;
    if spec.noise_sigma > 0.0 {
        for v in &mut b {
            let e: f64 = rng.sample(StandardNormal);
            *v += spec.noise_sigma * e;
        }
    }
    Ok((
        LabeledDataset {
            matrix: a,
            targets: b,
            orientation: Orientation::SamplesAsRows,
        },
        x,
    ))
}

/// Labels from the sign of a noisy linear score on a Gaussian design; samples as rows.
pub fn synth_classification(spec: &SyntheticSpec) -> Result<LabeledDataset> {
    let (mut data, _) = synth_regression(spec)?;
    let mut rng = rng(spec.seed ^ 0x9e37_79b9_7f4a_7c15);
    for t in &mut data.targets {
        let e: f64 = rng.sample(StandardNormal);
        let score = *t + 0.5 * e;
        *t = if score >= 0.0 { 1.0 } else { -1.0 };
    }
    Ok(data)
}

/// `n` Gaussian points in `d` dimensions as columns.
pub fn synth_points(d: usize, n: usize, seed: u64) -> Result<ColumnMatrix> {
    gaussian_matrix(&mut rng(seed), d, n)
}

/// `([rA | −rA], x_△)` with `x_△` on the unit simplex and `[rA|−rA]·x_△ = A·x`.
/// Slack `1 − ‖x‖₁/r` is split evenly over all `2n` copies.
pub fn to_barycentric(a: &ColumnMatrix, x: &[f64], r: f64) -> Result<(ColumnMatrix, Vec<f64>)> {
    let simplex = barycentric_point(x, r)?;
    Ok((a.scaled(r).hstack_neg(), simplex))
}

pub fn barycentric_point(x: &[f64], r: f64) -> Result<Vec<f64>> {
    if !(ConstraintSpec::L1Ball { radius: r }).membership(x) || r <= 0.0 {
        return Err(Error::Infeasible(format!("‖x‖₁ = {} exceeds radius {r}", norm1(x))));
    }
    let n = x.len();
    let rest = 1.0 - norm1(x) / r;
    // Points on the sphere up to rounding keep exact zeros in both copies.
    let slack = if rest > 1e-12 { rest / (2 * n) as f64 } else { 0.0 };
    let mut out = vec![slack; 2 * n];
    for (i, &v) in x.iter().enumerate() {
        if v > 0.0 {
            out[i] += v / r;
        } else if v < 0.0 {
            out[n + i] -= v / r;
        }
    }
    Ok(out)
}

/// `x = r·(x⁺ − x⁻)`
pub fn from_barycentric(x_simplex: &[f64], r: f64) -> Result<Vec<f64>> {
    if !x_simplex.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter("barycentric vector must have even length".into()));
    }
    let n = x_simplex.len() / 2;
    Ok((0..n).map(|i| r * (x_simplex[i] - x_simplex[n + i])).collect())
}
