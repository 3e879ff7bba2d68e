//! Column-oriented dense and sparse kernels.

use std::ops::{Deref, Range};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Owned vector whose entries are all finite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().all(|v| v.is_finite()) {
            Ok(Self(values))
        } else {
            Err(Error::NonFinite("vector"))
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for DenseVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Column-major, `n_rows * n_cols` entries.
    Dense(Vec<f64>),
    Sparse {
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    },
}

/// Borrowed view of one column.
#[derive(Debug, Clone, Copy)]
pub enum Column<'a> {
    Dense(&'a [f64]),
    Sparse { rows: &'a [usize], values: &'a [f64] },
}

impl Column<'_> {
    pub fn dot(&self, v: &[f64]) -> f64 {
        match *self {
            Column::Dense(c) => dot(c, v),
            Column::Sparse { rows, values } => {
                rows.iter().zip(values).map(|(&r, a)| a * v[r]).sum()
            }
        }
    }

    /// `y += alpha * column`
    pub fn axpy(&self, alpha: f64, y: &mut [f64]) {
        match *self {
            Column::Dense(c) => {
                for (yi, ci) in y.iter_mut().zip(c) {
                    *yi += alpha * ci;
                }
            }
            Column::Sparse { rows, values } => {
                for (&r, a) in rows.iter().zip(values) {
                    y[r] += alpha * a;
                }
            }
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match *self {
            Column::Dense(c) => norm_sq(c),
            Column::Sparse { values, .. } => norm_sq(values),
        }
    }

    /// Squared distance between this column and `y`, given `‖y‖²`.
    pub fn dist_sq(&self, y: &[f64], y_norm_sq: f64) -> f64 {
        match *self {
            Column::Dense(c) => dist_sq(c, y),
            Column::Sparse { rows, values } => {
                let corr: f64 = rows
                    .iter()
                    .zip(values)
                    .map(|(&r, a)| (a - y[r]) * (a - y[r]) - y[r] * y[r])
                    .sum();
                (y_norm_sq + corr).max(0.0)
            }
        }
    }

    pub fn to_dense(&self, n_rows: usize) -> Vec<f64> {
        match *self {
            Column::Dense(c) => c.to_vec(),
            Column::Sparse { rows, values } => {
                let mut out = vec![0.0; n_rows];
                for (&r, &a) in rows.iter().zip(values) {
                    out[r] = a;
                }
                out
            }
        }
    }
}

/// The data matrix, stored by columns.
#[derive(Debug, Clone)]
pub struct ColumnMatrix {
    n_rows: usize,
    n_cols: usize,
    storage: Storage,
    col_norms: OnceLock<Vec<f64>>,
}

impl PartialEq for ColumnMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n_rows == other.n_rows && self.n_cols == other.n_cols && self.storage == other.storage
    }
}

impl ColumnMatrix {
    /// Dense matrix from column-major data.
    pub fn from_col_major(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidMatrix("matrix must have at least one row and column".into()));
        }
        check_len("column-major data", n_rows * n_cols, data.len())?;
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self {
            n_rows,
            n_cols,
            storage: Storage::Dense(data),
            col_norms: OnceLock::new(),
        })
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n_rows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * columns.len());
        for c in columns {
            check_len("column", n_rows, c.len())?;
            data.extend_from_slice(c);
        }
        Self::from_col_major(n_rows, columns.len(), data)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = vec![0.0; n_rows * n_cols];
        for (r, row) in rows.iter().enumerate() {
            check_len("row", n_cols, row.len())?;
            for (c, &v) in row.iter().enumerate() {
                data[c * n_rows + r] = v;
            }
        }
        Self::from_col_major(n_rows, n_cols, data)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::from_col_major(n, n, data)
    }

    /// Compressed-column matrix. Row indices must be strictly increasing per column.
    pub fn from_csc(
        n_rows: usize,
        n_cols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidMatrix("matrix must have at least one row and column".into()));
        }
        check_len("col_ptr", n_cols + 1, col_ptr.len())?;
        check_len("values", row_idx.len(), values.len())?;
        if col_ptr[0] != 0 || col_ptr[n_cols] != row_idx.len() {
            return Err(Error::InvalidMatrix("col_ptr does not span the entries".into()));
        }
        for c in 0..n_cols {
            let (s, e) = (col_ptr[c], col_ptr[c + 1]);
            if s > e {
                return Err(Error::InvalidMatrix(format!("col_ptr decreases at column {c}")));
            }
            let rows = &row_idx[s..e];
            if rows.iter().any(|&r| r >= n_rows) {
                return Err(Error::InvalidMatrix(format!("row index out of range in column {c}")));
            }
            if rows.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMatrix(format!(
                    "row indices not strictly increasing in column {c}"
                )));
            }
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self {
            n_rows,
            n_cols,
            storage: Storage::Sparse {
                col_ptr,
                row_idx,
                values,
            },
            col_norms: OnceLock::new(),
        })
    }

    /// Sparse matrix from (row, col, value) triplets. Duplicates are summed.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut t = triplets.to_vec();
        if t.iter().any(|&(r, c, _)| r >= n_rows || c >= n_cols) {
            return Err(Error::InvalidMatrix("triplet index out of range".into()));
        }
        t.sort_by_key(|&(r, c, _)| (c, r));
        let mut col_ptr = vec![0usize; n_cols + 1];
        let mut row_idx = Vec::with_capacity(t.len());
        let mut values: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            row_idx.push(r);
            values.push(v);
            col_ptr[c + 1] += 1;
            last = Some((r, c));
        }
        for c in 0..n_cols {
            col_ptr[c + 1] += col_ptr[c];
        }
        Self::from_csc(n_rows, n_cols, col_ptr, row_idx, values)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse { .. })
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.len(),
            Storage::Sparse { values, .. } => values.len(),
        }
    }

    pub fn column(&self, i: usize) -> Column<'_> {
        match &self.storage {
            Storage::Dense(d) => Column::Dense(&d[i * self.n_rows..(i + 1) * self.n_rows]),
            Storage::Sparse {
                col_ptr,
                row_idx,
                values,
            } => {
                let (s, e) = (col_ptr[i], col_ptr[i + 1]);
                Column::Sparse {
                    rows: &row_idx[s..e],
                    values: &values[s..e],
                }
            }
        }
    }

    pub fn col_norms(&self) -> &[f64] {
        self.col_norms
            .get_or_init(|| (0..self.n_cols).map(|i| self.column(i).norm_sq().sqrt()).collect())
    }

    pub fn col_norm(&self, i: usize) -> f64 {
        self.col_norms()[i]
    }

    pub fn col_dot(&self, i: usize, v: &[f64]) -> f64 {
        self.column(i).dot(v)
    }

    pub fn mat_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("mat_vec input", self.n_cols, x.len())?;
        let mut y = vec![0.0; self.n_rows];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                self.column(i).axpy(xi, &mut y);
            }
        }
        Ok(y)
    }

    pub fn mat_t_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len("mat_t_vec input", self.n_rows, v.len())?;
        Ok((0..self.n_cols).map(|i| self.column(i).dot(v)).collect())
    }

    pub fn group_frobenius(&self, group: Range<usize>) -> Result<f64> {
        if group.is_empty() {
            return Err(Error::EmptyGroup);
        }
        if group.end > self.n_cols {
            return Err(Error::InvalidParameter(format!(
                "group {}..{} exceeds {} columns",
                group.start, group.end, self.n_cols
            )));
        }
        let norms = self.col_norms();
        Ok(group.map(|i| norms[i] * norms[i]).sum::<f64>().sqrt())
    }

    pub fn frobenius(&self) -> f64 {
        let v = match &self.storage {
            Storage::Dense(d) => d,
            Storage::Sparse { values, .. } => values,
        };
        norm(v)
    }

    /// `[A | −A]`
    pub fn hstack_neg(&self) -> Self {
        let n = self.n_cols;
        let storage = match &self.storage {
            Storage::Dense(d) => {
                let mut out = d.clone();
                out.extend(d.iter().map(|v| -v));
                Storage::Dense(out)
            }
            Storage::Sparse {
                col_ptr,
                row_idx,
                values,
            } => {
                let nnz = values.len();
                let mut cp = col_ptr.clone();
                cp.extend(col_ptr[1..].iter().map(|p| p + nnz));
                let mut ri = row_idx.clone();
                ri.extend_from_slice(row_idx);
                let mut vals = values.clone();
                vals.extend(values.iter().map(|v| -v));
                Storage::Sparse {
                    col_ptr: cp,
                    row_idx: ri,
                    values: vals,
                }
            }
        };
        let col_norms = OnceLock::new();
        if let Some(norms) = self.col_norms.get() {
            let mut twice = norms.clone();
            twice.extend_from_slice(norms);
            let _ = col_norms.set(twice);
        }
        Self {
            n_rows: self.n_rows,
            n_cols: 2 * n,
            storage,
            col_norms,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let storage = match &self.storage {
            Storage::Dense(d) => Storage::Dense(d.iter().map(|v| v * s).collect()),
            Storage::Sparse {
                col_ptr,
                row_idx,
                values,
            } => Storage::Sparse {
                col_ptr: col_ptr.clone(),
                row_idx: row_idx.clone(),
                values: values.iter().map(|v| v * s).collect(),
            },
        };
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            storage,
            col_norms: OnceLock::new(),
        }
    }

    /// New matrix made of the listed columns, in order. Cached norms carry over.
    pub fn select_columns(&self, idx: &[usize]) -> Result<Self> {
        if idx.is_empty() {
            return Err(Error::InvalidMatrix("cannot select zero columns".into()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.n_cols) {
            return Err(Error::InvalidParameter(format!("column {bad} out of range")));
        }
        let storage = match &self.storage {
            Storage::Dense(d) => {
                let mut out = Vec::with_capacity(idx.len() * self.n_rows);
                for &i in idx {
                    out.extend_from_slice(&d[i * self.n_rows..(i + 1) * self.n_rows]);
                }
                Storage::Dense(out)
            }
            Storage::Sparse {
                col_ptr,
                row_idx,
                values,
            } => {
                let mut cp = Vec::with_capacity(idx.len() + 1);
                cp.push(0);
                let mut ri = Vec::new();
                let mut vals = Vec::new();
                for &i in idx {
                    ri.extend_from_slice(&row_idx[col_ptr[i]..col_ptr[i + 1]]);
                    vals.extend_from_slice(&values[col_ptr[i]..col_ptr[i + 1]]);
                    cp.push(ri.len());
                }
                Storage::Sparse {
                    col_ptr: cp,
                    row_idx: ri,
                    values: vals,
                }
            }
        };
        let col_norms = OnceLock::new();
        if let Some(norms) = self.col_norms.get() {
            let _ = col_norms.set(idx.iter().map(|&i| norms[i]).collect());
        }
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: idx.len(),
            storage,
            col_norms,
        })
    }

    pub fn to_dense(&self) -> Self {
        let mut data = Vec::with_capacity(self.n_rows * self.n_cols);
        for i in 0..self.n_cols {
            data.extend(self.column(i).to_dense(self.n_rows));
        }
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            storage: Storage::Dense(data),
            col_norms: self.col_norms.clone(),
        }
    }

    pub fn to_sparse(&self) -> Self {
        let mut trip = Vec::new();
        for c in 0..self.n_cols {
            for (r, v) in self.column(c).to_dense(self.n_rows).into_iter().enumerate() {
                if v != 0.0 {
                    trip.push((r, c, v));
                }
            }
        }
        Self::from_triplets(self.n_rows, self.n_cols, &trip).expect("valid source matrix")
    }

    /// Row-major copy of the entries, mainly for serialization.
    pub fn rows(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rows = vec![Vec::new(); self.n_rows];
        for c in 0..self.n_cols {
            match self.column(c) {
                Column::Dense(col) => {
                    for (r, &v) in col.iter().enumerate() {
                        if v != 0.0 {
                            rows[r].push((c, v));
                        }
                    }
                }
                Column::Sparse { rows: ri, values } => {
                    for (&r, &v) in ri.iter().zip(values) {
                        rows[r].push((c, v));
                    }
                }
            }
        }
        rows
    }

    /// Upper estimate of the largest squared singular value by power iteration.
    pub fn spectral_norm_sq(&self, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<f64> = (0..self.n_cols).map(|_| rng.random_range(0.5..1.5)).collect();
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        let mut est = 0.0;
        for _ in 0..1000 {
            let u = self.mat_vec(&v).expect("sized");
            let z = self.mat_t_vec(&u).expect("sized");
            let nz = norm(&z);
            if nz == 0.0 {
                return 0.0;
            }
            let next = nz;
            v = z.into_iter().map(|x| x / nz).collect();
            let done = (next - est).abs() <= 1e-12 * next;
            est = next;
            if done {
                break;
            }
        }
        est
    }
}
