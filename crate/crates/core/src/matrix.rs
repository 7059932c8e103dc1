//! Dense row-major matrix used for feature tables, layer weights and
//! mini-batch activations.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix buffer",
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally sized rows. An empty slice yields a 0×0 matrix.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row",
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        // chunks_exact(0) panics, so a zero-column matrix yields empty rows.
        let cols = self.cols.max(1);
        let n = if self.cols == 0 { 0 } else { self.rows };
        self.data.chunks_exact(cols).take(n)
    }

    /// Gathers the given rows (in order) into a new matrix.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// Resizes in place to `rows × cols`, keeping the allocation when possible.
    /// Contents are unspecified afterwards.
    pub(crate) fn reshape_scratch(&mut self, rows: usize, cols: usize) {
        self.rows = rows;
        self.cols = cols;
        self.data.resize(rows * cols, T::zero());
    }
}

/// `out = input · weights + bias` (broadcast over rows). Zero inputs are
/// skipped, which matters for sparse indicator features.
pub(crate) fn affine_into<T: Scalar>(
    input: &Matrix<T>,
    weights: &Matrix<T>,
    bias: &[T],
    out: &mut Matrix<T>,
) {
    debug_assert_eq!(input.cols, weights.rows);
    debug_assert_eq!(bias.len(), weights.cols);
    out.reshape_scratch(input.rows, weights.cols);
    for i in 0..input.rows {
        let x = input.row(i);
        let o = out.row_mut(i);
        o.copy_from_slice(bias);
        for (k, &a) in x.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (oj, &w) in o.iter_mut().zip(weights.row(k)) {
                *oj += a * w;
            }
        }
    }
}

/// `grad += inputᵀ · delta`.
pub(crate) fn accumulate_outer<T: Scalar>(
    input: &Matrix<T>,
    delta: &Matrix<T>,
    grad: &mut Matrix<T>,
) {
    debug_assert_eq!(input.rows, delta.rows);
    debug_assert_eq!(grad.rows, input.cols);
    debug_assert_eq!(grad.cols, delta.cols);
    for i in 0..input.rows {
        let d = delta.row(i);
        for (k, &a) in input.row(i).iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (g, &dv) in grad.row_mut(k).iter_mut().zip(d) {
                *g += a * dv;
            }
        }
    }
}

/// `out = delta · weightsᵀ`.
pub(crate) fn backproject_into<T: Scalar>(
    delta: &Matrix<T>,
    weights: &Matrix<T>,
    out: &mut Matrix<T>,
) {
    debug_assert_eq!(delta.cols, weights.cols);
    out.reshape_scratch(delta.rows, weights.rows);
    for i in 0..delta.rows {
        let d = delta.row(i);
        let o = out.row_mut(i);
        for (k, ok) in o.iter_mut().enumerate() {
            *ok = d
                .iter()
                .zip(weights.row(k))
                .fold(T::zero(), |acc, (&x, &w)| acc + x * w);
        }
    }
}
