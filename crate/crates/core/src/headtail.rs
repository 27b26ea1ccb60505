// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! The QR head and tail operators.
//!
//! For an `m x n` matrix `M` with rows `M_1 .. M_m`:
//!
//! ```text
//! head(M)   = (1/√m) · Σ_{k=1..m} M_k                              (1 x n)
//! tail(M)_i = (1/√(i+1)) · (√i · M_{i+1} − (1/√i) · Σ_{k=1..i} M_k)  (i = 1..m−1)
//! ```
//!
//! Stacking the head on top of the tail is an orthogonal transform of `M`
//! (it is what a chain of Givens rotations down each column produces), so
//! `head_tail(M)ᵀ head_tail(M) = MᵀM`. Neither the rotations nor the
//! orthogonal matrix are ever formed.
//!
//! Each column is processed independently with a running prefix sum
//! accumulated in row order, so any partition of the columns yields
//! bit-identical results.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Walks the rows of a row-major block once, handing each tail row to
/// `emit(index, row)` and returning the head.
///
/// `data` holds `data.len() / cols` rows; at least one row is required.
pub(crate) fn stream_head_tail(
    data: &[f64],
    cols: usize,
    mut emit: impl FnMut(usize, &[f64]),
) -> Vec<f64> {
    debug_assert!(cols > 0 && data.len().is_multiple_of(cols) && !data.is_empty());
    let rows = data.len() / cols;
    let mut prefix = data[..cols].to_vec();
    let mut scratch = vec![0.0; cols];
    for i in 1..rows {
        let count = i as f64;
        let root = count.sqrt();
        let norm = (count + 1.0).sqrt();
        let next = &data[i * cols..(i + 1) * cols];
        for ((out, &x), &s) in scratch.iter_mut().zip(next).zip(&prefix) {
            *out = (root * x - s / root) / norm;
        }
        emit(i - 1, &scratch);
        for (s, &x) in prefix.iter_mut().zip(next) {
            *s += x;
        }
    }
    let scale = (rows as f64).sqrt();
    for s in &mut prefix {
        *s /= scale;
    }
    prefix
}

fn check_rows(m: &Matrix, op: &'static str) -> Result<()> {
    if m.rows() == 0 {
        return Err(Error::EmptyInput { op });
    }
    Ok(())
}

/// `(1/√m) · Σᵢ Mᵢ`, a single row.
pub fn head(m: &Matrix) -> Result<Matrix> {
    check_rows(m, "head")?;
    if m.cols() == 0 {
        return Ok(Matrix::zeros(1, 0));
    }
    let h = stream_head_tail(m.as_slice(), m.cols(), |_, _| {});
    Matrix::from_vec(1, m.cols(), h)
}

/// The `(m−1) x n` tail. A single-row matrix has an empty `0 x n` tail.
pub fn tail(m: &Matrix) -> Result<Matrix> {
    check_rows(m, "tail")?;
    let mut out = Matrix::zeros(m.rows() - 1, m.cols());
    if m.cols() > 0 {
        stream_head_tail(m.as_slice(), m.cols(), |i, row| {
            out.row_mut(i).copy_from_slice(row)
        });
    }
    Ok(out)
}

/// Head in row 0 followed by the tail, computed in one pass.
///
/// ```
/// # use joinqr::{headtail::head_tail, Matrix};
/// let m = Matrix::from_rows(&[[1.0], [3.0]]).unwrap();
/// let ht = head_tail(&m).unwrap();
/// assert!((ht[(0, 0)] - 4.0 / 2f64.sqrt()).abs() < 1e-15);
/// assert!((ht[(1, 0)] - 2f64.sqrt()).abs() < 1e-15);
/// ```
pub fn head_tail(m: &Matrix) -> Result<Matrix> {
    check_rows(m, "head_tail")?;
    let mut out = Matrix::zeros(m.rows(), m.cols());
    if m.cols() > 0 {
        let h = stream_head_tail(m.as_slice(), m.cols(), |i, row| {
            out.row_mut(i + 1).copy_from_slice(row)
        });
        out.row_mut(0).copy_from_slice(&h);
    }
    Ok(out)
}
