// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! R factors: Householder (the finishing step and the baseline), Givens (an
//! independent reference), and the factorized join pipeline.
//!
//! Every routine returns an `n x n` R for an `m x n` input. When `m < n` the
//! missing rows are zero, which is the same as padding the input with zero
//! rows before factorizing.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, UpperTriangular};
use crate::reduce::reduce_tables;
use crate::table::Table;

/// Rows per independently reflected block. Up to 32 columns of a block stay
/// in L2 while all of its reflections are applied, so a tall input is read
/// from memory about once instead of three times per column. Fixed, so the
/// result is bit-identical for any thread count.
const BLOCK_ROWS: usize = 1024;

/// R of `m` by Householder reflections. Not sign-canonical.
///
/// Only one block of `m` is copied at a time (per thread).
pub fn householder_r(m: &Matrix) -> Result<UpperTriangular> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Err(Error::NoColumns {
            op: "householder_r",
        });
    }
    if rows <= block_rows(cols) {
        return householder_r_owned(m.clone());
    }
    let triangles: Vec<Vec<f64>> = m
        .as_slice()
        .par_chunks(block_rows(cols) * cols)
        .map(|chunk| {
            let mut block = chunk.to_vec();
            reflect(&mut block, cols);
            block.truncate(leading_len(chunk.len(), cols));
            block
        })
        .collect();
    stack(triangles, cols)
}

fn block_rows(cols: usize) -> usize {
    BLOCK_ROWS.max(2 * cols)
}

/// Length of the leading (triangle) rows of a reflected block.
fn leading_len(len: usize, cols: usize) -> usize {
    (len / cols).min(cols) * cols
}

fn stack(triangles: Vec<Vec<f64>>, cols: usize) -> Result<UpperTriangular> {
    let stacked = triangles.concat();
    householder_r_owned(Matrix::from_vec(stacked.len() / cols, cols, stacked)?)
}

/// Same as [`householder_r`], reflecting `m` in place instead of copying it.
///
/// Inputs taller than one block are split into row blocks that are reduced
/// independently (in parallel); their stacked triangles are then reduced the
/// same way. `[A1; A2] = diag(Q1, Q2) · [R1; R2]`, so the flop count is that
/// of a single Householder pass and R is the same up to row signs.
pub fn householder_r_owned(mut m: Matrix) -> Result<UpperTriangular> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Err(Error::NoColumns {
            op: "householder_r",
        });
    }
    let block = block_rows(cols);
    if rows <= block {
        reflect(m.as_mut_slice(), cols);
        return Ok(UpperTriangular::from_leading_rows(&m));
    }
    let triangles: Vec<Vec<f64>> = m
        .as_mut_slice()
        .par_chunks_mut(block * cols)
        .map(|chunk| {
            reflect(chunk, cols);
            chunk[..leading_len(chunk.len(), cols)].to_vec()
        })
        .collect();
    drop(m);
    stack(triangles, cols)
}

/// Reduces the row-major `data` to upper-trapezoidal form in place.
fn reflect(data: &mut [f64], cols: usize) {
    let rows = data.len() / cols;
    let mut v = Vec::with_capacity(rows);
    let mut w = vec![0.0; cols];
    for k in 0..rows.min(cols) {
        v.clear();
        v.extend((k..rows).map(|i| data[i * cols + k]));
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        v[0] = x0 - alpha;
        // vᵀv = 2·norm·(norm + |x0|)
        let tau = 1.0 / (norm * (norm + x0.abs()));

        // w = vᵀ · A[k.., k..]
        let w = &mut w[..cols - k];
        w.fill(0.0);
        let below = &mut data[k * cols..];
        for (row, &vi) in below.chunks_exact(cols).zip(&v) {
            for (a, &x) in w.iter_mut().zip(&row[k..]) {
                *a += vi * x;
            }
        }
        // A[k.., k..] -= tau · v · w
        for (row, &vi) in below.chunks_exact_mut(cols).zip(&v) {
            let scale = tau * vi;
            for (x, &wj) in row[k..].iter_mut().zip(w.iter()) {
                *x -= scale * wj;
            }
        }

        below[k] = alpha;
        for row in below.chunks_exact_mut(cols).skip(1) {
            row[k] = 0.0;
        }
    }
}

/// R of `m` by Givens rotations, one entry at a time. Not sign-canonical.
///
/// Entry `(i, j)` below the diagonal is zeroed by rotating row `i` into row
/// `j`; only those two rows change.
pub fn givens_r(m: &Matrix) -> Result<UpperTriangular> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Err(Error::NoColumns { op: "givens_r" });
    }
    let mut a = m.clone();
    let data = a.as_mut_slice();
    for j in 0..rows.min(cols) {
        for i in j + 1..rows {
            let y = data[i * cols + j];
            if y == 0.0 {
                continue;
            }
            let x = data[j * cols + j];
            let r = x.hypot(y);
            let (c, s) = (x / r, y / r);
            let (top, bottom) = data.split_at_mut(i * cols);
            let pivot = &mut top[j * cols + j..(j + 1) * cols];
            let target = &mut bottom[j..cols];
            for (p, t) in pivot.iter_mut().zip(target.iter_mut()) {
                let (pv, tv) = (*p, *t);
                *p = c * pv + s * tv;
                *t = c * tv - s * pv;
            }
            target[0] = 0.0;
        }
    }
    Ok(UpperTriangular::from_leading_rows(&a))
}

/// Row-sign normalization: every row with a negative diagonal entry is
/// negated. Rows with a zero diagonal are left alone.
pub fn canonicalize(r: &UpperTriangular) -> UpperTriangular {
    r.clone().canonicalize()
}

/// Canonical R of the join of `a` and `b`, computed from the reduced matrix
/// without materializing the join.
///
/// Keyless tables join as a Cartesian product; keyed tables as a natural
/// join on their keys.
///
/// ```
/// # use joinqr::{qr::figaro_r, Matrix, Table};
/// let a = Table::new(Matrix::from_rows(&[[1.0], [2.0]]).unwrap());
/// let b = Table::new(Matrix::from_rows(&[[3.0], [4.0]]).unwrap());
/// let r = figaro_r(&a, &b).unwrap();
/// assert!((r[(0, 0)] - 10f64.sqrt()).abs() < 1e-12);
/// assert!((r[(0, 1)] - 21.0 / 10f64.sqrt()).abs() < 1e-12);
/// assert!((r[(1, 1)] - 5.9f64.sqrt()).abs() < 1e-12);
/// ```
pub fn figaro_r(a: &Table, b: &Table) -> Result<UpperTriangular> {
    let reduced = reduce_tables(a, b)?;
    let n = reduced.left_cols() + reduced.right_cols();
    if n == 0 {
        return Ok(UpperTriangular::zeros(0));
    }
    Ok(householder_r_owned(reduced.into_matrix())?.canonicalize())
}
