// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force ground truth: build the join matrix row by row and factorize
//! it directly. This is the correctness oracle and the performance baseline,
//! so it deliberately takes no shortcuts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, UpperTriangular};
use crate::qr::householder_r;
use crate::svd::{svd_of_r, SvdResult};
use crate::table::{matched_groups, Table};

/// Every pairing of a left row with a right row, left-major: block `i` holds
/// `[a_i | b_1], …, [a_i | b_m2]`.
pub fn materialize_cartesian(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows() == 0 || b.rows() == 0 {
        return Err(Error::EmptyInput {
            op: "materialize_cartesian",
        });
    }
    let cols = a.cols() + b.cols();
    let mut out = Matrix::zeros(a.rows() * b.rows(), cols);
    if cols == 0 {
        return Ok(out);
    }
    out.as_mut_slice()
        .par_chunks_mut(b.rows() * cols)
        .enumerate()
        .for_each(|(i, block)| fill_block(block, a.row(i), b, 0..b.rows()));
    Ok(out)
}

fn fill_block(block: &mut [f64], left: &[f64], b: &Matrix, right_rows: std::ops::Range<usize>) {
    let split = left.len();
    for (dst, j) in block.chunks_exact_mut(split + b.cols()).zip(right_rows) {
        dst[..split].copy_from_slice(left);
        dst[split..].copy_from_slice(b.row(j));
    }
}

/// The natural join on the key columns, ordered by key, then left row, then
/// right row.
pub fn materialize_natural_join(a: &Table, b: &Table) -> Result<Matrix> {
    let groups = matched_groups(a, b)?;
    let cols = a.cols() + b.cols();
    let rows = groups.iter().map(|g| g.left.len() * g.right.len()).sum();
    let mut out = Matrix::zeros(rows, cols);
    if cols == 0 {
        return Ok(out);
    }
    let mut offset = 0;
    for g in &groups {
        for i in g.left.clone() {
            let len = g.right.len() * cols;
            let block = &mut out.as_mut_slice()[offset..offset + len];
            fill_block(block, a.data().row(i), b.data(), g.right.clone());
            offset += len;
        }
    }
    Ok(out)
}

/// The join matrix of two tables: Cartesian without keys, natural with.
pub fn materialize_join(a: &Table, b: &Table) -> Result<Matrix> {
    match (a.keys().is_some(), b.keys().is_some()) {
        (false, false) => materialize_cartesian(a.data(), b.data()),
        (true, true) => materialize_natural_join(a, b),
        _ => Err(Error::KeyPresenceMismatch),
    }
}

/// Canonical Householder R of an already materialized join matrix.
pub fn baseline_r(j: &Matrix) -> Result<UpperTriangular> {
    Ok(householder_r(j)?.canonicalize())
}

pub fn baseline_svd(j: &Matrix, want_vectors: bool) -> Result<SvdResult> {
    svd_of_r(&baseline_r(j)?, want_vectors)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_lu(j: &Matrix) -> Result<f64> {
    let (n, cols) = j.shape();
    if n != cols {
        return Err(Error::NotSquare {
            op: "det_lu",
            rows: n,
            cols,
        });
    }
    let mut a = j.clone();
    let mut det = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&x, &y| a[(x, k)].abs().total_cmp(&a[(y, k)].abs()))
            .unwrap();
        let p = a[(pivot, k)];
        if p == 0.0 {
            return Ok(0.0);
        }
        if pivot != k {
            for c in 0..n {
                let tmp = a[(k, c)];
                a[(k, c)] = a[(pivot, c)];
                a[(pivot, c)] = tmp;
            }
            det = -det;
        }
        det *= p;
        for i in k + 1..n {
            let factor = a[(i, k)] / p;
            if factor == 0.0 {
                continue;
            }
            for c in k..n {
                a[(i, c)] -= factor * a[(k, c)];
            }
        }
    }
    Ok(det)
}
