// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! Singular values and right singular vectors from an R factor.
//!
//! `J = QR` with orthonormal `Q`, so `J` and `R` share singular values and
//! right singular vectors. R is `n x n` with `n` the number of join columns,
//! small enough for one-sided Jacobi: rotate pairs of columns of R until they
//! are mutually orthogonal. The column norms are then the singular values and
//! the accumulated rotations are V.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, UpperTriangular};
use crate::qr::figaro_r;
use crate::table::Table;

/// A sweep ends the iteration when every pair satisfies
/// `|a_pᵀa_q| < TOLERANCE · ‖a_p‖‖a_q‖`.
pub const TOLERANCE: f64 = 1e-14;

pub const MAX_SWEEPS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct SvdResult {
    /// Non-increasing, non-negative.
    pub values: Vec<f64>,
    /// `n x n`, column `i` pairs with `values[i]`.
    pub right_vectors: Option<Matrix>,
}

/// One-sided Jacobi SVD of `r`, cyclic-by-rows pair order.
///
/// ```
/// # use joinqr::{svd::svd_of_r, Matrix, UpperTriangular};
/// let r = UpperTriangular::from_matrix(
///     Matrix::from_rows(&[[2.0, 0.0], [0.0, 3.0]]).unwrap(),
/// ).unwrap();
/// let svd = svd_of_r(&r, true).unwrap();
/// assert_eq!(svd.values, vec![3.0, 2.0]);
/// ```
pub fn svd_of_r(r: &UpperTriangular, want_vectors: bool) -> Result<SvdResult> {
    let n = r.n();
    // columns of R and V are the rows of these, so they stay contiguous
    let mut cols = r.as_matrix().transpose();
    let mut v = want_vectors.then(|| Matrix::identity(n));

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (cols.row(p), cols.row(q));
                    (dot(cp, cp), dot(cq, cq), dot(cp, cq))
                };
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.abs() < TOLERANCE * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate_rows(&mut cols, p, q, c, s);
                if let Some(v) = v.as_mut() {
                    rotate_rows(v, p, q, c, s);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = cols.row_iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let values = order.iter().map(|&i| norms[i]).collect();
    let right_vectors = v.map(|v| Matrix::from_fn(n, n, |row, col| v[(order[col], row)]));
    Ok(SvdResult {
        values,
        right_vectors,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(row_p, row_q) ← (c·row_p − s·row_q, s·row_p + c·row_q)`.
fn rotate_rows(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    debug_assert!(p < q);
    let cols = m.cols();
    let (head, rest) = m.as_mut_slice().split_at_mut(q * cols);
    let row_p = &mut head[p * cols..(p + 1) * cols];
    let row_q = &mut rest[..cols];
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Singular values (and optionally V) of the join of `a` and `b`, without
/// materializing the join.
pub fn figaro_svd(a: &Table, b: &Table, want_vectors: bool) -> Result<SvdResult> {
    svd_of_r(&figaro_r(a, b)?, want_vectors)
}
