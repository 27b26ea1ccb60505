// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! Reduction of a two-table join matrix to a small matrix with the same Gram
//! matrix, and therefore the same R factor.
//!
//! For a Cartesian product `J = A × B` (`m1 x n1` and `m2 x n2`) there is a
//! sequence of Givens rotations taking `J` to
//!
//! ```text
//! [ √m2 · A   | 1 · head(B)       ]   m1 rows, head(B) repeated in each
//! [ 0         | √m1 · tail(B)     ]   m2 − 1 rows
//! [ 0         | 0                 ]   (m1 − 1)(m2 − 1) rows, dropped
//! ```
//!
//! The first two block rows are all that is kept: `m1 + m2 − 1` rows instead
//! of `m1 · m2`. A natural join is the disjoint union of the Cartesian
//! products of its key groups, so the grouped reduction stacks one such block
//! per key present on both sides.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::headtail::stream_head_tail;
use crate::matrix::Matrix;
use crate::table::{matched_groups, Table};

/// Rows of the reduced matrix contributed by one key group (or by the whole
/// Cartesian product when there are no keys).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupBlock {
    pub key: Option<i64>,
    pub rows: Range<usize>,
    /// Number of leading rows carrying `√m2 · A`; the remaining rows have
    /// exactly zero left columns.
    pub top_rows: usize,
}

impl GroupBlock {
    pub fn top(&self) -> Range<usize> {
        self.rows.start..self.rows.start + self.top_rows
    }

    pub fn bottom(&self) -> Range<usize> {
        self.rows.start + self.top_rows..self.rows.end
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedMatrix {
    matrix: Matrix,
    groups: Vec<GroupBlock>,
    left_cols: usize,
    right_cols: usize,
}

impl ReducedMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn groups(&self) -> &[GroupBlock] {
        &self.groups
    }

    pub fn left_cols(&self) -> usize {
        self.left_cols
    }

    pub fn right_cols(&self) -> usize {
        self.right_cols
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }
}

/// Row-major `rows x cols` block borrowed from a larger buffer.
#[derive(Clone, Copy)]
struct Block<'a> {
    data: &'a [f64],
    rows: usize,
    cols: usize,
}

impl<'a> Block<'a> {
    fn rows_of(m: &'a Matrix, range: Range<usize>) -> Self {
        Block {
            data: &m.as_slice()[range.start * m.cols()..range.end * m.cols()],
            rows: range.len(),
            cols: m.cols(),
        }
    }
}

/// Writes the reduced block of `a × b` starting at row `offset` of `out` and
/// returns the number of rows written (`m1 + m2 − 1`).
fn write_block(out: &mut Matrix, offset: usize, a: Block<'_>, b: Block<'_>) -> usize {
    debug_assert!(a.rows > 0 && b.rows > 0);
    let left_scale = (b.rows as f64).sqrt();
    let right_scale = (a.rows as f64).sqrt();
    let split = a.cols;

    let head = if b.cols == 0 {
        Vec::new()
    } else {
        stream_head_tail(b.data, b.cols, |i, tail_row| {
            let dst = &mut out.row_mut(offset + a.rows + i)[split..];
            for (d, &t) in dst.iter_mut().zip(tail_row) {
                *d = right_scale * t;
            }
        })
    };
    for i in 0..a.rows {
        let a_row = &a.data[i * a.cols..(i + 1) * a.cols];
        let dst = out.row_mut(offset + i);
        for (d, &x) in dst[..split].iter_mut().zip(a_row) {
            *d = left_scale * x;
        }
        dst[split..].copy_from_slice(&head);
    }
    a.rows + b.rows - 1
}

/// Reduced form of the Cartesian product `a × b`: `(m1 + m2 − 1) x (n1 + n2)`.
///
/// ```
/// # use joinqr::{reduce::reduce_cartesian, Matrix};
/// let a = Matrix::from_rows(&[[1.0], [2.0]]).unwrap();
/// let b = Matrix::from_rows(&[[3.0], [4.0]]).unwrap();
/// let reduced = reduce_cartesian(&a, &b).unwrap();
/// assert_eq!(reduced.matrix().shape(), (3, 2));
/// // the lower-left block is an exact zero
/// assert_eq!(reduced.matrix()[(2, 0)], 0.0);
/// ```
pub fn reduce_cartesian(a: &Matrix, b: &Matrix) -> Result<ReducedMatrix> {
    if a.rows() == 0 {
        return Err(Error::EmptyInput {
            op: "reduce_cartesian (left)",
        });
    }
    if b.rows() == 0 {
        return Err(Error::EmptyInput {
            op: "reduce_cartesian (right)",
        });
    }
    let rows = a.rows() + b.rows() - 1;
    let mut out = Matrix::zeros(rows, a.cols() + b.cols());
    write_block(
        &mut out,
        0,
        Block::rows_of(a, 0..a.rows()),
        Block::rows_of(b, 0..b.rows()),
    );
    Ok(ReducedMatrix {
        matrix: out,
        groups: vec![GroupBlock {
            key: None,
            rows: 0..rows,
            top_rows: a.rows(),
        }],
        left_cols: a.cols(),
        right_cols: b.cols(),
    })
}

/// Reduced form of the natural join of two keyed tables: one Cartesian block
/// per key present on both sides, in ascending key order.
pub fn reduce_natural_join(a: &Table, b: &Table) -> Result<ReducedMatrix> {
    let matched = matched_groups(a, b)?;
    let (left_cols, right_cols) = (a.cols(), b.cols());
    let rows = matched
        .iter()
        .map(|g| g.left.len() + g.right.len() - 1)
        .sum();
    let mut out = Matrix::zeros(rows, left_cols + right_cols);
    let mut groups = Vec::with_capacity(matched.len());
    let mut offset = 0;
    for g in matched {
        let written = write_block(
            &mut out,
            offset,
            Block::rows_of(a.data(), g.left.clone()),
            Block::rows_of(b.data(), g.right.clone()),
        );
        groups.push(GroupBlock {
            key: Some(g.key),
            rows: offset..offset + written,
            top_rows: g.left.len(),
        });
        offset += written;
    }
    Ok(ReducedMatrix {
        matrix: out,
        groups,
        left_cols,
        right_cols,
    })
}

/// Dispatches on key presence: keyless tables join as a Cartesian product,
/// keyed tables as a natural join.
pub fn reduce_tables(a: &Table, b: &Table) -> Result<ReducedMatrix> {
    match (a.keys().is_some(), b.keys().is_some()) {
        (false, false) => reduce_cartesian(a.data(), b.data()),
        (true, true) => reduce_natural_join(a, b),
        _ => Err(Error::KeyPresenceMismatch),
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::matrix::test_util::Lcg;
    use crate::matrix::{gram, max_abs_diff};

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn assert_close(actual: &Matrix, expected: &Matrix, tol: f64) {
        assert_eq!(actual.shape(), expected.shape());
        let d = max_abs_diff(actual, expected).unwrap();
        assert!(
            d <= tol,
            "diff {d}\nactual {actual:?}\nexpected {expected:?}"
        );
    }

    /// Materializes a Cartesian product straight from its definition.
    fn cartesian(a: &Matrix, b: &Matrix) -> Matrix {
        let mut rows = Vec::new();
        for i in 0..a.rows() {
            for j in 0..b.rows() {
                rows.push([a.row(i), b.row(j)].concat());
            }
        }
        Matrix::from_rows(&rows).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)] // frozen 6-digit values
    fn two_by_two_example() {
        let a = m(&[&[1.0], &[2.0]]);
        let b = m(&[&[3.0], &[4.0]]);
        let r = reduce_cartesian(&a, &b).unwrap();
        let s2 = 2f64.sqrt();
        let expected = m(&[&[s2, 7.0 / s2], &[2.0 * s2, 7.0 / s2], &[0.0, 1.0]]);
        assert_close(r.matrix(), &expected, 1e-15);
        assert_close(
            r.matrix(),
            &m(&[&[1.414214, 4.949747], &[2.828427, 4.949747], &[0.0, 1.0]]),
            1e-6,
        );
        assert_close(
            &gram(r.matrix()),
            &m(&[&[10.0, 21.0], &[21.0, 50.0]]),
            1e-12,
        );
        assert_eq!(
            r.groups(),
            &[GroupBlock {
                key: None,
                rows: 0..3,
                top_rows: 2
            }]
        );
    }

    #[test]
    fn single_right_row_has_no_tail() {
        let r = reduce_cartesian(&m(&[&[5.0], &[6.0]]), &m(&[&[7.0]])).unwrap();
        assert_eq!(r.matrix(), &m(&[&[5.0, 7.0], &[6.0, 7.0]]));
    }

    #[test]
    fn single_left_row() {
        let a = m(&[&[1.0]]);
        let b = m(&[&[3.0], &[4.0]]);
        let r = reduce_cartesian(&a, &b).unwrap();
        let s2 = 2f64.sqrt();
        assert_close(r.matrix(), &m(&[&[s2, 7.0 / s2], &[0.0, 1.0 / s2]]), 1e-15);
        let j = m(&[&[1.0, 3.0], &[1.0, 4.0]]);
        assert_close(&gram(r.matrix()), &gram(&j), 1e-12);
    }

    #[test]
    fn empty_inputs_are_rejected() {
        let one = m(&[&[1.0]]);
        assert!(reduce_cartesian(&Matrix::zeros(0, 1), &one).is_err());
        assert!(reduce_cartesian(&one, &Matrix::zeros(0, 1)).is_err());
    }

    #[test]
    fn grouped_example() {
        let a = Table::with_keys(m(&[&[1.0], &[2.0], &[5.0]]), vec![1, 1, 2]).unwrap();
        let b = Table::with_keys(m(&[&[3.0], &[7.0], &[8.0]]), vec![1, 2, 2]).unwrap();
        let r = reduce_natural_join(&a, &b).unwrap();
        let g1 = reduce_cartesian(&m(&[&[1.0], &[2.0]]), &m(&[&[3.0]])).unwrap();
        let g2 = reduce_cartesian(&m(&[&[5.0]]), &m(&[&[7.0], &[8.0]])).unwrap();
        assert_eq!(r.matrix(), &g1.matrix().vconcat(g2.matrix()).unwrap());
        assert_eq!(
            r.groups(),
            &[
                GroupBlock {
                    key: Some(1),
                    rows: 0..2,
                    top_rows: 2
                },
                GroupBlock {
                    key: Some(2),
                    rows: 2..4,
                    top_rows: 1
                },
            ]
        );
        let join = m(&[&[1.0, 3.0], &[2.0, 3.0], &[5.0, 7.0], &[5.0, 8.0]]);
        assert_close(&gram(r.matrix()), &gram(&join), 1e-12);
    }

    #[test]
    fn disjoint_keys_reduce_to_nothing() {
        let a = Table::with_keys(m(&[&[1.0, 2.0]]), vec![1]).unwrap();
        let b = Table::with_keys(m(&[&[3.0]]), vec![2]).unwrap();
        let r = reduce_natural_join(&a, &b).unwrap();
        assert_eq!(r.matrix().shape(), (0, 3));
        assert!(r.groups().is_empty());
    }

    #[test]
    fn one_key_equals_cartesian() {
        let mut rng = Lcg(8);
        let (a, b) = (rng.matrix(4, 2), rng.matrix(3, 3));
        let ka = Table::with_keys(a.clone(), vec![9; 4]).unwrap();
        let kb = Table::with_keys(b.clone(), vec![9; 3]).unwrap();
        assert_eq!(
            reduce_natural_join(&ka, &kb).unwrap().matrix(),
            reduce_cartesian(&a, &b).unwrap().matrix()
        );
    }

    #[test]
    fn key_presence_must_match() {
        let plain = Table::new(m(&[&[1.0]]));
        let keyed = Table::with_keys(m(&[&[1.0]]), vec![0]).unwrap();
        assert!(matches!(
            reduce_tables(&plain, &keyed),
            Err(Error::KeyPresenceMismatch)
        ));
        assert!(matches!(
            reduce_natural_join(&plain, &plain),
            Err(Error::MissingKeys)
        ));
        assert_eq!(reduce_tables(&plain, &plain).unwrap().rows(), 1);
    }

    proptest! {
        #[test]
        fn cartesian_gram_matches_materialized(
            seed in any::<u64>(), m1 in 1usize..=12, m2 in 1usize..=12, n1 in 1usize..=5, n2 in 1usize..=5,
        ) {
            let mut rng = Lcg(seed);
            let (a, b) = (rng.matrix(m1, n1), rng.matrix(m2, n2));
            let r = reduce_cartesian(&a, &b).unwrap();
            prop_assert_eq!(r.rows(), m1 + m2 - 1);
            for g in r.groups() {
                for i in g.bottom() {
                    prop_assert!(r.matrix().row(i)[..n1].iter().all(|x| x.to_bits() == 0));
                }
            }
            let expected = gram(&cartesian(&a, &b));
            let d = max_abs_diff(&gram(r.matrix()), &expected).unwrap();
            prop_assert!(d <= 1e-10 * expected.max_abs().max(1.0));
        }
    }
}
