// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! Relations: a data matrix plus an optional sorted join-key column.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A relation with numeric data columns and, optionally, an integer join key
/// per row.
///
/// Keys are never part of the numeric data. When present they are sorted in
/// non-decreasing order, so rows sharing a key form one contiguous block.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    data: Matrix,
    keys: Option<Vec<i64>>,
}

impl Table {
    /// A keyless table; joining two of these yields their Cartesian product.
    pub fn new(data: Matrix) -> Self {
        Self { data, keys: None }
    }

    pub fn with_keys(data: Matrix, keys: Vec<i64>) -> Result<Self> {
        if keys.len() != data.rows() {
            return Err(Error::KeyCount {
                rows: data.rows(),
                keys: keys.len(),
            });
        }
        check_sorted(&keys)?;
        Ok(Self {
            data,
            keys: Some(keys),
        })
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn keys(&self) -> Option<&[i64]> {
        self.keys.as_deref()
    }

    pub fn rows(&self) -> usize {
        self.data.rows()
    }

    pub fn cols(&self) -> usize {
        self.data.cols()
    }

    /// Contiguous `(key, row range)` runs; empty for a keyless table.
    pub fn key_groups(&self) -> KeyGroups<'_> {
        KeyGroups {
            keys: self.keys.as_deref().unwrap_or(&[]),
            pos: 0,
        }
    }
}

pub(crate) fn check_sorted(keys: &[i64]) -> Result<()> {
    for (row, w) in keys.windows(2).enumerate() {
        if w[1] < w[0] {
            return Err(Error::UnsortedKeys {
                row: row + 1,
                previous: w[0],
                key: w[1],
            });
        }
    }
    Ok(())
}

pub struct KeyGroups<'a> {
    keys: &'a [i64],
    pos: usize,
}

impl Iterator for KeyGroups<'_> {
    type Item = (i64, Range<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        let start = self.pos;
        let key = *self.keys.get(start)?;
        let len = self.keys[start..].partition_point(|k| *k == key);
        self.pos = start + len;
        Some((key, start..self.pos))
    }
}

/// A key present on both sides of a natural join.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedGroup {
    pub key: i64,
    pub left: Range<usize>,
    pub right: Range<usize>,
}

/// Sort-merge over the key runs of both tables, in ascending key order.
pub fn matched_groups(a: &Table, b: &Table) -> Result<Vec<MatchedGroup>> {
    if a.keys.is_none() || b.keys.is_none() {
        return Err(Error::MissingKeys);
    }
    let mut out = Vec::new();
    let mut left = a.key_groups().peekable();
    let mut right = b.key_groups().peekable();
    while let (Some((lk, _)), Some((rk, _))) = (left.peek(), right.peek()) {
        match lk.cmp(rk) {
            std::cmp::Ordering::Less => {
                left.next();
            }
            std::cmp::Ordering::Greater => {
                right.next();
            }
            std::cmp::Ordering::Equal => {
                let (key, l) = left.next().unwrap();
                let (_, r) = right.next().unwrap();
                out.push(MatchedGroup {
                    key,
                    left: l,
                    right: r,
                });
            }
        }
    }
    Ok(out)
}
