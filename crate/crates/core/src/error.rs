// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },

    #[error("buffer of length {len} cannot hold a {rows}x{cols} matrix")]
    BadBufferLength {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("{op} is undefined for a matrix with no rows")]
    EmptyInput { op: &'static str },

    #[error("{op} is undefined for a matrix with no columns")]
    NoColumns { op: &'static str },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not upper triangular: entry ({row}, {col}) is {value}")]
    NotUpperTriangular { row: usize, col: usize, value: f64 },

    #[error("non-finite value {value} at row {row}, column {col}")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("join keys are not sorted: row {row} has key {key} after {previous}")]
    UnsortedKeys { row: usize, previous: i64, key: i64 },

    #[error("table has {rows} rows but {keys} keys")]
    KeyCount { rows: usize, keys: usize },

    #[error("natural join requires join keys on both tables")]
    MissingKeys,

    #[error("join keys must be present on both tables or on neither")]
    KeyPresenceMismatch,

    #[error("Jacobi SVD did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("{}: line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
