// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! QR and SVD of the join matrix of two tables, computed in time and memory
//! proportional to the inputs rather than to the join.
//!
//! The join of an `m1`-row and an `m2`-row table can have `m1 · m2` rows.
//! Its R factor, singular values and right singular vectors depend only on
//! its Gram matrix `JᵀJ`, and a few closed-form row operations on the inputs
//! (the QR *head* and *tail*, see [`headtail`]) produce a matrix of
//! `m1 + m2 − 1` rows with exactly that Gram matrix ([`reduce`]). A dense
//! Householder QR of that small matrix ([`qr`]) followed by a one-sided
//! Jacobi SVD of R ([`svd`]) finishes the job.
//!
//! ```
//! use joinqr::{figaro_r, figaro_svd, Matrix, Table};
//!
//! let left = Table::new(Matrix::from_rows(&[[1.0], [2.0]])?);
//! let right = Table::new(Matrix::from_rows(&[[3.0], [4.0]])?);
//!
//! // J = [[1, 3], [1, 4], [2, 3], [2, 4]] is never built
//! let r = figaro_r(&left, &right)?;
//! assert!((r[(0, 0)] - 10f64.sqrt()).abs() < 1e-12);
//!
//! let svd = figaro_svd(&left, &right, false)?;
//! assert!((svd.values[0] - 59f64.sqrt()).abs() < 1e-12);
//! assert!((svd.values[1] - 1.0).abs() < 1e-12);
//! # Ok::<(), joinqr::Error>(())
//! ```
//!
//! [`oracle`] materializes the join and factorizes it directly; it is the
//! reference every test compares against and the baseline in [`bench`].
//! The `book/` directory at the repository root walks through the math.

pub mod bench;
pub mod data;
mod error;
pub mod headtail;
pub mod matrix;
pub mod oracle;
pub mod qr;
pub mod reduce;
pub mod svd;
pub mod table;

pub use error::{Error, Result};
pub use matrix::{gram, matmul, max_abs_diff, Matrix, UpperTriangular};
pub use qr::figaro_r;
pub use reduce::ReducedMatrix;
pub use svd::{figaro_svd, SvdResult};
pub use table::Table;

// Compiles and runs the code listings of the guide as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/head-and-tail.md")]
    mod head_and_tail {}
    #[doc = include_str!("../../../book/src/cartesian-reduction.md")]
    mod cartesian_reduction {}
    #[doc = include_str!("../../../book/src/natural-joins.md")]
    mod natural_joins {}
    #[doc = include_str!("../../../book/src/r-factor.md")]
    mod r_factor {}
    #[doc = include_str!("../../../book/src/svd.md")]
    mod svd {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/data-and-cli.md")]
    mod data_and_cli {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
