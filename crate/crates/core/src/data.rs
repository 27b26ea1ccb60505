// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! Synthetic tables and CSV input/output.
//!
//! # Generator
//!
//! [`gen_uniform`] draws from SplitMix64 (Steele, Lea & Flood; the stream
//! Vigna uses to seed the xoshiro family) with its state initialized to the
//! seed. Each 64-bit output `x` maps to `((x >> 12) + 0.5) · 2⁻⁵²`, which lies
//! strictly inside `(0, 1)`. Values fill the table row-major. With seed 42
//! the first three values are `0.7415648787718233`, `0.15991039287692022`
//! and `0.27860113025513866`.
//!
//! # CSV dialect
//!
//! Comma separated, `.` decimal point, one row per line, at most one header
//! row, no quoting. Floats are written in Rust's shortest round-trip form, so
//! reading a written file reproduces every bit. A key column, when present,
//! holds integers in non-decreasing order.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::SvdResult;
use crate::table::{check_sorted, Table};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    /// Attach a sorted key column with this many groups of near-equal size.
    pub key_groups: Option<usize>,
}

impl GenSpec {
    pub fn new(rows: usize, cols: usize, seed: u64) -> Self {
        Self {
            rows,
            cols,
            seed,
            key_groups: None,
        }
    }

    pub fn with_key_groups(mut self, groups: usize) -> Self {
        self.key_groups = Some(groups);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidSpec(format!(
                "rows and cols must be at least 1 (got {} x {})",
                self.rows, self.cols
            )));
        }
        match self.key_groups {
            Some(0) => Err(Error::InvalidSpec("key_groups must be at least 1".into())),
            Some(g) if g > self.rows => Err(Error::InvalidSpec(format!(
                "key_groups ({g}) exceeds rows ({})",
                self.rows
            ))),
            _ => Ok(()),
        }
    }
}

/// Maps a raw 64-bit draw to the open unit interval.
#[inline]
pub fn unit_open(x: u64) -> f64 {
    ((x >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// A `rows x cols` table of i.i.d. uniform `(0, 1)` values.
///
/// ```
/// # use joinqr::data::{gen_uniform, GenSpec};
/// let t = gen_uniform(&GenSpec::new(4, 2, 42).with_key_groups(2)).unwrap();
/// assert_eq!(t.keys(), Some(&[0, 0, 1, 1][..]));
/// assert_eq!(t.data()[(0, 0)], 0.7415648787718233);
/// ```
pub fn gen_uniform(spec: &GenSpec) -> Result<Table> {
    spec.validate()?;
    let mut rng = SplitMix64::seed_from_u64(spec.seed);
    let data = Matrix::from_fn(spec.rows, spec.cols, |_, _| unit_open(rng.next_u64()));
    match spec.key_groups {
        None => Ok(Table::new(data)),
        Some(groups) => Table::with_keys(data, group_keys(spec.rows, groups)),
    }
}

/// `rows` keys in `groups` runs; the first `rows % groups` runs get one
/// extra row.
fn group_keys(rows: usize, groups: usize) -> Vec<i64> {
    let (base, extra) = (rows / groups, rows % groups);
    (0..groups)
        .flat_map(|g| std::iter::repeat_n(g as i64, base + usize::from(g < extra)))
        .collect()
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads a table from a CSV file. `key_col` is a zero-based column index.
pub fn read_table(
    path: impl AsRef<Path>,
    has_header: bool,
    key_col: Option<usize>,
) -> Result<Table> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_error(path))?;
    parse_table(file, path, has_header, key_col)
}

/// Reads a plain numeric CSV (no header, no keys), e.g. a written R factor.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    Ok(read_table(path, false, None)?.data().clone())
}

/// Parses CSV text; `origin` only labels error messages.
pub fn parse_table(
    input: impl Read,
    origin: &Path,
    has_header: bool,
    key_col: Option<usize>,
) -> Result<Table> {
    let parse_error = |line: u64, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .from_reader(input);

    let mut width = None;
    let mut data = Vec::new();
    let mut keys = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                let message = match e.kind() {
                    csv::ErrorKind::UnequalLengths {
                        expected_len, len, ..
                    } => format!("expected {expected_len} fields, found {len}"),
                    _ => e.to_string(),
                };
                return Err(parse_error(line, message));
            }
        }
        let line = record.position().map_or(0, |p| p.line());
        let fields = record.len();
        if let Some(k) = key_col {
            if k >= fields {
                return Err(parse_error(
                    line,
                    format!("key column {k} out of range for {fields} fields"),
                ));
            }
        }
        width.get_or_insert(fields - usize::from(key_col.is_some()));
        for (c, field) in record.iter().enumerate() {
            if Some(c) == key_col {
                let key = field.parse::<i64>().map_err(|_| {
                    parse_error(
                        line,
                        format!("column {}: {field:?} is not an integer key", c + 1),
                    )
                })?;
                keys.push(key);
            } else {
                let value = field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        parse_error(
                            line,
                            format!("column {}: {field:?} is not a finite number", c + 1),
                        )
                    })?;
                data.push(value);
            }
        }
    }

    let cols = width.unwrap_or(0);
    let rows = data.len().checked_div(cols).unwrap_or(keys.len());
    let matrix = Matrix::from_vec(rows, cols, data)?;
    match key_col {
        None => Ok(Table::new(matrix)),
        Some(_) => {
            if let Err(e @ Error::UnsortedKeys { row, .. }) = check_sorted(&keys) {
                let line = row as u64 + 1 + u64::from(has_header);
                return Err(parse_error(line, e.to_string()));
            }
            Table::with_keys(matrix, keys)
        }
    }
}

fn write_rows(
    path: &Path,
    rows: usize,
    mut row: impl FnMut(usize, &mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(io_error(path))?;
    let mut out = BufWriter::new(file);
    (|| {
        for i in 0..rows {
            row(i, &mut out)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    })()
    .map_err(io_error(path))
}

fn write_values(out: &mut impl Write, values: &[f64]) -> std::io::Result<()> {
    for (j, x) in values.iter().enumerate() {
        if j > 0 {
            out.write_all(b",")?;
        }
        // Debug is the shortest representation that parses back exactly
        write!(out, "{x:?}")?;
    }
    Ok(())
}

pub fn write_matrix(matrix: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    write_rows(path.as_ref(), matrix.rows(), |i, out| {
        write_values(out, matrix.row(i))
    })
}

/// Writes a table with its key column (if any) first.
pub fn write_table(table: &Table, path: impl AsRef<Path>) -> Result<()> {
    write_rows(path.as_ref(), table.rows(), |i, out| {
        if let Some(keys) = table.keys() {
            write!(out, "{}", keys[i])?;
            if table.cols() > 0 {
                out.write_all(b",")?;
            }
        }
        write_values(out, table.data().row(i))
    })
}

/// Where [`write_svd`] puts V: `sigma.csv` → `sigma_v.csv`.
pub fn vectors_path(path: impl AsRef<Path>) -> PathBuf {
    let path = path.as_ref();
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_v.{}", ext.to_string_lossy()),
        None => format!("{stem}_v"),
    };
    path.with_file_name(name)
}

/// Writes the singular values one per line to `path` and, when present, V to
/// [`vectors_path`]`(path)`.
pub fn write_svd(result: &SvdResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_rows(path, result.values.len(), |i, out| {
        write_values(out, &result.values[i..=i])
    })?;
    if let Some(v) = &result.right_vectors {
        write_matrix(v, vectors_path(path))?;
    }
    Ok(())
}
