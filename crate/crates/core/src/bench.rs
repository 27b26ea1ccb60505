// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! Runtime comparison of the factorized path against the materialized
//! baseline over a grid of table shapes.
//!
//! Each cell joins two generated `rows x cols` tables as a Cartesian product.
//! Generation and materialization of the baseline's input are not timed;
//! only the decomposition is. Timings are the mean of `repeats` runs after
//! one untimed warm-up.

use std::fmt::Write as _;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use crate::data::{gen_uniform, GenSpec};
use crate::error::Result;
use crate::oracle::{baseline_r, baseline_svd, materialize_cartesian};
use crate::qr::figaro_r;
use crate::svd::figaro_svd;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// The R factor.
    Qr,
    /// Singular values only.
    Svd,
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "qr" => Ok(Target::Qr),
            "svd" => Ok(Target::Svd),
            other => Err(format!("unknown target {other:?} (expected qr or svd)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub rows_list: Vec<usize>,
    pub cols_list: Vec<usize>,
    pub repeats: usize,
    pub target: Target,
    /// The baseline is skipped when the join has more entries than this.
    pub skip_baseline_above: f64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            rows_list: vec![100, 200, 400, 800, 1600],
            cols_list: vec![4, 8, 16, 32],
            repeats: 4,
            target: Target::Qr,
            skip_baseline_above: 2e8,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchCell {
    /// Rows per input table.
    pub rows: usize,
    /// Columns per input table.
    pub cols: usize,
    pub figaro_ms: f64,
    pub baseline_ms: Option<f64>,
    /// `baseline_ms / figaro_ms`.
    pub speedup: Option<f64>,
    pub repeats: usize,
    pub join_rows: u64,
    pub reduced_rows: usize,
    /// Hash of the bits of the factorized result, for checking that outputs
    /// do not depend on the repeat count or thread settings.
    pub digest: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub target: Target,
    pub cells: Vec<BenchCell>,
}

/// Runs `f` once untimed, then `repeats` timed times. Returns the mean wall
/// time in milliseconds and the last output.
pub fn mean_ms<T>(repeats: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let repeats = repeats.max(1);
    let mut out = black_box(f());
    let start = Instant::now();
    for _ in 0..repeats {
        out = black_box(f());
    }
    (start.elapsed().as_secs_f64() * 1e3 / repeats as f64, out)
}

fn digest(values: &[f64]) -> u64 {
    // FNV-1a over the IEEE bits
    values.iter().fold(0xcbf29ce484222325, |h, v| {
        v.to_bits()
            .to_le_bytes()
            .iter()
            .fold(h, |h, b| (h ^ u64::from(*b)).wrapping_mul(0x100000001b3))
    })
}

pub fn run_cell(config: &BenchConfig, rows: usize, cols: usize) -> Result<BenchCell> {
    let left = gen_uniform(&GenSpec::new(rows, cols, config.seed))?;
    let right = gen_uniform(&GenSpec::new(rows, cols, config.seed.wrapping_add(1)))?;
    let join_rows = (rows as u64) * (rows as u64);
    let join_entries = join_rows as f64 * (2 * cols) as f64;

    let (figaro_ms, out) = match config.target {
        Target::Qr => {
            let (ms, r) = mean_ms(config.repeats, || figaro_r(&left, &right));
            (ms, r?.into_matrix().into_vec())
        }
        Target::Svd => {
            let (ms, s) = mean_ms(config.repeats, || figaro_svd(&left, &right, false));
            (ms, s?.values)
        }
    };

    let baseline_ms = if join_entries > config.skip_baseline_above {
        None
    } else {
        let j = materialize_cartesian(left.data(), right.data())?;
        let ms = match config.target {
            Target::Qr => {
                let (ms, r) = mean_ms(config.repeats, || baseline_r(&j));
                r?;
                ms
            }
            Target::Svd => {
                let (ms, s) = mean_ms(config.repeats, || baseline_svd(&j, false));
                s?;
                ms
            }
        };
        Some(ms)
    };

    Ok(BenchCell {
        rows,
        cols,
        figaro_ms,
        baseline_ms,
        speedup: baseline_ms.map(|b| b / figaro_ms),
        repeats: config.repeats,
        join_rows,
        reduced_rows: 2 * rows - 1,
        digest: digest(&out),
    })
}

/// Every `(rows, cols)` combination, rows-major.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    let mut cells = Vec::with_capacity(config.rows_list.len() * config.cols_list.len());
    for &rows in &config.rows_list {
        for &cols in &config.cols_list {
            cells.push(run_cell(config, rows, cols)?);
        }
    }
    Ok(BenchReport {
        target: config.target,
        cells,
    })
}

fn opt(x: Option<f64>, precision: usize) -> String {
    x.map_or_else(String::new, |v| format!("{v:.precision$}"))
}

impl BenchReport {
    fn axes(&self) -> (Vec<usize>, Vec<usize>) {
        let mut rows: Vec<usize> = self.cells.iter().map(|c| c.rows).collect();
        let mut cols: Vec<usize> = self.cells.iter().map(|c| c.cols).collect();
        for v in [&mut rows, &mut cols] {
            v.sort_unstable();
            v.dedup();
        }
        (rows, cols)
    }

    fn cell(&self, rows: usize, cols: usize) -> Option<&BenchCell> {
        self.cells.iter().find(|c| c.rows == rows && c.cols == cols)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "rows,cols,figaro_ms,baseline_ms,speedup,repeats,join_rows,reduced_rows\n",
        );
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{:.6},{},{},{},{},{}",
                c.rows,
                c.cols,
                c.figaro_ms,
                opt(c.baseline_ms, 6),
                opt(c.speedup, 3),
                c.repeats,
                c.join_rows,
                c.reduced_rows
            )
            .unwrap();
        }
        out
    }

    /// Two grids (factorized runtime, speed-up) followed by the per-cell
    /// details. An empty speed-up cell means the baseline was skipped.
    pub fn to_markdown(&self) -> String {
        let (rows, cols) = self.axes();
        let what = match self.target {
            Target::Qr => "R factor",
            Target::Svd => "singular values",
        };
        let mut out = String::new();
        let grid = |out: &mut String, title: &str, value: &dyn Fn(&BenchCell) -> String| {
            writeln!(out, "### {title}\n").unwrap();
            let header: Vec<String> = cols.iter().map(|c| c.to_string()).collect();
            writeln!(out, "| rows \\ cols | {} |", header.join(" | ")).unwrap();
            writeln!(out, "|---:|{}", "---:|".repeat(cols.len())).unwrap();
            for &r in &rows {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|&c| self.cell(r, c).map(value).unwrap_or_default())
                    .collect();
                writeln!(out, "| {r} | {} |", cells.join(" | ")).unwrap();
            }
            out.push('\n');
        };
        grid(
            &mut out,
            &format!("Factorized runtime, {what} (ms)"),
            &|c| format!("{:.3}", c.figaro_ms),
        );
        grid(&mut out, "Speed-up over baseline", &|c| opt(c.speedup, 1));

        writeln!(out, "### Details\n").unwrap();
        writeln!(
            out,
            "| rows | cols | figaro_ms | baseline_ms | speedup | repeats | join_rows | reduced_rows |"
        )
        .unwrap();
        writeln!(out, "|---:|---:|---:|---:|---:|---:|---:|---:|").unwrap();
        for c in &self.cells {
            writeln!(
                out,
                "| {} | {} | {:.3} | {} | {} | {} | {} | {} |",
                c.rows,
                c.cols,
                c.figaro_ms,
                opt(c.baseline_ms, 3),
                opt(c.speedup, 1),
                c.repeats,
                c.join_rows,
                c.reduced_rows
            )
            .unwrap();
        }
        out
    }
}
