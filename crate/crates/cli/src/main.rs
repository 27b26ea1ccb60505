// Copyright 2026 the joinqr Authors
// SPDX-License-Identifier: Apache-2.0

//! `joinqr`: R factors, SVDs and benchmarks for two-table joins.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or IO error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use joinqr::bench::{run_bench, BenchConfig, Target};
use joinqr::data::{gen_uniform, read_table, write_matrix, write_svd, write_table, GenSpec};
use joinqr::oracle::{baseline_r, baseline_svd, materialize_join};
use joinqr::svd::svd_of_r;
use joinqr::{figaro_r, figaro_svd, max_abs_diff, Table};

#[derive(Parser)]
#[command(
    name = "joinqr",
    version,
    about = "QR and SVD of two-table joins without materializing the join"
)]
struct Cli {
    /// Worker threads (default: one per core). Results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a table of uniform (0, 1) values.
    Gen(GenArgs),
    /// Write the canonical R factor of the join.
    Qr(QrArgs),
    /// Write the singular values (and optionally V) of the join.
    Svd(SvdArgs),
    /// Compare the factorized and materialized paths.
    Verify(VerifyArgs),
    /// Time both paths over a grid of table shapes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Prepend a sorted key column with this many near-equal groups.
    #[arg(long)]
    key_groups: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    /// Zero-based key column of both inputs; joins naturally on it.
    #[arg(long, value_name = "K")]
    key_col: Option<usize>,
    /// Key column of the left input (overrides --key-col).
    #[arg(long, value_name = "K")]
    left_key_col: Option<usize>,
    /// Key column of the right input (overrides --key-col).
    #[arg(long, value_name = "K")]
    right_key_col: Option<usize>,
    /// Both inputs start with a header row.
    #[arg(long)]
    header: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Figaro,
    Baseline,
}

#[derive(Args)]
struct QrArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value_t = Method::Figaro)]
    method: Method,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SvdArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value_t = Method::Figaro)]
    method: Method,
    /// Write singular values only (the default).
    #[arg(long, conflicts_with = "with_v")]
    values_only: bool,
    /// Also write V next to the values (`sigma.csv` → `sigma_v.csv`).
    #[arg(long)]
    with_v: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [100usize, 200, 400, 800, 1600])]
    rows_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16, 32])]
    cols_list: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    repeats: usize,
    #[arg(long, default_value = "qr")]
    target: Target,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// Skip the baseline when the join has more entries than this.
    #[arg(long, default_value_t = 2e8, value_name = "J")]
    skip_baseline_above: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Report file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Inputs {
    fn load(&self) -> anyhow::Result<(Table, Table)> {
        let left_key = self.left_key_col.or(self.key_col);
        let right_key = self.right_key_col.or(self.key_col);
        if left_key.is_some() != right_key.is_some() {
            bail!("a key column is set for only one input; pass --key-col or both --left-key-col and --right-key-col");
        }
        let left = read_table(&self.left, self.header, left_key)?;
        let right = read_table(&self.right, self.header, right_key)?;
        Ok((left, right))
    }
}

fn gen(args: &GenArgs) -> anyhow::Result<()> {
    let mut spec = GenSpec::new(args.rows, args.cols, args.seed);
    if let Some(groups) = args.key_groups {
        spec = spec.with_key_groups(groups);
    }
    write_table(&gen_uniform(&spec)?, &args.out)?;
    Ok(())
}

fn qr(args: &QrArgs) -> anyhow::Result<()> {
    let (left, right) = args.inputs.load()?;
    let r = match args.method {
        Method::Figaro => figaro_r(&left, &right)?,
        Method::Baseline => baseline_r(&materialize_join(&left, &right)?)?,
    };
    write_matrix(r.as_matrix(), &args.out)?;
    Ok(())
}

fn svd(args: &SvdArgs) -> anyhow::Result<()> {
    let (left, right) = args.inputs.load()?;
    let result = match args.method {
        Method::Figaro => figaro_svd(&left, &right, args.with_v)?,
        Method::Baseline => baseline_svd(&materialize_join(&left, &right)?, args.with_v)?,
    };
    write_svd(&result, &args.out)?;
    Ok(())
}

/// Prints both differences; true when both are within `tol`.
fn verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let (left, right) = args.inputs.load()?;
    let r = figaro_r(&left, &right)?;
    let j = materialize_join(&left, &right)?;
    let r_base = baseline_r(&j)?;
    let r_diff =
        max_abs_diff(r.as_matrix(), r_base.as_matrix())? / r_base.as_matrix().max_abs().max(1.0);

    let sigma = svd_of_r(&r, false)?.values;
    let sigma_base = svd_of_r(&r_base, false)?.values;
    let scale = sigma_base.first().copied().unwrap_or(0.0).max(1.0);
    let sigma_diff = sigma
        .iter()
        .zip(&sigma_base)
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0, f64::max);

    let ok = r_diff <= args.tol && sigma_diff <= args.tol;
    println!("join rows: {}", j.rows());
    println!("R difference: {r_diff:e}");
    println!("singular value difference: {sigma_diff:e}");
    println!(
        "{} (tol {:e})",
        if ok { "OK" } else { "MISMATCH" },
        args.tol
    );
    Ok(ok)
}

fn bench(args: &BenchArgs) -> anyhow::Result<()> {
    let config = BenchConfig {
        rows_list: args.rows_list.clone(),
        cols_list: args.cols_list.clone(),
        repeats: args.repeats,
        target: args.target,
        skip_baseline_above: args.skip_baseline_above,
        seed: args.seed,
    };
    let report = run_bench(&config)?;
    let text = match args.format {
        Format::Csv => report.to_csv(),
        Format::Md => report.to_markdown(),
    };
    match &args.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Gen(args) => gen(args)?,
        Command::Qr(args) => qr(args)?,
        Command::Svd(args) => svd(args)?,
        Command::Verify(args) => return verify(args),
        Command::Bench(args) => bench(args)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
