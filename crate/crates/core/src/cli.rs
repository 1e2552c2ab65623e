//! The `cbe` command line: series dumps, error tables, moments, convergence
//! ratios, ODM bounds and oracle verification, written as CSV/JSON.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{
    contraction_eta, error_table, exact_reference, gamma_ratios, moments_of_series,
    odm_error_bound, truncation_error_norm, weighted_l1_norm, ErrorGrid, NormSpec,
};
use crate::error::Error;
use crate::expalg::to_f64;
use crate::model::{resolve_case, CaseSpec};
use crate::odm::{odm_solve, DEFAULT_ODM_ORDER};
use crate::oracle::{verify_case, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::series::{Method, SeriesSolution};
use crate::vim::vim_solve;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_NO_EXACT: i32 = 4;

pub const OUTPUT_DIR_ENV: &str = "CBE_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "cbe", version, about = "Series solutions of the collision-induced breakage equation")]
pub struct Cli {
    /// Directory for output files (default: $CBE_OUTPUT_DIR, else the current directory)
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute series components and dump them with a manifest
    Run(RunArgs),
    /// Discrete error against the exact concentration
    Table(TableArgs),
    /// Moments of the truncated series next to the exact moments
    Moments(MomentsArgs),
    /// Successive norm ratios of the series components
    Converge(ConvergeArgs),
    /// ODM truncation-error bound against the observed error
    Bound(BoundArgs),
    /// Cross-check the symbolic engine with the numerical oracle
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Vim,
    Odm,
    Both,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Vim => vec![Method::Vim],
            MethodArg::Odm => vec![Method::Odm],
            MethodArg::Both => vec![Method::Vim, Method::Odm],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Single,
    Sup,
}

#[derive(Args, Debug)]
pub struct CaseArgs {
    /// Built-in case (example1|example2|example3) or path to a case file
    #[arg(long, default_value = "example1")]
    pub case: String,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, value_enum, default_value = "vim")]
    pub method: MethodArg,
    /// Truncation order n (components f_0..f_n)
    #[arg(long, allow_negative_numbers = true)]
    pub order: Option<i64>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true,
          default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6])]
    pub times: Vec<f64>,
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true,
          default_values_t = [4, 6, 8, 10])]
    pub orders: Vec<i64>,
    /// Upper end of the size grid
    #[arg(long, default_value_t = 10.0)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 1000)]
    pub cells: usize,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    #[arg(long, allow_negative_numbers = true)]
    pub order: Option<i64>,
    #[arg(long = "j", num_args = 1.., value_delimiter = ',', default_values_t = [0u32, 1, 2])]
    pub js: Vec<u32>,
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true,
          default_values_t = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])]
    pub times: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, value_enum, default_value = "vim")]
    pub method: MethodArg,
    /// Evaluation time (single mode) or horizon (sup mode)
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub time: f64,
    /// First and last ratio index
    #[arg(long = "i", num_args = 2, default_values_t = [5usize, 9])]
    pub range: Vec<usize>,
    #[arg(long, value_enum, default_value = "single")]
    pub norm: NormArg,
    /// Time samples for the sup norm
    #[arg(long, default_value_t = 16)]
    pub nt: usize,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Time entering the contraction constant
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub time: f64,
    /// Horizon of the sup norm and of L = M1(0)(1 + horizon)
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub horizon: f64,
    /// First and last order m
    #[arg(long = "m", num_args = 2, default_values_t = [2usize, 10])]
    pub range: Vec<usize>,
    #[arg(long, default_value_t = 11)]
    pub nt: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Solver(String),
    NoExact(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Solver(_) => EXIT_SOLVER,
            Failure::NoExact(_) => EXIT_NO_EXACT,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Solver(m) | Failure::NoExact(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnknownCase(_)
            | Error::Parse { .. }
            | Error::InvalidKernel(_)
            | Error::InvalidFragmentation(_)
            | Error::InvalidInitialCondition(_)
            | Error::Io(_) => Failure::Config(msg),
            Error::NoExactSolution(_) => Failure::NoExact(msg),
            _ => Failure::Solver(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("cbe: {}", f.message());
            f.code()
        }
    }
}

fn output_dir(cli: &Cli) -> CliResult<PathBuf> {
    let dir = cli
        .output_dir
        .clone()
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .map_err(|e| Failure::Config(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Run(a) => cmd_run(a, &output_dir(cli)?),
        Command::Table(a) => cmd_table(a, &output_dir(cli)?),
        Command::Moments(a) => cmd_moments(a, &output_dir(cli)?),
        Command::Converge(a) => cmd_converge(a, &output_dir(cli)?),
        Command::Bound(a) => cmd_bound(a, &output_dir(cli)?),
        Command::Verify(a) => cmd_verify(a, &output_dir(cli)?),
    }
}

/// Order used when none is given.
pub fn default_order(spec: &CaseSpec, method: Method) -> usize {
    match (spec.label.as_str(), method) {
        ("example3", _) => 3,
        ("example2", Method::Odm) => DEFAULT_ODM_ORDER,
        _ => 10,
    }
}

fn checked_order(order: i64) -> CliResult<usize> {
    usize::try_from(order).map_err(|_| Failure::Config(format!("order must be >= 0, got {order}")))
}

fn resolve_order(order: Option<i64>, spec: &CaseSpec, method: Method) -> CliResult<usize> {
    order.map_or(Ok(default_order(spec, method)), checked_order)
}

pub fn solve(spec: &CaseSpec, method: Method, order: usize) -> crate::Result<SeriesSolution> {
    match method {
        Method::Vim => vim_solve(spec, order),
        Method::Odm => odm_solve(spec, order),
    }
}

fn check_times(times: &[f64]) -> CliResult<()> {
    if times.is_empty() {
        return Err(Failure::Config("at least one time is required".into()));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Failure::Config(format!("times must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Serialize)]
struct ManifestEntry {
    method: String,
    order: usize,
    file: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest {
    case: String,
    runs: Vec<ManifestEntry>,
}

fn cmd_run(a: &RunArgs, dir: &Path) -> CliResult<()> {
    let spec = resolve_case(&a.case.case)?;
    let mut manifest = Manifest {
        case: spec.label.clone(),
        runs: Vec::new(),
    };
    for method in a.method.methods() {
        let order = resolve_order(a.order, &spec, method)?;
        let series = solve(&spec, method, order)?;
        let text = series.dump();
        let file = format!("series_{method}.txt");
        write_file(dir, &file, &text)?;
        manifest.runs.push(ManifestEntry {
            method: method.to_string(),
            order,
            file,
            sha256: sha256_hex(text.as_bytes()),
        });
    }
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Solver(e.to_string()))?;
    write_file(dir, "manifest.json", &(json + "\n"))
}

fn cmd_table(a: &TableArgs, dir: &Path) -> CliResult<()> {
    check_times(&a.times)?;
    if a.orders.is_empty() {
        return Err(Failure::Config("at least one order is required".into()));
    }
    let orders = a.orders.iter().map(|&o| checked_order(o)).collect::<CliResult<Vec<_>>>()?;
    if a.cells == 0 || !(a.grid_max > 0.0) {
        return Err(Failure::Config("grid needs cells > 0 and grid-max > 0".into()));
    }
    let spec = resolve_case(&a.case.case)?;
    let exact = exact_reference(&spec.label).map_err(|_| {
        Failure::NoExact(format!("no exact concentration for case `{}`", spec.label))
    })?;
    if !exact.has_concentration() {
        return Err(Failure::NoExact(format!(
            "no exact concentration for case `{}`",
            spec.label
        )));
    }
    let grid = ErrorGrid {
        lo: 0.0,
        hi: a.grid_max,
        cells: a.cells,
    };
    let max_order = *orders.iter().max().expect("non-empty");
    let mut per_method = Vec::new();
    for method in a.method.methods() {
        let series = solve(&spec, method, max_order)?;
        per_method.push(error_table(&series, exact, &a.times, &orders, &grid)?);
    }
    let mut out = String::from("time,method,order,error\n");
    for (ti, time) in a.times.iter().enumerate() {
        for rows in &per_method {
            for row in &rows[ti * orders.len()..(ti + 1) * orders.len()] {
                let _ = writeln!(out, "{time},{},{},{:e}", row.method, row.order, row.error);
            }
        }
    }
    write_file(dir, "table.csv", &out)
}

fn cmd_moments(a: &MomentsArgs, dir: &Path) -> CliResult<()> {
    check_times(&a.times)?;
    if a.js.is_empty() {
        return Err(Failure::Config("at least one moment index is required".into()));
    }
    let spec = resolve_case(&a.case.case)?;
    let exact = exact_reference(&spec.label).ok();
    let mut out = String::from("time,method,order,j,value,exact\n");
    for method in a.method.methods() {
        let order = resolve_order(a.order, &spec, method)?;
        let series = solve(&spec, method, order)?;
        let curves = a
            .js
            .iter()
            .map(|&j| moments_of_series(&series, j, order))
            .collect::<crate::Result<Vec<_>>>()?;
        for &t in &a.times {
            for curve in &curves {
                let reference = exact
                    .and_then(|r| r.moment(curve.j, t).ok())
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{t},{method},{order},{},{},{reference}",
                    curve.j,
                    curve.eval(t)
                );
            }
        }
    }
    write_file(dir, "moments.csv", &out)
}

fn cmd_converge(a: &ConvergeArgs, dir: &Path) -> CliResult<()> {
    let (lo, hi) = (a.range[0], a.range[1]);
    if lo > hi {
        return Err(Failure::Config(format!("empty index range {lo}..{hi}")));
    }
    if !a.time.is_finite() || a.time < 0.0 {
        return Err(Failure::Config(format!("time must be >= 0, got {}", a.time)));
    }
    let spec = resolve_case(&a.case.case)?;
    let norm = match a.norm {
        NormArg::Single => NormSpec::single_time(a.time),
        NormArg::Sup => NormSpec::sup_over_grid(a.time, a.nt),
    };
    let mut out = String::from("i,gamma,norm_mode,time\n");
    for method in a.method.methods() {
        let series = solve(&spec, method, hi + 1)?;
        for (i, g) in gamma_ratios(&series, &norm)? {
            if (lo..=hi).contains(&i) {
                let _ = writeln!(out, "{i},{g},{},{}", norm.mode.label(), a.time);
            }
        }
    }
    write_file(dir, "gamma.csv", &out)
}

fn cmd_bound(a: &BoundArgs, dir: &Path) -> CliResult<()> {
    let (lo, hi) = (a.range[0], a.range[1]);
    if lo > hi {
        return Err(Failure::Config(format!("empty order range {lo}..{hi}")));
    }
    if !(a.time >= 0.0 && a.horizon >= 0.0) {
        return Err(Failure::Config("time and horizon must be >= 0".into()));
    }
    let spec = resolve_case(&a.case.case)?;
    let exact = exact_reference(&spec.label).map_err(|_| {
        Failure::NoExact(format!("no exact concentration for case `{}`", spec.label))
    })?;
    if !exact.has_concentration() {
        return Err(Failure::NoExact(format!(
            "no exact concentration for case `{}`",
            spec.label
        )));
    }
    let l = to_f64(&spec.initial_moment(1)) * (1.0 + a.horizon);
    let eta = contraction_eta(to_f64(&spec.initial_moment(2)), l, a.time);
    let series = odm_solve(&spec, hi.max(1))?;
    let norm = NormSpec::sup_over_grid(a.horizon, a.nt);
    let norm_f1 = weighted_l1_norm(series.component(1), &norm)?;
    let mut out = String::from("m,eta,bound,observed\n");
    for m in lo..=hi {
        let bound = odm_error_bound(m as u32, eta, norm_f1)?;
        let observed = truncation_error_norm(&series, exact, m, &norm)?;
        let _ = writeln!(out, "{m},{eta},{bound:e},{observed:e}");
    }
    write_file(dir, "bound.csv", &out)
}

fn cmd_verify(a: &VerifyArgs, dir: &Path) -> CliResult<()> {
    if a.samples == 0 {
        return Err(Failure::Config("samples must be > 0".into()));
    }
    let spec = resolve_case(&a.case.case)?;
    let report = verify_case(&spec, a.samples, a.seed)?;
    let mut out = String::from("check,value,tol,passed\n");
    for c in &report.checks {
        let _ = writeln!(out, "{},{:e},{:e},{}", c.name, c.value, c.tol, c.passed());
    }
    write_file(dir, "verify.csv", &out)?;
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<_> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::Solver(format!("oracle checks failed: {}", failed.join(", "))))
    }
}
