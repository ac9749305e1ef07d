//! Command-line front end.
//!
//! Every command produces a [`Table`] (or a JSON document) that is written
//! to stdout or `--output`. Exit codes: 0 success, 1 bad arguments or
//! domain errors, 2 validation failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::arith::{binary_entropy, Backend};
use crate::error::{Error, Result};
use crate::finite::{sector_spectrum, SystemShape, ThermalBlockModel, ThermalMode};
use crate::oracle::{validate, CertifyOptions, MAX_SITES};
use crate::thermo::{
    critical_temperature, entanglement_scaling, limit_block_entropy, mu_star, weight_profile,
    ThermoPoint,
};

/// Points in the default temperature grid.
pub const DEFAULT_GRID_POINTS: usize = 60;
/// Default grid spans `[T_LOW, T_HIGH] * T_c`.
pub const T_LOW: f64 = 0.05;
pub const T_HIGH: f64 = 4.0;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hcb-entropy",
    version,
    about = "Block entropy of hard-core bosons on the complete graph"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Rational,
    Logfloat,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Logfloat => Backend::LogFloat,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    MeanOfEntropies,
    EntropyOfMean,
}

impl From<ModeArg> for ThermalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::MeanOfEntropies => ThermalMode::MeanOfEntropies,
            ModeArg::EntropyOfMean => ThermalMode::EntropyOfMean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Panel {
    #[value(name = "1a")]
    Fig1a,
    #[value(name = "1b")]
    Fig1b,
    #[value(name = "2a")]
    Fig2a,
    #[value(name = "2b")]
    Fig2b,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of the block reduced density matrix in one sector.
    Spectrum(SpectrumArgs),
    /// Thermodynamic-limit state at one temperature.
    Thermo(ThermoArgs),
    /// Block entropy over a temperature grid.
    Entropy(EntropyArgs),
    /// Data behind one figure panel, one CSV per curve.
    Figure(FigureArgs),
    /// Compare the analytic tables with exact diagonalization.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long = "L")]
    pub sites: usize,
    #[arg(long = "N")]
    pub particles: usize,
    #[arg(long = "n")]
    pub block: usize,
    #[arg(long)]
    pub r: usize,
    /// Defaults to rational up to L = 200.
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("temp").required(true).args(["temperature", "beta"])))]
pub struct ThermoArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long = "T")]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct GridArgs {
    /// Explicit temperatures, strictly increasing.
    #[arg(long = "T", value_delimiter = ',')]
    pub temperatures: Vec<f64>,
    /// Number of log-spaced points in the default grid.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Finite lattice size.
    #[arg(long = "L", requires = "particles", conflicts_with = "p")]
    pub sites: Option<usize>,
    #[arg(long = "N", requires = "sites")]
    pub particles: Option<usize>,
    /// Density for the thermodynamic limit.
    #[arg(long, required_unless_present = "sites")]
    pub p: Option<f64>,
    #[arg(long = "n")]
    pub block: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::EntropyOfMean)]
    pub mode: ModeArg,
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub panel: Panel,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Densities (1a) or the single density of the other panels.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    /// Lattice sizes for 1a.
    #[arg(long = "L", value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Block sizes.
    #[arg(long = "n", value_delimiter = ',')]
    pub blocks: Vec<usize>,
    /// `mu` for 1b and 2b.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Grid points (temperatures for 1a, `mu*/p` values for 2a).
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::EntropyOfMean)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long = "max-L", default_value_t = 8)]
    pub max_sites: usize,
    /// Shift applied to analytic eigenvalues to exercise the failure path.
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub perturb: f64,
}

/// A CSV / JSON cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(format_float(*v))),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows with a header, rendered as CSV or as a JSON array of objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io_err = |e: csv::Error| Error::Argument(format!("csv: {e}"));
        w.write_record(&self.header).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io_err)?;
        }
        w.into_inner()
            .map_err(|e| Error::Argument(format!("csv: {e}")))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => json_bytes(&self.to_json()),
        }
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out =
        serde_json::to_vec_pretty(value).map_err(|e| Error::Argument(format!("json: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

/// `points` log-spaced values over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && points >= 2) {
        return Err(Error::Argument(format!(
            "log grid needs 0 < lo < hi and at least 2 points (got {lo}, {hi}, {points})"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect())
}

fn check_increasing(name: &str, grid: &[f64]) -> Result<()> {
    if grid.iter().any(|t| !t.is_finite() || *t <= 0.0) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!(
            "{name} grid must be positive and strictly increasing"
        )));
    }
    Ok(())
}

fn check_increasing_sizes(name: &str, grid: &[usize]) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!(
            "{name} list must be strictly increasing"
        )));
    }
    Ok(())
}

fn temperature_grid(grid: &GridArgs, p: f64) -> Result<Vec<f64>> {
    if grid.temperatures.is_empty() {
        let tc = critical_temperature(p)?;
        log_grid(T_LOW * tc, T_HIGH * tc, grid.points)
    } else {
        check_increasing("temperature", &grid.temperatures)?;
        Ok(grid.temperatures.clone())
    }
}

/// Runs the command line and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    let outcome = match cli.jobs {
        Some(0) => Err(Error::Argument("--jobs must be at least 1".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Err(Error::Argument(format!("thread pool: {e}"))),
        },
        None => dispatch(cli),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Spectrum(a) => emit(cli, &spectrum_output(a, cli.format)?),
        Command::Thermo(a) => emit(cli, &thermo_table(a)?.render(cli.format)?),
        Command::Entropy(a) => emit(cli, &entropy_table(a)?.render(cli.format)?),
        Command::Figure(a) => {
            let files = write_figure(a)?;
            let listing = files
                .iter()
                .map(|f| format!("{}\n", f.display()))
                .collect::<String>();
            emit(cli, listing.as_bytes())
        }
        Command::Validate(a) => run_validate(cli, a),
    }
}

fn emit(cli: &Cli, bytes: &[u8]) -> Result<i32> {
    write_output(cli.output.as_deref(), bytes)?;
    Ok(EXIT_OK)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let res = match path {
        Some(p) => fs::write(p, bytes),
        None => io::stdout().lock().write_all(bytes),
    };
    res.map_err(|e| Error::Argument(format!("write failed: {e}")))
}

/// Spectrum rows plus a `trace` trailer.
pub fn spectrum_table(a: &SpectrumArgs) -> Result<Table> {
    let shape = SystemShape::new(a.sites, a.particles, a.block)?;
    let backend = a
        .backend
        .map(Backend::from)
        .unwrap_or(Backend::default_for(a.sites));
    let spec = sector_spectrum(&shape, a.r, backend)?;
    let mut t = Table::new(vec![
        "k",
        "s",
        "lambda_exact",
        "lambda",
        "degeneracy",
        "lambda_times_degeneracy",
    ]);
    for e in &spec.entries {
        let exact = e
            .value
            .exact()
            .map(|x| Cell::Text(x.to_string()))
            .unwrap_or(Cell::Empty);
        t.push(vec![
            e.k.into(),
            e.s.into(),
            exact,
            e.value.to_f64().into(),
            Cell::Text(e.degeneracy.to_string()),
            e.weight().into(),
        ]);
    }
    let exact_trace = spec
        .trace_exact()
        .map(|x| Cell::Text(x.to_string()))
        .unwrap_or(Cell::Empty);
    t.push(vec![
        Cell::Text("trace".into()),
        Cell::Empty,
        exact_trace,
        spec.trace().into(),
        Cell::Empty,
        spec.trace().into(),
    ]);
    Ok(t)
}

fn spectrum_output(a: &SpectrumArgs, format: Format) -> Result<Vec<u8>> {
    let table = spectrum_table(a)?;
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut rows = match table.to_json() {
                Value::Array(v) => v,
                _ => unreachable!(),
            };
            let trace = rows.pop();
            let doc = serde_json::json!({
                "L": a.sites,
                "N": a.particles,
                "n": a.block,
                "r": a.r,
                "entries": rows,
                "trace": trace,
            });
            json_bytes(&doc)
        }
    }
}

pub fn thermo_table(a: &ThermoArgs) -> Result<Table> {
    let point = match (a.temperature, a.beta) {
        (Some(t), None) => ThermoPoint::new(a.p, t)?,
        (None, Some(b)) => ThermoPoint::from_beta(a.p, b)?,
        _ => return Err(Error::Argument("give exactly one of --T and --beta".into())),
    };
    let mut t = Table::new(vec![
        "p",
        "T",
        "T_c",
        "mu_star",
        "eta",
        "rho_c",
        "free_energy_density",
        "gibbs_bits_per_site",
    ]);
    t.push(vec![
        point.p.into(),
        point.temperature.into(),
        point.t_c.into(),
        point.mu_star.into(),
        point.eta.into(),
        point.rho_c.into(),
        point.free_energy_density.into(),
        point.gibbs_bits_per_site.into(),
    ]);
    Ok(t)
}

/// Finite-lattice entropy curve over a temperature grid.
pub fn finite_entropy_curve(
    shape: SystemShape,
    temperatures: &[f64],
    mode: ThermalMode,
    backend: Backend,
) -> Result<Vec<f64>> {
    let model = ThermalBlockModel::new(shape, backend)?;
    temperatures
        .par_iter()
        .map(|t| model.entropy(1.0 / t, mode))
        .collect()
}

/// Thermodynamic-limit entropy curve over a temperature grid.
pub fn limit_entropy_curve(p: f64, block: usize, temperatures: &[f64]) -> Result<Vec<f64>> {
    temperatures
        .par_iter()
        .map(|t| limit_block_entropy(p, mu_star(1.0 / t, p)?, block))
        .collect()
}

pub fn entropy_table(a: &EntropyArgs) -> Result<Table> {
    let (grid, values) = match (a.sites, a.particles, a.p) {
        (Some(l), Some(np), None) => {
            let shape = SystemShape::new(l, np, a.block)?;
            let p = np as f64 / l as f64;
            let grid = temperature_grid(&a.grid, p)?;
            let backend = a
                .backend
                .map(Backend::from)
                .unwrap_or(Backend::default_for(l));
            let s = finite_entropy_curve(shape, &grid, a.mode.into(), backend)?;
            (grid, s)
        }
        (None, None, Some(p)) => {
            let grid = temperature_grid(&a.grid, p)?;
            let s = limit_entropy_curve(p, a.block, &grid)?;
            (grid, s)
        }
        _ => {
            return Err(Error::Argument(
                "give either --L and --N (finite) or --p (limit)".into(),
            ))
        }
    };
    let mut t = Table::new(vec!["T", "S_bits"]);
    for (temp, s) in grid.into_iter().zip(values) {
        t.push(vec![temp.into(), s.into()]);
    }
    Ok(t)
}

/// One output file of a figure panel.
#[derive(Debug, Clone)]
pub struct Curve {
    pub file: String,
    pub bytes: Vec<u8>,
}

pub fn figure_curves(a: &FigureArgs) -> Result<Vec<Curve>> {
    match a.panel {
        Panel::Fig1a => figure_1a(a),
        Panel::Fig1b => figure_1b(a),
        Panel::Fig2a => figure_2a(a),
        Panel::Fig2b => figure_2b(a),
    }
}

fn single_p(a: &FigureArgs, default: f64) -> Result<f64> {
    match a.p.as_slice() {
        [] => Ok(default),
        [p] => Ok(*p),
        _ => Err(Error::Argument("this panel takes a single --p".into())),
    }
}

fn sizes_or(list: &[usize], default: &[usize], name: &str) -> Result<Vec<usize>> {
    let v = if list.is_empty() {
        default.to_vec()
    } else {
        list.to_vec()
    };
    check_increasing_sizes(name, &v)?;
    Ok(v)
}

fn figure_1a(a: &FigureArgs) -> Result<Vec<Curve>> {
    let ps = if a.p.is_empty() {
        vec![0.1, 0.2, 0.5]
    } else {
        a.p.clone()
    };
    let sizes = sizes_or(&a.sizes, &[50, 200, 700], "--L")?;
    let block = match a.blocks.as_slice() {
        [] => 6,
        [n] => *n,
        _ => return Err(Error::Argument("panel 1a takes a single --n".into())),
    };
    let points = a.points.unwrap_or(DEFAULT_GRID_POINTS);
    let mut curves = Vec::new();
    for &p in &ps {
        let tc = critical_temperature(p)?;
        let grid = log_grid(T_LOW * tc, T_HIGH * tc, points)?;
        let curve = |values: Vec<f64>| {
            let mut t = Table::new(vec!["T", "T_over_Tc", "S_bits"]);
            for (temp, s) in grid.iter().zip(values) {
                t.push(vec![(*temp).into(), (temp / tc).into(), s.into()]);
            }
            t.to_csv()
        };
        for &l in &sizes {
            let np = (p * l as f64).round() as usize;
            let shape = SystemShape::new(l, np, block)?;
            let s = finite_entropy_curve(shape, &grid, a.mode.into(), Backend::default_for(l))?;
            curves.push(Curve {
                file: format!("fig1a_p{p}_L{l}.csv"),
                bytes: curve(s)?,
            });
        }
        curves.push(Curve {
            file: format!("fig1a_p{p}_limit.csv"),
            bytes: curve(limit_entropy_curve(p, block, &grid)?)?,
        });
    }
    Ok(curves)
}

fn figure_1b(a: &FigureArgs) -> Result<Vec<Curve>> {
    let p = single_p(a, 0.4)?;
    let mu = a.mu.unwrap_or(0.2);
    let blocks = sizes_or(&a.blocks, &[100, 200, 800], "--n")?;
    let tables = blocks
        .par_iter()
        .map(|&n| weight_profile(p, mu, n))
        .collect::<Result<Vec<_>>>()?;
    blocks
        .iter()
        .zip(tables)
        .map(|(n, profile)| {
            let mut t = Table::new(vec![
                "k",
                "k_over_n",
                "Q_over_Qmax_exact",
                "Q_over_Qmax_gaussian",
            ]);
            for pt in profile {
                t.push(vec![
                    pt.k.into(),
                    pt.k_over_n.into(),
                    pt.exact.into(),
                    pt.gaussian.into(),
                ]);
            }
            Ok(Curve {
                file: format!("fig1b_n{n}.csv"),
                bytes: t.to_csv()?,
            })
        })
        .collect()
}

/// `mu*/p` values `1/m, 2/m, ..., (m-1)/m`.
pub fn ratio_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Argument("need at least 2 grid intervals".into()));
    }
    Ok((1..points).map(|i| i as f64 / points as f64).collect())
}

fn figure_2a(a: &FigureArgs) -> Result<Vec<Curve>> {
    let p = single_p(a, 0.2)?;
    let blocks = sizes_or(&a.blocks, &[5, 10, 50, 100, 150, 200, 300, 400], "--n")?;
    let xs = ratio_grid(a.points.unwrap_or(50))?;
    let jobs: Vec<(usize, f64)> = blocks
        .iter()
        .flat_map(|&n| xs.iter().map(move |&x| (n, x)))
        .collect();
    let values = jobs
        .par_iter()
        .map(|&(n, x)| Ok(limit_block_entropy(p, x * p, n)? / n as f64))
        .collect::<Result<Vec<_>>>()?;
    let mut curves = Vec::new();
    for (i, n) in blocks.iter().enumerate() {
        let mut t = Table::new(vec!["mu_star_over_p", "mu_star", "S_over_n_bits"]);
        for (j, &x) in xs.iter().enumerate() {
            t.push(vec![
                x.into(),
                (x * p).into(),
                values[i * xs.len() + j].into(),
            ]);
        }
        curves.push(Curve {
            file: format!("fig2a_n{n}.csv"),
            bytes: t.to_csv()?,
        });
    }
    let mut t = Table::new(vec!["mu_star_over_p", "mu_star", "gibbs_bits_per_site"]);
    for &x in &xs {
        t.push(vec![
            x.into(),
            (x * p).into(),
            binary_entropy(x * p)?.into(),
        ]);
    }
    curves.push(Curve {
        file: "fig2a_gibbs.csv".into(),
        bytes: t.to_csv()?,
    });
    Ok(curves)
}

/// Fit summary written next to the 2b data.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingSummary {
    pub p: f64,
    pub mu_star: f64,
    pub n: Vec<usize>,
    pub slope: f64,
    pub intercept: f64,
    pub pinned_slope: f64,
    pub pinned_intercept: f64,
}

fn figure_2b(a: &FigureArgs) -> Result<Vec<Curve>> {
    let p = single_p(a, 0.3)?;
    let mu = a.mu.unwrap_or(0.18);
    let blocks = sizes_or(
        &a.blocks,
        &[50, 75, 100, 150, 200, 250, 300, 350, 400],
        "--n",
    )?;
    let fit = entanglement_scaling(p, mu, &blocks)?;
    let mut t = Table::new(vec![
        "n",
        "S_minus_S_gibbs_bits",
        "half_log2_n_minus_fitted_R",
    ]);
    for d in &fit.points {
        let model = 0.5 * (d.n as f64).log2() + fit.pinned_intercept;
        t.push(vec![d.n.into(), d.entanglement_bits.into(), model.into()]);
    }
    let summary = ScalingSummary {
        p,
        mu_star: mu,
        n: blocks,
        slope: fit.slope,
        intercept: fit.intercept,
        pinned_slope: 0.5,
        pinned_intercept: fit.pinned_intercept,
    };
    Ok(vec![
        Curve {
            file: "fig2b.csv".into(),
            bytes: t.to_csv()?,
        },
        Curve {
            file: "fig2b_summary.json".into(),
            bytes: json_bytes(&summary)?,
        },
    ])
}

/// Computes every curve first, then writes them; on a write error the files
/// already written are removed.
pub fn write_figure(a: &FigureArgs) -> Result<Vec<PathBuf>> {
    let curves = figure_curves(a)?;
    fs::create_dir_all(&a.out_dir)
        .map_err(|e| Error::Argument(format!("cannot create {}: {e}", a.out_dir.display())))?;
    let mut written = Vec::new();
    for c in &curves {
        let path = a.out_dir.join(&c.file);
        if let Err(e) = fs::write(&path, &c.bytes) {
            for f in &written {
                let _ = fs::remove_file(f);
            }
            return Err(Error::Argument(format!(
                "cannot write {}: {e}",
                path.display()
            )));
        }
        written.push(path);
    }
    Ok(written)
}

fn run_validate(cli: &Cli, a: &ValidateArgs) -> Result<i32> {
    if a.max_sites > MAX_SITES {
        return Err(Error::TooLarge {
            l: a.max_sites,
            max: MAX_SITES,
        });
    }
    let report = validate(
        a.max_sites,
        CertifyOptions {
            perturbation: a.perturb,
        },
    )?;
    write_output(cli.output.as_deref(), &json_bytes(&report)?)?;
    if report.passed {
        Ok(EXIT_OK)
    } else {
        for f in report.failures() {
            eprintln!("FAIL {f}");
        }
        Ok(EXIT_VALIDATION)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("hcb-entropy").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(2.0 / 3.0), "6.6666666666666663e-1");
    }

    #[test]
    fn spectrum_rows() {
        let cli = parse(&["spectrum", "--L", "4", "--N", "2", "--n", "2", "--r", "0"]);
        let Command::Spectrum(a) = &cli.command else {
            panic!()
        };
        let t = spectrum_table(a).unwrap();
        let exact: Vec<String> = t.rows.iter().map(|r| r[2].csv()).collect();
        assert_eq!(exact, ["1/6", "2/3", "0/1", "1/6", "1/1"]);
        assert_eq!(t.rows.last().unwrap()[0], Cell::Text("trace".into()));
    }

    #[test]
    fn spectrum_sector_one() {
        let cli = parse(&["spectrum", "--L", "4", "--N", "2", "--n", "2", "--r", "1"]);
        let Command::Spectrum(a) = &cli.command else {
            panic!()
        };
        let t = spectrum_table(a).unwrap();
        assert_eq!(t.rows.len(), 5);
        assert_eq!(t.rows[4][2].csv(), "1/1");
    }

    #[test]
    fn bad_sector_names_range() {
        let cli = parse(&["spectrum", "--L", "4", "--N", "2", "--n", "2", "--r", "5"]);
        let Command::Spectrum(a) = &cli.command else {
            panic!()
        };
        let msg = spectrum_table(a).unwrap_err().to_string();
        assert!(msg.contains('2'), "{msg}");
    }

    #[test]
    fn thermo_requires_one_temperature() {
        let base = ["hcb-entropy", "thermo", "--p", "0.2"];
        assert!(Cli::try_parse_from(base).is_err());
        assert!(Cli::try_parse_from(base.iter().chain(&["--T", "1", "--beta", "1"])).is_err());
    }

    #[test]
    fn thermo_high_temperature() {
        let cli = parse(&["thermo", "--p", "0.2", "--T", "1e9"]);
        let Command::Thermo(a) = &cli.command else {
            panic!()
        };
        let t = thermo_table(a).unwrap();
        assert_eq!(t.rows[0][3], Cell::Float(0.2));
        assert_eq!(t.rows[0][4], Cell::Float(0.0));
    }

    #[test]
    fn limit_entropy_tail() {
        let cli = parse(&["entropy", "--p", "0.5", "--n", "6", "--T", "10,100,1000"]);
        let Command::Entropy(a) = &cli.command else {
            panic!()
        };
        for row in entropy_table(a).unwrap().rows {
            let Cell::Float(s) = row[1] else { panic!() };
            assert!((s - 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn grids() {
        let g = log_grid(0.1, 10.0, 3).unwrap();
        assert!((g[1] - 1.0).abs() < 1e-15);
        assert!(log_grid(1.0, 1.0, 3).is_err());
        let cli = parse(&["entropy", "--p", "0.5", "--n", "6", "--T", "1,1"]);
        let Command::Entropy(a) = &cli.command else {
            panic!()
        };
        assert!(entropy_table(a).is_err());
        let cli = parse(&["entropy", "--p", "0.3", "--n", "4"]);
        let Command::Entropy(a) = &cli.command else {
            panic!()
        };
        assert_eq!(entropy_table(a).unwrap().rows.len(), DEFAULT_GRID_POINTS);
        assert_eq!(ratio_grid(4).unwrap(), [0.25, 0.5, 0.75]);
    }

    #[test]
    fn entropy_mode_conflicts() {
        assert!(Cli::try_parse_from([
            "x", "entropy", "--L", "10", "--N", "2", "--p", "0.2", "--n", "2"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["x", "entropy", "--n", "2"]).is_err());
    }

    #[test]
    fn json_table() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Cell::Int(1), Cell::Float(0.5)]);
        assert_eq!(t.to_json(), serde_json::json!([{"a": 1, "b": 0.5}]));
        assert_eq!(t.to_csv().unwrap(), b"a,b\n1,5.0000000000000000e-1\n");
    }
}
