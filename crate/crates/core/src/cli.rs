//! Command-line driver: single solves with history/field output, and accuracy
//! tables for cases with an exact solution.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::aweno::{FluxScheme, InterpVariables};
use crate::error::{Error, Result};
use crate::interpolation::{InterpKind, WenoParams};
use crate::iterate::{solve_observed, IterationRecord, IteratorKind, Outcome, SolveConfig, WaveSpeedMode};
use crate::problems::{case_by_name, ProblemCase};
use crate::riemann::{FluxKind, SpeedBound};
use crate::spatial::{Discretization, Field};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "FSAWENO_OUT";

pub const EXIT_CONVERGED: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_STALLED: u8 = 3;
pub const EXIT_DIVERGED: u8 = 4;
pub const EXIT_BUDGET: u8 = 5;

pub fn exit_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Converged => EXIT_CONVERGED,
        Outcome::Stalled => EXIT_STALLED,
        Outcome::Diverged => EXIT_DIVERGED,
        Outcome::BudgetExceeded => EXIT_BUDGET,
    }
}

#[derive(Debug, Parser)]
#[command(name = "fsaweno", version, about = "Fifth-order AWENO steady-state Euler solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one case to steady state and write history, field and summary files.
    Solve(SolveArgs),
    /// L1/Linf density errors and orders over a list of square grids.
    Table(TableArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    /// smooth, shock-reflection, plate or forward-step
    #[arg(long)]
    pub case: String,
    /// linear-us, weno-us, weno-es or hybrid-us
    #[arg(long, default_value = "hybrid-us")]
    pub scheme: InterpKind,
    /// llf or hllc
    #[arg(long, default_value = "llf")]
    pub flux: FluxKind,
    /// fs or rk3
    #[arg(long, default_value = "fs")]
    pub iterator: IteratorKind,
    #[arg(long, default_value_t = 1.0)]
    pub cfl: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Budget in grid updates (one per sweep, three per Runge-Kutta step).
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// isotropic or per-axis
    #[arg(long, default_value = "isotropic")]
    pub wave_speeds: WaveSpeedMode,
    /// characteristic or conserved
    #[arg(long, default_value = "characteristic")]
    pub variables: InterpVariables,
    /// LLF dissipation speed: local or global
    #[arg(long, default_value = "local")]
    pub speed_bound: SpeedBound,
    /// Regularization of the nonlinear weights.
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Grid as NXxNY; defaults to the case's grid.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    #[arg(long, env = OUT_DIR_ENV, default_value = "fsaweno-out")]
    pub out: PathBuf,
    /// Also dump the field every K grid updates.
    #[arg(long)]
    pub dump_every: Option<usize>,
    /// Print a residue line to stderr every K grid updates.
    #[arg(long)]
    pub progress: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Comma-separated N for N x N grids.
    #[arg(long, value_delimiter = ',', default_value = "20,30,40,50,60,70,80")]
    pub grids: Vec<usize>,
}

pub fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let bad = || format!("expected NXxNY, got `{s}`");
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nx: usize = a.trim().parse().map_err(|_| bad())?;
    let ny: usize = b.trim().parse().map_err(|_| bad())?;
    if nx == 0 || ny == 0 {
        return Err(bad());
    }
    Ok((nx, ny))
}

/// Everything needed for one solve.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub case: String,
    pub grid: Option<(usize, usize)>,
    pub interp: InterpKind,
    pub flux: FluxKind,
    pub variables: InterpVariables,
    pub speed_bound: SpeedBound,
    pub eps: f64,
    pub solve: SolveConfig,
    pub out: Option<PathBuf>,
    pub dump_every: Option<usize>,
    pub progress: Option<usize>,
}

impl RunConfig {
    pub fn new(case: &str, interp: InterpKind, flux: FluxKind, iterator: IteratorKind, cfl: f64) -> Self {
        Self {
            case: case.to_string(),
            grid: None,
            interp,
            flux,
            variables: InterpVariables::default(),
            speed_bound: SpeedBound::default(),
            eps: WenoParams::default().eps,
            solve: SolveConfig::new(iterator, cfl),
            out: None,
            dump_every: None,
            progress: None,
        }
    }

    fn from_args(a: &SchemeArgs) -> Self {
        let mut c = Self::new(&a.case, a.scheme, a.flux, a.iterator, a.cfl);
        c.solve.tol = a.tol;
        c.solve.max_iters = a.max_iters;
        c.solve.wave_speeds = a.wave_speeds;
        c.variables = a.variables;
        c.speed_bound = a.speed_bound;
        c.eps = a.eps;
        c
    }

    pub fn scheme(&self) -> FluxScheme {
        let mut scheme = FluxScheme::new(self.interp, self.flux)
            .with_variables(self.variables)
            .with_speed_bound(self.speed_bound);
        scheme.weno.eps = self.eps;
        scheme
    }

    /// Short label such as `fs-hybrid-us-llf`.
    pub fn label(&self) -> String {
        format!("{}-{}-{}", self.solve.iterator, self.interp, self.flux)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub case: String,
    pub nx: usize,
    pub ny: usize,
    pub label: String,
    pub cfl: f64,
    pub iterations: usize,
    pub final_time: f64,
    pub res_a: f64,
    pub outcome: Outcome,
    pub seconds: f64,
    /// Density errors `(L1 mean, Linf)` against the exact solution, when one exists.
    pub errors: Option<(f64, f64)>,
    pub failure: Option<String>,
}

impl RunSummary {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "case = {}", self.case);
        let _ = writeln!(s, "grid = {}x{}", self.nx, self.ny);
        let _ = writeln!(s, "scheme = {}", self.label);
        let _ = writeln!(s, "cfl = {}", self.cfl);
        let _ = writeln!(s, "outcome = {}", self.outcome);
        let _ = writeln!(s, "iterations = {}", self.iterations);
        let _ = writeln!(s, "final_time = {:e}", self.final_time);
        let _ = writeln!(s, "res_a = {:e}", self.res_a);
        let _ = writeln!(s, "wall_clock_s = {:.3}", self.seconds);
        if let Some((l1, linf)) = self.errors {
            let _ = writeln!(s, "density_l1 = {l1:e}");
            let _ = writeln!(s, "density_linf = {linf:e}");
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(s, "failure = {f}");
        }
        s
    }
}

/// Paths written by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct OutputBundle {
    pub history: PathBuf,
    pub field: PathBuf,
    pub troubled: Option<PathBuf>,
    pub summary: PathBuf,
}

/// Result of a solve before anything is written.
#[derive(Debug)]
pub struct RunResult {
    pub summary: RunSummary,
    pub disc: Discretization,
    pub field: Field,
    pub history: Vec<IterationRecord>,
}

/// Mean and maximum absolute density error over fluid points.
pub fn density_errors(disc: &Discretization, field: &Field, exact: fn(f64, f64) -> crate::euler::PrimitiveState) -> (f64, f64) {
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for (i, j) in disc.topology.fluid_points() {
        let e = (field.get(i as isize, j as isize).rho - exact(disc.grid.x(i as isize), disc.grid.y(j as isize)).rho).abs();
        sum += e;
        max = max.max(e);
    }
    (sum / disc.topology.fluid_count() as f64, max)
}

fn setup(config: &RunConfig) -> Result<(ProblemCase, Discretization, Field)> {
    let case = case_by_name(&config.case)?;
    let grid = match config.grid {
        Some((nx, ny)) => case.grid(nx, ny)?,
        None => case.default_grid()?,
    };
    let disc = case.discretization(grid, config.scheme())?;
    let field = case.initial_field(&disc)?;
    Ok((case, disc, field))
}

/// Solve without writing files; `observe` sees every history record.
pub fn execute(
    config: &RunConfig,
    mut observe: impl FnMut(&Discretization, &IterationRecord, &Field),
) -> Result<RunResult> {
    let (case, disc, field) = setup(config)?;
    let start = Instant::now();
    let solution = solve_observed(&disc, field, &config.solve, |r, f| {
        if let Some(k) = config.progress {
            if k > 0 && r.n % k < config.solve.iterator.updates_per_step() {
                eprintln!("{:>8} {:e}", r.n, r.res_a);
            }
        }
        observe(&disc, r, f);
    })?;
    let seconds = start.elapsed().as_secs_f64();
    let errors = case.exact.map(|e| density_errors(&disc, &solution.field, e));
    let summary = RunSummary {
        case: case.name.to_string(),
        nx: disc.grid.nx,
        ny: disc.grid.ny,
        label: config.label(),
        cfl: config.solve.cfl,
        iterations: solution.iterations(),
        final_time: solution.final_time(),
        res_a: solution.history.last().map_or(f64::NAN, |r| r.res_a),
        outcome: solution.outcome,
        seconds,
        errors,
        failure: solution.failure.as_ref().map(|e| e.to_string()),
    };
    Ok(RunResult {
        summary,
        disc,
        field: solution.field,
        history: solution.history,
    })
}

/// Solve and write the output bundle into `config.out` (if set).
pub fn run(config: &RunConfig) -> Result<(RunSummary, Option<OutputBundle>)> {
    let label = config.label();
    let mut dump_error = None;
    let result = execute(config, |disc, r, f| {
        let (Some(dir), Some(k)) = (&config.out, config.dump_every) else {
            return;
        };
        if k > 0 && r.n % k < config.solve.iterator.updates_per_step() && dump_error.is_none() {
            let meta = field_metadata(&config.case, disc, &label, config.solve.cfl, r.n, None);
            let path = dir.join(format!("field_{:08}.dat", r.n));
            if let Err(e) = fs::create_dir_all(dir).and_then(|_| write_field(&path, disc, f, None, &meta)) {
                dump_error = Some(e);
            }
        }
    })?;
    if let Some(e) = dump_error {
        return Err(e.into());
    }
    let Some(dir) = &config.out else {
        return Ok((result.summary, None));
    };
    fs::create_dir_all(dir)?;
    let bundle = write_bundle(dir, config, &result)?;
    Ok((result.summary, Some(bundle)))
}

fn field_metadata(
    case: &str,
    disc: &Discretization,
    label: &str,
    cfl: f64,
    iterations: usize,
    outcome: Option<Outcome>,
) -> Vec<(String, String)> {
    let mut meta = vec![
        ("case".to_string(), case.to_string()),
        ("grid".to_string(), format!("{}x{}", disc.grid.nx, disc.grid.ny)),
        ("scheme".to_string(), label.to_string()),
        ("cfl".to_string(), cfl.to_string()),
        ("iterations".to_string(), iterations.to_string()),
    ];
    if let Some(o) = outcome {
        meta.push(("outcome".to_string(), o.to_string()));
    }
    meta
}

fn write_bundle(dir: &Path, config: &RunConfig, result: &RunResult) -> Result<OutputBundle> {
    let s = &result.summary;
    let history = dir.join("history.dat");
    write_history(&history, &result.history)?;
    let meta = field_metadata(&s.case, &result.disc, &s.label, s.cfl, s.iterations, Some(s.outcome));
    let mask = (config.interp == InterpKind::HybridUs).then(|| result.disc.troubled_mask(&result.field));
    let field = dir.join("field.dat");
    write_field(&field, &result.disc, &result.field, mask.as_deref(), &meta)?;
    let troubled = match &mask {
        Some(m) => {
            let path = dir.join("troubled.dat");
            write_mask(&path, &result.disc, m, &meta)?;
            Some(path)
        }
        None => None,
    };
    let summary = dir.join("summary.txt");
    fs::write(&summary, s.to_text())?;
    Ok(OutputBundle {
        history,
        field,
        troubled,
        summary,
    })
}

pub fn write_history(path: &Path, history: &[IterationRecord]) -> std::io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "# iter resA dt t")?;
    for r in history {
        writeln!(w, "{} {:e} {:e} {:e}", r.n, r.res_a, r.dt, r.t)?;
    }
    w.flush()
}

/// Interior fluid points, `j` outer and `i` inner, with columns `x y rho u v p`
/// and an optional `troubled` flag.
pub fn write_field(
    path: &Path,
    disc: &Discretization,
    field: &Field,
    troubled: Option<&[bool]>,
    meta: &[(String, String)],
) -> std::io::Result<()> {
    let gas = &disc.scheme.gas;
    let mut w = BufWriter::new(fs::File::create(path)?);
    let header: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(w, "# {}", header.join(" "))?;
    write!(w, "# x y rho u v p")?;
    if troubled.is_some() {
        write!(w, " troubled")?;
    }
    writeln!(w)?;
    for (i, j) in disc.topology.fluid_points() {
        let s = field.get(i as isize, j as isize);
        let p = s.pressure(gas);
        write!(
            w,
            "{:e} {:e} {:e} {:e} {:e} {:e}",
            disc.grid.x(i as isize),
            disc.grid.y(j as isize),
            s.rho,
            s.mx / s.rho,
            s.my / s.rho,
            p
        )?;
        if let Some(t) = troubled {
            write!(w, " {}", u8::from(t[j * disc.grid.nx + i]))?;
        }
        writeln!(w)?;
    }
    w.flush()
}

fn write_mask(path: &Path, disc: &Discretization, mask: &[bool], meta: &[(String, String)]) -> std::io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    let header: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(w, "# {}", header.join(" "))?;
    writeln!(w, "# x y troubled")?;
    for (i, j) in disc.topology.fluid_points() {
        let t = u8::from(mask[j * disc.grid.nx + i]);
        writeln!(w, "{:e} {:e} {t}", disc.grid.x(i as isize), disc.grid.y(j as isize))?;
    }
    w.flush()
}

/// A parsed field or history file.
#[derive(Debug, Clone, PartialEq)]
pub struct DataFile {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DataFile {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Read a file written by [`write_field`] or [`write_history`].
pub fn read_data(path: &Path) -> Result<DataFile> {
    let text = fs::read_to_string(path)?;
    let mut headers = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(h) = line.strip_prefix('#') {
            headers.push(h.trim().to_string());
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        rows.push(row);
    }
    let columns: Vec<String> = headers
        .last()
        .map(|h| h.split_whitespace().map(String::from).collect())
        .unwrap_or_default();
    let meta = headers
        .iter()
        .take(headers.len().saturating_sub(1))
        .flat_map(|h| h.split_whitespace())
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    Ok(DataFile { meta, columns, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub n: usize,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub linf: f64,
    pub linf_order: Option<f64>,
    pub iterations: usize,
    pub outcome: Outcome,
    pub seconds: f64,
}

/// Density errors and successive orders on `N x N` grids.
pub fn accuracy_table(config: &RunConfig, grids: &[usize]) -> Result<Vec<AccuracyRow>> {
    let case = case_by_name(&config.case)?;
    if case.exact.is_none() {
        return Err(Error::MissingExactSolution(config.case.clone()));
    }
    let mut rows: Vec<AccuracyRow> = Vec::new();
    for &n in grids {
        let mut c = config.clone();
        c.grid = Some((n, n));
        let s = execute(&c, |_, _, _| {})?.summary;
        let (l1, linf) = s.errors.expect("case has an exact solution");
        let order = |prev: f64, cur: f64, pn: usize| (prev / cur).ln() / (n as f64 / pn as f64).ln();
        let (l1_order, linf_order) = match rows.last() {
            Some(p) => (Some(order(p.l1, l1, p.n)), Some(order(p.linf, linf, p.n))),
            None => (None, None),
        };
        rows.push(AccuracyRow {
            n,
            l1,
            l1_order,
            linf,
            linf_order,
            iterations: s.iterations,
            outcome: s.outcome,
            seconds: s.seconds,
        });
    }
    Ok(rows)
}

pub fn format_table(label: &str, rows: &[AccuracyRow]) -> String {
    let opt = |o: Option<f64>| o.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
    let mut s = format!("# {label}\n# N L1 order Linf order time_s iterations outcome\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{n}x{n} {:.2e} {} {:.2e} {} {:.2} {} {}",
            r.l1,
            opt(r.l1_order),
            r.linf,
            opt(r.linf_order),
            r.seconds,
            r.iterations,
            r.outcome.to_string().replace(' ', "-"),
            n = r.n
        );
    }
    s
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_CONVERGED });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::MissingExactSolution(_) => EXIT_USAGE,
                _ => EXIT_ERROR,
            })
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Solve(a) => {
            let mut config = RunConfig::from_args(&a.scheme);
            config.grid = a.grid;
            config.out = Some(a.out);
            config.dump_every = a.dump_every;
            config.progress = a.progress;
            let (summary, bundle) = run(&config)?;
            print!("{}", summary.to_text());
            if let Some(b) = bundle {
                println!("output = {}", b.summary.parent().unwrap_or(Path::new(".")).display());
            }
            Ok(exit_code(summary.outcome))
        }
        Command::Table(a) => {
            let config = RunConfig::from_args(&a.scheme);
            let rows = accuracy_table(&config, &a.grids)?;
            print!("{}", format_table(&format!("{} cfl={}", config.label(), config.solve.cfl), &rows));
            Ok(rows.iter().map(|r| exit_code(r.outcome)).max().unwrap_or(EXIT_CONVERGED))
        }
    }
}
