//! Command-line front end: every computation of the crate as a subcommand
//! emitting CSV or JSON data.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 numerical failure,
//! 3 validation failure.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::model::PhysParams;
use crate::oracle::{oracle_eigenvalues, oracle_scattering_phase, reduce_half_pi, ShootingConfig};
use crate::scattering::{log_energy_grid, phase_shift, phase_shift_curve};
use crate::spectrum::{find_spectrum, scan_spectral_function, spectral_numerator, SpectrumOptions};
use crate::states::{bound_wavefunction, zero_energy_solution};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "sqrtwell",
    version,
    about = "Exact solutions of the inverse-square-root singular exponential well"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Defaults to -V0 (well vanishing at infinity).
    #[arg(long, allow_hyphen_values = true)]
    v1: Option<f64>,
    /// TOML file with any of m, hbar, v0, sigma, v1; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Data file; without it the data goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Potential, its two asymptotes and the coordinate z on a uniform grid.
    Potential {
        #[command(flatten)]
        common: Common,
        /// Lower end in units of sigma.
        #[arg(long, default_value_t = 0.01)]
        x_min: f64,
        /// Upper end in units of sigma.
        #[arg(long, default_value_t = 10.0)]
        x_max: f64,
        #[arg(long, default_value_t = 500)]
        points: usize,
    },
    /// Bound-state energies with residuals, node counts and the Chadan bound.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also write samples of the spectral function S(E) to this file.
        #[arg(long)]
        scan: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        scan_points: usize,
    },
    /// Normalized bound-state wavefunctions on a uniform grid.
    Wavefunctions {
        #[command(flatten)]
        common: Common,
        /// Upper end in units of sigma.
        #[arg(long, default_value_t = 30.0)]
        x_max: f64,
        #[arg(long, default_value_t = 600)]
        points: usize,
    },
    /// Zero-energy solution and its zeros.
    ZeroEnergy {
        #[command(flatten)]
        common: Common,
        /// Upper end in units of sigma.
        #[arg(long, default_value_t = 40.0)]
        x_max: f64,
        #[arg(long, default_value_t = 800)]
        points: usize,
    },
    /// Phase shift on a logarithmic energy grid and its pi jumps.
    PhaseShift {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-3)]
        e_min: f64,
        /// Defaults to max(50, 10 V0).
        #[arg(long)]
        e_max: Option<f64>,
        #[arg(long, default_value_t = 600)]
        points: usize,
    },
    /// Compare analytic results with the shooting oracle.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Relative eigenvalue tolerance.
        #[arg(long, default_value_t = 1e-5)]
        eigen_tol: f64,
        /// Phase tolerance modulo pi.
        #[arg(long, default_value_t = 1e-4)]
        phase_tol: f64,
    },
}

#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    m: Option<f64>,
    hbar: Option<f64>,
    v0: Option<f64>,
    sigma: Option<f64>,
    v1: Option<f64>,
}

enum Failure {
    Usage(String),
    Numerical(Error),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(msg) => Failure::Usage(msg),
            other => Failure::Numerical(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Treats a closed downstream pipe as a normal end of output.
fn ignore_broken_pipe(r: std::io::Result<()>) -> std::io::Result<()> {
    match r {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

impl Common {
    fn params(&self) -> CliResult<PhysParams> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<ConfigFile>(&text)
                    .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let m = self.m.or(file.m).unwrap_or(1.0);
        let hbar = self.hbar.or(file.hbar).unwrap_or(1.0);
        let v0 = self.v0.or(file.v0).unwrap_or(4.0);
        let sigma = self.sigma.or(file.sigma).unwrap_or(2.0);
        let v1 = self.v1.or(file.v1).unwrap_or(-v0);
        Ok(PhysParams::with_v1(m, hbar, v0, sigma, v1)?)
    }
}

/// Rectangular numeric table with metadata, written as CSV or JSON.
struct Table {
    command: &'static str,
    params: PhysParams,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    /// Extra scalar or list results; CSV carries them as comment lines.
    extras: Vec<(String, Value)>,
}

/// Table cell; serializes as a number or `null`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
#[serde(untagged)]
enum Cell {
    Int(i64),
    Real(f64),
    Missing(Option<f64>),
}

impl Cell {
    fn opt(v: Option<f64>) -> Self {
        v.map(Cell::Real).unwrap_or(Cell::Missing(None))
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(v) => num(*v),
            Cell::Missing(_) => String::new(),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// `v` in fixed notation with `digits` significant digits.
fn significant(v: f64, digits: i32) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let decimals = (digits - 1 - v.abs().log10().floor() as i32).max(0) as usize;
    format!("{v:.decimals$}")
}

impl Table {
    fn new(command: &'static str, params: PhysParams, columns: &[&str]) -> Self {
        Table {
            command,
            params,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            extras: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    fn extra(&mut self, key: &str, value: Value) {
        self.extras.push((key.to_string(), value));
    }

    fn render(&self, format: Format) -> String {
        let p = &self.params;
        match format {
            Format::Csv => {
                let mut s = String::new();
                let _ = writeln!(
                    s,
                    "# sqrtwell {VERSION} {} m={} hbar={} v0={} sigma={} v1={}",
                    self.command,
                    num(p.m),
                    num(p.hbar),
                    num(p.v0),
                    num(p.sigma),
                    num(p.v1)
                );
                for (k, v) in &self.extras {
                    let text = match v {
                        Value::Array(items) => items
                            .iter()
                            .map(|i| match i {
                                Value::Number(n) if n.is_f64() => {
                                    n.as_f64().map(num).unwrap_or_default()
                                }
                                other => other.to_string(),
                            })
                            .collect::<Vec<_>>()
                            .join(";"),
                        Value::Number(n) if n.is_f64() => {
                            n.as_f64().map(num).unwrap_or_else(|| n.to_string())
                        }
                        other => other.to_string(),
                    };
                    let _ = writeln!(s, "# {k}={text}");
                }
                let _ = writeln!(s, "{}", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(s, "{}", cells.join(","));
                }
                s
            }
            Format::Json => {
                let mut extras = serde_json::Map::new();
                for (k, v) in &self.extras {
                    extras.insert(k.clone(), v.clone());
                }
                let doc = json!({
                    "tool": "sqrtwell",
                    "version": VERSION,
                    "command": self.command,
                    "params": self.params,
                    "columns": self.columns,
                    "rows": self.rows,
                    "results": extras,
                });
                let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

struct Output {
    data: Vec<(Option<PathBuf>, String)>,
    summary: String,
}

fn uniform(a: f64, b: f64, n: usize) -> CliResult<Vec<f64>> {
    if !(a > 0.0 && b > a) || n < 2 {
        return Err(Failure::Usage(format!(
            "need 0 < min < max and at least 2 points (got {a}, {b}, {n})"
        )));
    }
    Ok((0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect())
}

fn cmd_potential(c: &Common, x_min: f64, x_max: f64, points: usize) -> CliResult<Output> {
    let p = c.params()?;
    let xs = uniform(x_min * p.sigma, x_max * p.sigma, points)?;
    let mut t = Table::new("potential", p, &["x", "V", "near", "far", "z"]);
    for x in xs {
        let (near, far) = p.asymptotes(x)?;
        t.push(vec![
            Cell::Real(x),
            Cell::Real(p.potential(x)?),
            Cell::Real(near),
            Cell::Real(far),
            Cell::Real(p.coord_map(x)?),
        ]);
    }
    let summary = format!(
        "potential: {} samples on [{}, {}]\n",
        t.rows.len(),
        x_min * p.sigma,
        x_max * p.sigma
    );
    Ok(Output {
        data: vec![(c.out.clone(), t.render(c.format))],
        summary,
    })
}

fn cmd_spectrum(
    c: &Common,
    tol: f64,
    scan: &Option<PathBuf>,
    scan_points: usize,
) -> CliResult<Output> {
    let p = c.params()?;
    let opts = SpectrumOptions {
        tol,
        ..Default::default()
    };
    let r = find_spectrum(&p, &opts)?;
    let mut t = Table::new("spectrum", p, &["index", "E", "residual", "nodes"]);
    let mut summary = format!(
        "{} bound states (zero-energy count {}, Chadan bound {:.4})\n",
        r.levels.len(),
        r.exact_count,
        r.chadan_bound
    );
    for l in &r.levels {
        t.push(vec![
            Cell::Int(l.index as i64),
            Cell::Real(l.energy),
            Cell::Real(l.spectral_residual),
            Cell::Int(l.node_count as i64),
        ]);
        let _ = writeln!(summary, "  E_{} = {}", l.index, significant(l.energy, 10));
    }
    t.extra("chadan_bound", json!(r.chadan_bound));
    t.extra(
        "calogero_integral",
        json!(crate::spectrum::calogero_integral(&p)),
    );
    t.extra("exact_count", json!(r.exact_count));
    let mut data = vec![(c.out.clone(), t.render(c.format))];

    if let Some(path) = scan {
        let ground = r.levels.first().map(|l| l.energy).unwrap_or(-p.v0);
        let lo = 1.2 * ground;
        let hi = -1e-9 / p.energy_scale();
        let n = scan_points.max(2);
        let es: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let samples = scan_spectral_function(&p, &es)?;
        let mut s = Table::new("spectrum-scan", p, &["E", "S", "numerator"]);
        for smp in samples {
            s.push(vec![
                Cell::Real(smp.energy),
                Cell::opt(smp.value),
                Cell::opt(spectral_numerator(&p, smp.energy).ok()),
            ]);
        }
        s.extra(
            "roots",
            json!(r.levels.iter().map(|l| l.energy).collect::<Vec<_>>()),
        );
        data.push((Some(path.clone()), s.render(c.format)));
        let _ = writeln!(summary, "  S(E) scan: {n} samples on [{lo:.6}, {hi:.3e}]");
    }
    Ok(Output { data, summary })
}

fn cmd_wavefunctions(c: &Common, x_max: f64, points: usize) -> CliResult<Output> {
    let p = c.params()?;
    let r = find_spectrum(&p, &SpectrumOptions::default())?;
    let xs = uniform(x_max * p.sigma / points as f64, x_max * p.sigma, points)?;
    let tables = r
        .levels
        .iter()
        .map(|l| bound_wavefunction(&p, l, &xs))
        .collect::<Result<Vec<_>>>()?;
    let mut cols: Vec<String> = vec!["x".into(), "z".into()];
    cols.extend((0..tables.len()).map(|k| format!("psi_{k}")));
    let col_refs: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
    let mut t = Table::new("wavefunctions", p, &col_refs);
    for (i, &x) in xs.iter().enumerate() {
        let mut row = vec![Cell::Real(x), Cell::Real(p.coord_map(x)?)];
        row.extend(tables.iter().map(|tb| Cell::Real(tb.samples[i].psi)));
        t.push(row);
    }
    t.extra(
        "energies",
        json!(r.levels.iter().map(|l| l.energy).collect::<Vec<_>>()),
    );
    t.extra(
        "nodes",
        json!(tables.iter().map(|tb| tb.node_count()).collect::<Vec<_>>()),
    );
    let summary = format!(
        "{} normalized bound states on {} points\n",
        tables.len(),
        xs.len()
    );
    Ok(Output {
        data: vec![(c.out.clone(), t.render(c.format))],
        summary,
    })
}

fn cmd_zero_energy(c: &Common, x_max: f64, points: usize) -> CliResult<Output> {
    let p = c.params()?;
    let xs = uniform(x_max * p.sigma / points as f64, x_max * p.sigma, points)?;
    let table = zero_energy_solution(&p, &xs)?;
    let mut t = Table::new("zero-energy", p, &["x", "z", "psi"]);
    for s in &table.samples {
        t.push(vec![Cell::Real(s.x), Cell::Real(s.z), Cell::Real(s.psi)]);
    }
    t.extra("zeros", json!(table.nodes));
    let summary = format!(
        "zero-energy solution: {} zeros at {:?}\n",
        table.nodes.len(),
        table.nodes
    );
    Ok(Output {
        data: vec![(c.out.clone(), t.render(c.format))],
        summary,
    })
}

fn cmd_phase_shift(c: &Common, e_min: f64, e_max: Option<f64>, points: usize) -> CliResult<Output> {
    let p = c.params()?;
    let e_max = e_max.unwrap_or((10.0 * p.v0).max(50.0));
    if !(e_min > 0.0 && e_max > e_min) || points < 2 {
        return Err(Failure::Usage(
            "need 0 < e-min < e-max and at least 2 points".into(),
        ));
    }
    let curve = phase_shift_curve(&p, &log_energy_grid(e_min, e_max, points))?;
    let mut t = Table::new(
        "phase-shift",
        p,
        &["E", "k", "k_scaled", "delta", "standard_delta", "unwrapped"],
    );
    for (pt, u) in curve.points.iter().zip(&curve.unwrapped) {
        t.push(vec![
            Cell::Real(pt.energy),
            Cell::Real(pt.k),
            Cell::Real(pt.k_scaled),
            Cell::Real(pt.delta),
            Cell::Real(pt.standard_phase()),
            Cell::Real(*u),
        ]);
    }
    t.extra("jumps", json!(curve.jumps));
    let summary = format!(
        "phase shift: {} jumps at {:?}\n",
        curve.jumps.len(),
        curve.jumps
    );
    Ok(Output {
        data: vec![(c.out.clone(), t.render(c.format))],
        summary,
    })
}

fn cmd_validate(c: &Common, eigen_tol: f64, phase_tol: f64) -> CliResult<(Output, bool)> {
    let p = c.params()?;
    let r = find_spectrum(&p, &SpectrumOptions::default())?;
    let cfg = ShootingConfig::for_params(&p);
    let oracle = oracle_eigenvalues(&p, &cfg)?;
    let mut ok = oracle.len() == r.levels.len();
    let mut t = Table::new(
        "validate",
        p,
        &["index", "E_analytic", "E_oracle", "rel_dev"],
    );
    let mut worst = 0.0f64;
    for (l, o) in r.levels.iter().zip(&oracle) {
        let dev = ((l.energy - o) / l.energy).abs();
        worst = worst.max(dev);
        t.push(vec![
            Cell::Int(l.index as i64),
            Cell::Real(l.energy),
            Cell::Real(*o),
            Cell::Real(dev),
        ]);
    }
    ok &= worst <= eigen_tol;
    let mut worst_phase = 0.0f64;
    for e in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let a = phase_shift(&p, e)?.standard_phase();
        let o = oracle_scattering_phase(&p, e, &cfg)?;
        worst_phase = worst_phase.max(reduce_half_pi(a - o).abs());
    }
    ok &= worst_phase <= phase_tol;
    t.extra("analytic_count", json!(r.levels.len()));
    t.extra("oracle_count", json!(oracle.len()));
    t.extra("max_eigen_rel_dev", json!(worst));
    t.extra("max_phase_dev", json!(worst_phase));
    t.extra("passed", json!(ok));
    let summary = format!(
        "validate: {} levels (oracle {}), max eigenvalue deviation {worst:.2e}, max phase deviation {worst_phase:.2e}: {}\n",
        r.levels.len(),
        oracle.len(),
        if ok { "PASS" } else { "FAIL" }
    );
    Ok((
        Output {
            data: vec![(c.out.clone(), t.render(c.format))],
            summary,
        },
        ok,
    ))
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("SQRTWELL_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "SQRTWELL_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        if n == 0 {
            return Err(Failure::Usage("SQRTWELL_THREADS must be positive".into()));
        }
        // a pool may already exist when embedded; keep it then
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn emit(out: &Output) -> CliResult<()> {
    let mut stdout = std::io::stdout().lock();
    let mut to_file = false;
    for (path, text) in &out.data {
        match path {
            Some(p) => {
                std::fs::write(p, text)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
                to_file = true;
            }
            None => ignore_broken_pipe(stdout.write_all(text.as_bytes()))?,
        }
    }
    if out.data.iter().all(|(p, _)| p.is_some()) && to_file {
        ignore_broken_pipe(stdout.write_all(out.summary.as_bytes()))?;
    } else {
        eprint!("{}", out.summary);
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<bool> {
    configure_threads()?;
    let (out, ok) = match &cli.command {
        Command::Potential {
            common,
            x_min,
            x_max,
            points,
        } => (cmd_potential(common, *x_min, *x_max, *points)?, true),
        Command::Spectrum {
            common,
            tol,
            scan,
            scan_points,
        } => (cmd_spectrum(common, *tol, scan, *scan_points)?, true),
        Command::Wavefunctions {
            common,
            x_max,
            points,
        } => (cmd_wavefunctions(common, *x_max, *points)?, true),
        Command::ZeroEnergy {
            common,
            x_max,
            points,
        } => (cmd_zero_energy(common, *x_max, *points)?, true),
        Command::PhaseShift {
            common,
            e_min,
            e_max,
            points,
        } => (cmd_phase_shift(common, *e_min, *e_max, *points)?, true),
        Command::Validate {
            common,
            eigen_tol,
            phase_tol,
        } => cmd_validate(common, *eigen_tol, *phase_tol)?,
    };
    emit(&out)?;
    if !ok {
        return Err(Failure::Validation(
            "analytic and oracle results disagree".into(),
        ));
    }
    Ok(true)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(_) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            eprintln!("diagnostics: {e:?}");
            EXIT_NUMERICAL
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("validation failed: {msg}");
            EXIT_VALIDATION
        }
    }
}
