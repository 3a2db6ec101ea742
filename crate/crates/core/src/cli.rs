//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on I/O failure, 2 on invalid input,
//! 3 when a result fails a numerical-quality check.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::engine::Evaluator;
use crate::error::{Error, Result};
use crate::gridscan::{benchmark, evaluate_grid_with, BenchmarkReport, GridAxis, GridSpec};
use crate::hankelbowman::evaluate_hb_with;
use crate::oracle::quadrature_eval;
use crate::paramdiff::evaluate_weighted_with;
use crate::types::{rel_diff, Damping, DampingKind, Diagnostics, EvalResult, Method, RadiiTriple, WeightedIntegralSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Relative agreement `compare` demands of each analytic method against
/// quadrature, on top of the quadrature's own error estimate.
pub const COMPARE_AGREEMENT: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "trisbf", version, about = "Damped triple spherical Bessel integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one integral.
    Eval(EvalArgs),
    /// Evaluate over a grid of radii and write the tensor.
    Grid(GridArgs),
    /// Run several methods plus quadrature and report their differences.
    Compare(CompareArgs),
    /// Time the grid, pointwise and quadrature paths.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum DampingArg {
    Exp,
    Gauss,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Recursion,
    HankelBowman,
    Quadrature,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Common {
    /// Orders l1,l2,l3.
    #[arg(long, value_parser = parse_ell)]
    ell: [i32; 3],
    #[arg(long, value_enum)]
    damping: DampingArg,
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    /// Power of k in the integrand.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "TRISBF_THREADS")]
    threads: Option<usize>,
    /// Write wall_ms as null so repeated runs give byte-identical files.
    #[arg(long)]
    omit_timing: bool,
}

#[derive(Args, Debug)]
struct Axes {
    /// START:STOP:COUNT used for all three radii.
    #[arg(long, value_parser = parse_axis, conflicts_with_all = ["r1", "r2", "r3"])]
    axis: Option<GridAxis>,
    #[arg(long, value_parser = parse_axis, requires_all = ["r2", "r3"])]
    r1: Option<GridAxis>,
    #[arg(long, value_parser = parse_axis, requires_all = ["r1", "r3"])]
    r2: Option<GridAxis>,
    #[arg(long, value_parser = parse_axis, requires_all = ["r1", "r2"])]
    r3: Option<GridAxis>,
}

impl Axes {
    fn get(&self) -> Option<[GridAxis; 3]> {
        match (self.axis, self.r1, self.r2, self.r3) {
            (Some(a), ..) => Some([a; 3]),
            (None, Some(a), Some(b), Some(c)) => Some([a, b, c]),
            _ => None,
        }
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    /// Radii r1,r2,r3.
    #[arg(long, value_parser = parse_radii)]
    r: [f64; 3],
    /// Route; picked from damping and power when absent.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    axes: Axes,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    /// A single point; alternatively give grid axes.
    #[arg(long, value_parser = parse_radii)]
    r: Option<[f64; 3]>,
    #[command(flatten)]
    axes: Axes,
    #[arg(long, value_enum, default_value = "all")]
    method: MethodArg,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    axes: Axes,
    #[arg(long, default_value_t = 3)]
    reps: usize,
}

fn split3<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<[T; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("{what} needs three comma-separated values, got {s:?}"));
    }
    let mut out = Vec::with_capacity(3);
    for p in parts {
        out.push(p.parse::<T>().map_err(|_| format!("cannot parse {p:?} in {what}"))?);
    }
    out.try_into().map_err(|_| unreachable!())
}

fn parse_ell(s: &str) -> std::result::Result<[i32; 3], String> {
    split3(s, "--ell")
}

fn parse_radii(s: &str) -> std::result::Result<[f64; 3], String> {
    split3(s, "radii")
}

fn parse_axis(s: &str) -> std::result::Result<GridAxis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("axis must be START:STOP:COUNT, got {s:?}"));
    }
    let f = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("cannot parse {t:?} in axis"));
    let count = parts[2].trim().parse::<usize>().map_err(|_| format!("bad count {:?}", parts[2]))?;
    Ok(GridAxis::new(f(parts[0])?, f(parts[1])?, count))
}

/// One output row. `error_estimate` is only reported for quadrature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub ell: [i32; 3],
    pub r: [f64; 3],
    pub damping: String,
    pub p: f64,
    pub n: u32,
    pub method: String,
    pub value: f64,
    pub im_residual: f64,
    pub error_estimate: Option<f64>,
    pub kernel_calls: u64,
    pub wall_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_diff_vs_oracle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

/// Pairwise relative difference reported by `compare`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub point: usize,
    pub a: String,
    pub b: String,
    pub rel_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub results: Vec<Row>,
    pub pairwise: Vec<Pair>,
    /// Analytic rows that missed the oracle beyond the combined tolerance.
    pub deviations: usize,
}

pub const CSV_COLUMNS: [&str; 12] = [
    "ell",
    "r",
    "damping",
    "p",
    "n",
    "method",
    "value",
    "im_residual",
    "error_estimate",
    "kernel_calls",
    "wall_ms",
    "rel_diff_vs_oracle",
];

/// 17 significant digits, enough to round-trip any double.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn join<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(",")
}

/// Rows as CSV with a header; fields containing commas are quoted.
pub fn rows_to_csv(rows: &[Row]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(io)?;
    let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
    for r in rows {
        w.write_record([
            join(&r.ell, |l| l.to_string()),
            join(&r.r, |x| fmt17(*x)),
            r.damping.clone(),
            fmt17(r.p),
            r.n.to_string(),
            r.method.clone(),
            fmt17(r.value),
            fmt17(r.im_residual),
            opt(r.error_estimate),
            r.kernel_calls.to_string(),
            opt(r.wall_ms),
            opt(r.rel_diff_vs_oracle),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

/// Reads back what [`rows_to_csv`] wrote (diagnostics are not part of
/// the CSV form).
pub fn rows_from_csv(data: &[u8]) -> Result<Vec<Row>> {
    let mut rd = csv::Reader::from_reader(data);
    let bad = |what: &str| Error::Io(format!("malformed CSV field {what}"));
    let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| bad(what));
    let opt = |s: &str, what: &str| if s.is_empty() { Ok(None) } else { num(s, what).map(Some) };
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
        if rec.len() != CSV_COLUMNS.len() {
            return Err(bad("count"));
        }
        out.push(Row {
            ell: split3(&rec[0], "ell").map_err(|_| bad("ell"))?,
            r: split3(&rec[1], "r").map_err(|_| bad("r"))?,
            damping: rec[2].to_string(),
            p: num(&rec[3], "p")?,
            n: rec[4].parse().map_err(|_| bad("n"))?,
            method: rec[5].to_string(),
            value: num(&rec[6], "value")?,
            im_residual: num(&rec[7], "im_residual")?,
            error_estimate: opt(&rec[8], "error_estimate")?,
            kernel_calls: rec[9].parse().map_err(|_| bad("kernel_calls"))?,
            wall_ms: opt(&rec[10], "wall_ms")?,
            rel_diff_vs_oracle: opt(&rec[11], "rel_diff_vs_oracle")?,
            diagnostics: None,
        });
    }
    Ok(out)
}

/// Failure that still carries output worth emitting.
struct Outcome {
    bytes: Vec<u8>,
    status: i32,
    message: Option<String>,
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_INVALID,
    }
}

fn spec_of(c: &Common, r: [f64; 3]) -> WeightedIntegralSpec {
    let damping = match c.damping {
        DampingArg::Exp => Damping::Exp(c.p),
        DampingArg::Gauss => Damping::Gauss(c.p),
    };
    WeightedIntegralSpec::new(c.ell, RadiiTriple::from_array(r), damping, c.n)
}

fn check_common(c: &Common) -> Result<()> {
    if !(1e-12..=1e-4).contains(&c.tol) {
        return Err(Error::Domain(format!("--tol {:e} outside the accepted range [1e-12, 1e-4]", c.tol)));
    }
    if c.p == 0.0 || !c.p.is_finite() {
        return Err(Error::Domain(format!("--p {} invalid: the damping parameter requires p != 0", c.p)));
    }
    if c.threads == Some(0) {
        return Err(Error::Domain("--threads must be >= 1".into()));
    }
    Ok(())
}

fn gauss_needs_nested_sums(spec: &WeightedIntegralSpec) -> bool {
    spec.damping.kind() == DampingKind::Gauss && (spec.n < 2 || spec.n % 2 == 1)
}

fn row(spec: &WeightedIntegralSpec, res: &EvalResult, wall_ms: Option<f64>) -> Row {
    Row {
        ell: spec.orders,
        r: spec.radii.as_array(),
        damping: spec.damping.kind().label().into(),
        p: spec.damping.p(),
        n: spec.n,
        method: res.method.label().into(),
        value: res.value,
        im_residual: res.im_residual,
        error_estimate: (res.method == Method::Quadrature).then_some(res.error_estimate),
        kernel_calls: res.diagnostics.kernel_calls,
        wall_ms,
        rel_diff_vs_oracle: None,
        diagnostics: None,
    }
}

/// Quadrature as an [`EvalResult`]; an unreachable tolerance still yields
/// the best estimate, flagged.
fn quadrature_result(spec: &WeightedIntegralSpec, tol: f64) -> Result<EvalResult> {
    let mut diagnostics = Diagnostics { precision: "double".into(), ..Diagnostics::default() };
    let (value, err) = match quadrature_eval(spec, tol) {
        Ok(q) => (q.value, q.error_estimate),
        Err(Error::ToleranceUnreachable { achieved, value, .. }) => {
            diagnostics.flags.push(format!("tolerance-unreachable: achieved {achieved:e}"));
            (value, achieved * value.abs())
        }
        Err(e) => return Err(e),
    };
    Ok(EvalResult { value, method: Method::Quadrature, im_residual: 0.0, error_estimate: err, diagnostics })
}

fn run_method(ev: &Evaluator, m: MethodArg, spec: &WeightedIntegralSpec, tol: f64) -> Result<EvalResult> {
    match m {
        MethodArg::Recursion => evaluate_weighted_with(ev, spec),
        MethodArg::HankelBowman => evaluate_hb_with(ev, spec),
        MethodArg::Quadrature => quadrature_result(spec, tol),
        MethodArg::All => unreachable!(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64() * 1e3)
}

fn encode_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut b = serde_json::to_vec_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    b.push(b'\n');
    Ok(b)
}

fn encode_rows(rows: &[Row], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => encode_json(&rows),
        Format::Csv => rows_to_csv(rows),
    }
}

fn quality_message(rows: &[Row], results: &[EvalResult]) -> Option<String> {
    results.iter().zip(rows).find(|(r, _)| r.is_flagged()).map(|(r, row)| {
        format!("{} at r = {:?}: {}", row.method, row.r, r.diagnostics.flags.join("; "))
    })
}

fn cmd_eval(a: &EvalArgs) -> Result<Outcome> {
    let c = &a.common;
    check_common(c)?;
    let spec = spec_of(c, a.r);
    spec.validate()?;
    let method = match a.method {
        Some(MethodArg::All) => {
            return Err(Error::Domain("eval takes a single method; use compare for --method all".into()))
        }
        Some(m) => m,
        None if gauss_needs_nested_sums(&spec) => MethodArg::HankelBowman,
        None => MethodArg::Recursion,
    };
    let ev = Evaluator::default();
    let (res, ms) = timed(|| run_method(&ev, method, &spec, c.tol));
    let res = res?;
    let mut r = row(&spec, &res, (!c.omit_timing).then_some(ms));
    r.diagnostics = Some(res.diagnostics.clone());
    let message = quality_message(std::slice::from_ref(&r), std::slice::from_ref(&res));
    Ok(Outcome {
        bytes: match c.format {
            Format::Json => encode_json(&r)?,
            Format::Csv => rows_to_csv(&[r])?,
        },
        status: if message.is_some() { EXIT_NUMERICAL } else { EXIT_OK },
        message,
    })
}

fn grid_of(c: &Common, axes: &Axes) -> Result<GridSpec> {
    let axes = axes.get().ok_or_else(|| Error::Domain("grid axes required: --axis or --r1/--r2/--r3".into()))?;
    let g = GridSpec::new(axes, c.ell, spec_of(c, [1.0; 3]).damping, c.n);
    g.validate()?;
    Ok(g)
}

fn cmd_grid(a: &GridArgs) -> Result<Outcome> {
    let c = &a.common;
    check_common(c)?;
    let g = grid_of(c, &a.axes)?;
    g.spec_at(RadiiTriple::from_array([1.0; 3])).validate()?;
    let ev = Evaluator::default();
    let (out, ms) = timed(|| evaluate_grid_with(&ev, &g, c.threads));
    let out = out?;
    let wall = (!c.omit_timing).then_some(ms);
    let rows: Vec<Row> = g
        .points()
        .iter()
        .zip(&out.results)
        .map(|(r, res)| row(&g.spec_at(*r), res, wall))
        .collect();
    let message = quality_message(&rows, &out.results);
    Ok(Outcome {
        bytes: encode_rows(&rows, c.format)?,
        status: if message.is_some() { EXIT_NUMERICAL } else { EXIT_OK },
        message,
    })
}

fn cmd_compare(a: &CompareArgs) -> Result<Outcome> {
    let c = &a.common;
    check_common(c)?;
    let points: Vec<RadiiTriple> = match (a.r, a.axes.get()) {
        (Some(_), Some(_)) => return Err(Error::Domain("give either --r or grid axes, not both".into())),
        (Some(r), None) => vec![RadiiTriple::from_array(r)],
        (None, Some(_)) => grid_of(c, &a.axes)?.points(),
        (None, None) => return Err(Error::Domain("compare needs --r or grid axes".into())),
    };
    let probe = spec_of(c, points[0].as_array());
    probe.validate()?;
    let gauss = probe.damping.kind() == DampingKind::Gauss;
    let methods: Vec<MethodArg> = match a.method {
        MethodArg::All => {
            let mut m = Vec::new();
            if !gauss_needs_nested_sums(&probe) {
                m.push(MethodArg::Recursion);
            }
            if gauss {
                m.push(MethodArg::HankelBowman);
            }
            m
        }
        MethodArg::Quadrature => Vec::new(),
        m => vec![m],
    };

    let ev = Evaluator::default();
    let mut rows = Vec::new();
    let mut pairwise = Vec::new();
    let mut deviations = 0;
    let mut message = None;
    for (i, r) in points.iter().enumerate() {
        let spec = spec_of(c, r.as_array());
        let (oracle, ms) = timed(|| quadrature_result(&spec, c.tol));
        let oracle = oracle?;
        if oracle.is_flagged() && message.is_none() {
            message = Some(format!("quadrature at r = {:?}: {}", r.as_array(), oracle.diagnostics.flags.join("; ")));
        }
        let mut point_rows = Vec::new();
        for &m in &methods {
            let (res, ms) = timed(|| run_method(&ev, m, &spec, c.tol));
            let res = res?;
            let mut row = row(&spec, &res, (!c.omit_timing).then_some(ms));
            let d = rel_diff(res.value, oracle.value);
            row.rel_diff_vs_oracle = Some(d);
            let allowed = COMPARE_AGREEMENT * oracle.value.abs() + oracle.error_estimate;
            if (res.value - oracle.value).abs() > allowed || res.is_flagged() {
                deviations += 1;
                if message.is_none() {
                    message = Some(format!(
                        "{} deviates from quadrature at r = {:?}: rel diff {d:e}",
                        row.method,
                        r.as_array()
                    ));
                }
            }
            point_rows.push(row);
        }
        point_rows.push(row(&spec, &oracle, (!c.omit_timing).then_some(ms)));
        for x in 0..point_rows.len() {
            for y in x + 1..point_rows.len() {
                pairwise.push(Pair {
                    point: i,
                    a: point_rows[x].method.clone(),
                    b: point_rows[y].method.clone(),
                    rel_diff: rel_diff(point_rows[x].value, point_rows[y].value),
                });
            }
        }
        rows.extend(point_rows);
    }
    let bytes = match c.format {
        Format::Json => encode_json(&CompareReport { results: rows, pairwise, deviations })?,
        Format::Csv => rows_to_csv(&rows)?,
    };
    let status = if message.is_some() { EXIT_NUMERICAL } else { EXIT_OK };
    Ok(Outcome { bytes, status, message })
}

fn bench_csv(r: &BenchmarkReport) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["path", "shape", "table_size", "wall_ms", "kernel_calls", "points_evaluated", "max_rel_diff"])
        .map_err(io)?;
    let shape = join(&r.shape, |x| x.to_string());
    for (name, t) in [("grid", &r.grid), ("pointwise", &r.pointwise), ("quadrature", &r.oracle)] {
        w.write_record([
            name.to_string(),
            shape.clone(),
            r.table_size.to_string(),
            fmt17(t.wall_ms),
            t.kernel_calls.to_string(),
            t.points_evaluated.to_string(),
            fmt17(r.max_rel_diff),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn cmd_bench(a: &BenchArgs) -> Result<Outcome> {
    let c = &a.common;
    check_common(c)?;
    let g = grid_of(c, &a.axes)?;
    g.spec_at(RadiiTriple::from_array([1.0; 3])).validate()?;
    let rep = benchmark(&g, a.reps)?;
    let message = (rep.max_rel_diff > 1e-12)
        .then(|| format!("grid and pointwise paths differ by {:e}", rep.max_rel_diff));
    Ok(Outcome {
        bytes: match c.format {
            Format::Json => encode_json(&rep)?,
            Format::Csv => bench_csv(&rep)?,
        },
        status: if message.is_some() { EXIT_NUMERICAL } else { EXIT_OK },
        message,
    })
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Eval(a) => &a.common,
        Command::Grid(a) => &a.common,
        Command::Compare(a) => &a.common,
        Command::Bench(a) => &a.common,
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    let go = || match cmd {
        Command::Eval(a) => cmd_eval(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match common(cmd).threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(go),
        _ => go(),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns
/// the exit status. Results go to `--out` or `stdout`, messages to
/// `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_INVALID };
        }
    };
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_for(&e);
        }
    };
    let written = match &common(&cli.command).out {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(&outcome.bytes))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(&outcome.bytes).map_err(|e| format!("cannot write to stdout: {e}")),
    };
    if let Err(m) = written {
        let _ = writeln!(stderr, "error: {m}");
        return EXIT_IO;
    }
    if let Some(m) = outcome.message {
        let _ = writeln!(stderr, "numerical quality: {m}");
    }
    outcome.status
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock())
}
