//! Batch evaluation over regular 3-D radius grids.
//!
//! Every special-function argument depends on the radii only through a
//! few signed combinations: `±r1 ± r2 ± r3` for Gaussian damping and
//! `(±r2 ± r3 - i p^2)/r1` for exponential damping. Grid points share one
//! [`Evaluator`], so each distinct argument is computed once and every
//! later point reuses the cached tables and base cases.
//!
//! Equal combinations must be bit-identical for the caches to hit. Axis
//! values are therefore placed on a dyadic lattice (start and step
//! rounded to a multiple of `2^-e`), on which every signed sum of three
//! radii is exact.

use std::time::Instant;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::Evaluator;
use crate::error::{Error, Result};
use crate::hankelbowman::evaluate_hb_with;
use crate::oracle::quadrature_eval;
use crate::paramdiff::evaluate_weighted_with;
use crate::types::{rel_diff, Damping, DampingKind, EvalResult, OrderTriple, RadiiTriple, WeightedIntegralSpec};

/// `count` evenly spaced values from `start` to `stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        GridAxis { start, stop, count }
    }

    fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(Error::Domain("grid axis count must be >= 1".into()));
        }
        if !(self.start > 0.0 && self.stop > 0.0) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Domain(format!("grid axis [{}, {}] must contain positive finite radii", self.start, self.stop)));
        }
        Ok(())
    }

    fn values(&self, scale: f64) -> Vec<f64> {
        let snap = |x: f64| (x * scale).round() / scale;
        let start = snap(self.start);
        if self.count == 1 {
            return vec![start];
        }
        let step = snap((self.stop - self.start) / (self.count - 1) as f64);
        (0..self.count).map(|k| start + k as f64 * step).collect()
    }
}

/// A regular grid of radius triples with one order triple and weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: [GridAxis; 3],
    pub orders: OrderTriple,
    pub damping: Damping,
    pub n: u32,
}

impl GridSpec {
    pub fn new(axes: [GridAxis; 3], orders: OrderTriple, damping: Damping, n: u32) -> Self {
        GridSpec { axes, orders, damping, n }
    }

    /// Same axis on all three radii.
    pub fn cube(axis: GridAxis, orders: OrderTriple, damping: Damping, n: u32) -> Self {
        Self::new([axis; 3], orders, damping, n)
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.axes {
            a.validate()?;
        }
        self.damping.canonical()?;
        Ok(())
    }

    pub fn shape(&self) -> [usize; 3] {
        self.axes.map(|a| a.count)
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `2^e` with the largest `e <= 40` keeping sums of three radii
    /// below `2^51` lattice units.
    fn lattice_scale(&self) -> f64 {
        let top = self.axes.iter().map(|a| a.start.abs().max(a.stop.abs())).fold(0.0, f64::max);
        let e = (51.0 - (3.0 * top).log2().ceil()).clamp(0.0, 40.0);
        2f64.powi(e as i32)
    }

    /// Radius values actually used on each axis.
    pub fn axis_values(&self) -> [Vec<f64>; 3] {
        let s = self.lattice_scale();
        [self.axes[0].values(s), self.axes[1].values(s), self.axes[2].values(s)]
    }

    /// Grid points in row-major order, `r1` outermost.
    pub fn points(&self) -> Vec<RadiiTriple> {
        let [a, b, c] = self.axis_values();
        let mut out = Vec::with_capacity(self.len());
        for r1 in &a {
            for r2 in &b {
                for r3 in &c {
                    out.push(RadiiTriple::from_array([*r1, *r2, *r3]));
                }
            }
        }
        out
    }

    pub fn spec_at(&self, radii: RadiiTriple) -> WeightedIntegralSpec {
        WeightedIntegralSpec::new(self.orders, radii, self.damping, self.n)
    }
}

/// Distinct special-function arguments of a grid, with one table index
/// per grid point and sign combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArgumentTable {
    pub kind: DampingKind,
    /// Sorted by real then imaginary part; purely real for Gaussian damping.
    pub values: Vec<Complex<f64>>,
    /// Per grid point: 8 entries `(s1, s2, s3)` for Gaussian damping, 4
    /// entries `(s2, s3)` for exponential damping, signs `+` first.
    pub refs: Vec<Vec<usize>>,
}

impl ArgumentTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

const SIGNS2: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

fn point_arguments(kind: DampingKind, p: f64, r: &RadiiTriple) -> Vec<Complex<f64>> {
    match kind {
        DampingKind::Gauss => {
            let mut v = Vec::with_capacity(8);
            for s1 in [1.0, -1.0] {
                for (s2, s3) in SIGNS2 {
                    v.push(Complex::new(s1 * r.r1 + s2 * r.r2 + s3 * r.r3, 0.0));
                }
            }
            v
        }
        DampingKind::Exp => SIGNS2
            .iter()
            .map(|(s2, s3)| Complex::new((s2 * r.r2 + s3 * r.r3) / r.r1, -(p * p) / r.r1))
            .collect(),
    }
}

fn cmp_c(a: &Complex<f64>, b: &Complex<f64>) -> std::cmp::Ordering {
    // +0 and -0 are one argument
    let z = |x: f64| if x == 0.0 { 0.0 } else { x };
    z(a.re).total_cmp(&z(b.re)).then(z(a.im).total_cmp(&z(b.im)))
}

/// Unique arguments needed by every point of `grid`.
pub fn collect_arguments(grid: &GridSpec) -> Result<ArgumentTable> {
    grid.validate()?;
    let kind = grid.damping.kind();
    let p = grid.damping.canonical()?.p();
    let per_point: Vec<Vec<Complex<f64>>> = grid.points().iter().map(|r| point_arguments(kind, p, r)).collect();
    let mut values: Vec<Complex<f64>> = per_point.iter().flatten().copied().collect();
    values.sort_by(cmp_c);
    values.dedup_by(|a, b| cmp_c(a, b).is_eq());
    let refs = per_point
        .iter()
        .map(|args| args.iter().map(|a| values.binary_search_by(|v| cmp_c(v, a)).expect("argument present")).collect())
        .collect();
    Ok(ArgumentTable { kind, values, refs })
}

/// Values over a grid, row-major with `r1` outermost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub shape: [usize; 3],
    pub axes: [Vec<f64>; 3],
    pub values: Vec<f64>,
    pub results: Vec<EvalResult>,
    /// Kernel tables computed for the whole grid.
    pub kernel_calls: u64,
}

impl GridResult {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let [_, n2, n3] = self.shape;
        self.values[(i * n2 + j) * n3 + k]
    }
}

/// One point on the route that supports its damping and power.
pub fn evaluate_point(ev: &Evaluator, spec: &WeightedIntegralSpec) -> Result<EvalResult> {
    let gauss_odd_or_low = spec.damping.kind() == DampingKind::Gauss && (spec.n < 2 || spec.n % 2 == 1);
    if gauss_odd_or_low {
        evaluate_hb_with(ev, spec)
    } else {
        evaluate_weighted_with(ev, spec)
    }
}

fn run_points<F>(points: &[RadiiTriple], threads: Option<usize>, f: F) -> Result<Vec<EvalResult>>
where
    F: Fn(&RadiiTriple) -> Result<EvalResult> + Sync,
{
    let go = || points.par_iter().map(&f).collect::<Vec<_>>();
    let out = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    };
    // first failure in grid order, independent of scheduling
    out.into_iter().collect()
}

/// Grid path: all points share the caches of `ev`.
pub fn evaluate_grid_with(ev: &Evaluator, grid: &GridSpec, threads: Option<usize>) -> Result<GridResult> {
    grid.validate()?;
    let points = grid.points();
    let before = ev.kernels.calls();
    let results = run_points(&points, threads, |r| evaluate_point(ev, &grid.spec_at(*r)))?;
    // the nested-sum route keeps no shared tables; count its own calls
    let shared = ev.kernels.calls() - before;
    let own: u64 = if shared == 0 { results.iter().map(|r| r.diagnostics.kernel_calls).sum() } else { 0 };
    Ok(GridResult {
        shape: grid.shape(),
        axes: grid.axis_values(),
        values: results.iter().map(|r| r.value).collect(),
        results,
        kernel_calls: shared + own,
    })
}

/// [`evaluate_grid_with`] on a fresh default evaluator, so the kernel
/// count covers exactly this grid.
pub fn evaluate_grid(grid: &GridSpec) -> Result<GridResult> {
    evaluate_grid_with(&Evaluator::default(), grid, None)
}

/// Pointwise path: every point gets its own evaluator and recomputes
/// every kernel it needs.
pub fn evaluate_pointwise_with(template: &Evaluator, grid: &GridSpec, threads: Option<usize>) -> Result<GridResult> {
    grid.validate()?;
    let points = grid.points();
    let results = run_points(&points, threads, |r| {
        let ev = Evaluator::new(template.policy.clone(), template.config.clone());
        evaluate_point(&ev, &grid.spec_at(*r))
    })?;
    Ok(GridResult {
        shape: grid.shape(),
        axes: grid.axis_values(),
        values: results.iter().map(|r| r.value).collect(),
        kernel_calls: results.iter().map(|r| r.diagnostics.kernel_calls).sum(),
        results,
    })
}

pub fn evaluate_pointwise(grid: &GridSpec) -> Result<GridResult> {
    evaluate_pointwise_with(&Evaluator::default(), grid, None)
}

/// Wall time and kernel work of one evaluation path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathTiming {
    /// Best wall time over the repetitions, for the whole grid.
    pub wall_ms: f64,
    pub kernel_calls: u64,
    /// Points actually evaluated; fewer than the grid when sampled.
    pub points_evaluated: usize,
}

/// Output of [`benchmark`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub shape: [usize; 3],
    pub table_size: usize,
    pub grid: PathTiming,
    pub pointwise: PathTiming,
    /// Quadrature on a sample of points, wall time extrapolated to the
    /// full grid.
    pub oracle: PathTiming,
    /// Largest relative difference between grid and pointwise values.
    pub max_rel_diff: f64,
}

const ORACLE_SAMPLE: usize = 4;

/// Times the grid, pointwise and quadrature paths on `grid`.
pub fn benchmark(grid: &GridSpec, repetitions: usize) -> Result<BenchmarkReport> {
    if repetitions < 1 {
        return Err(Error::Domain("repetitions must be >= 1".into()));
    }
    let table = collect_arguments(grid)?;
    let points = grid.points();
    let mut best = [f64::INFINITY; 3];
    let mut last: Option<(GridResult, GridResult)> = None;
    let mut oracle_points = 0;
    for _ in 0..repetitions {
        let t = Instant::now();
        let g = evaluate_grid(grid)?;
        best[0] = best[0].min(t.elapsed().as_secs_f64() * 1e3);
        let t = Instant::now();
        let pw = evaluate_pointwise(grid)?;
        best[1] = best[1].min(t.elapsed().as_secs_f64() * 1e3);

        let stride = (points.len() / ORACLE_SAMPLE).max(1);
        let sample: Vec<&RadiiTriple> = points.iter().step_by(stride).take(ORACLE_SAMPLE).collect();
        let t = Instant::now();
        for r in &sample {
            match quadrature_eval(&grid.spec_at(**r), 1e-10) {
                Ok(_) | Err(Error::ToleranceUnreachable { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        let per = t.elapsed().as_secs_f64() * 1e3 / sample.len() as f64;
        best[2] = best[2].min(per * points.len() as f64);
        oracle_points = sample.len();
        last = Some((g, pw));
    }
    let (g, pw) = last.expect("at least one repetition");
    let max_rel_diff = g.values.iter().zip(&pw.values).map(|(a, b)| rel_diff(*a, *b)).fold(0.0, f64::max);
    Ok(BenchmarkReport {
        shape: grid.shape(),
        table_size: table.len(),
        grid: PathTiming { wall_ms: best[0], kernel_calls: g.kernel_calls, points_evaluated: points.len() },
        pointwise: PathTiming { wall_ms: best[1], kernel_calls: pw.kernel_calls, points_evaluated: points.len() },
        oracle: PathTiming { wall_ms: best[2], kernel_calls: 0, points_evaluated: oracle_points },
        max_rel_diff,
    })
}
