//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `ACCEPTANCE_ONLY=1,4,12` restricts the run to the listed criteria.

use std::collections::HashMap;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use trisbf::basecase::{base_case_eval, BaseCaseVariant};
use trisbf::engine::Evaluator;
use trisbf::gridscan::{collect_arguments, evaluate_grid, evaluate_pointwise, GridAxis, GridSpec};
use trisbf::hankelbowman::evaluate_hb_with;
use trisbf::oracle::quadrature_eval;
use trisbf::paramdiff::{evaluate_weighted_with, finite_difference};
use trisbf::recursion::{evaluate_with, reduction_plan, reduction_plan_for, relation_residual, PlanNode};
use trisbf::specfun::gamma::upper_incomplete_gamma;
use trisbf::specfun::hyper::pfq;
use trisbf::specfun::legendre::legendre_q_sequence;
use trisbf::specfun::policy::PrecisionPolicy;
use trisbf::{rel_diff, Damping, DampingKind, Error, RadiiTriple, WeightedIntegralSpec};

const RADII: [f64; 3] = [0.7, 1.3, 2.5];
const PS: [f64; 3] = [0.5, 1.0, 2.0];

const ORACLE_TOL: f64 = 1e-10;
/// Best estimates are accepted when the quadrature stalls this close to
/// its target.
const ORACLE_FALLBACK: f64 = 1e-8;

fn triples(max: i32) -> Vec<[i32; 3]> {
    let mut v = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            for c in 0..=max {
                v.push([a, b, c]);
            }
        }
    }
    v
}

fn radii_grid() -> Vec<[f64; 3]> {
    let mut v = Vec::new();
    for a in RADII {
        for b in RADII {
            for c in RADII {
                v.push([a, b, c]);
            }
        }
    }
    v
}

fn spec(kind: DampingKind, ell: [i32; 3], r: [f64; 3], p: f64, n: u32) -> WeightedIntegralSpec {
    WeightedIntegralSpec::new(ell, RadiiTriple::from_array(r), kind.with_p(p), n)
}

/// Every (orders, radii, p) of the oracle grid up to `max` per order.
fn grid_specs(kind: DampingKind, max: i32, n: u32) -> Vec<WeightedIntegralSpec> {
    let mut v = Vec::new();
    for ell in triples(max) {
        for r in radii_grid() {
            for p in PS {
                v.push(spec(kind, ell, r, p, n));
            }
        }
    }
    v
}

/// The integral is symmetric under permuting (order, radius) pairs, so
/// the quadrature only runs once per orbit.
type OracleKey = (Vec<(i32, u64)>, u64, u32, u8);

fn oracle_key(s: &WeightedIntegralSpec) -> OracleKey {
    let r = s.radii.as_array();
    let mut pairs: Vec<(i32, u64)> = (0..3).map(|i| (s.orders[i], r[i].to_bits())).collect();
    pairs.sort();
    (pairs, s.damping.p().to_bits(), s.n, s.damping.kind() as u8)
}

fn oracle_value(s: &WeightedIntegralSpec) -> Result<f64, String> {
    match quadrature_eval(s, ORACLE_TOL) {
        Ok(q) => Ok(q.value),
        Err(Error::ToleranceUnreachable { achieved, value, .. }) if achieved < ORACLE_FALLBACK => Ok(value),
        Err(e) => Err(e.to_string()),
    }
}

fn oracles(specs: &[WeightedIntegralSpec]) -> Vec<Result<f64, String>> {
    let mut unique: Vec<&WeightedIntegralSpec> = Vec::new();
    let mut index: HashMap<OracleKey, usize> = HashMap::new();
    let slots: Vec<usize> = specs
        .iter()
        .map(|s| {
            *index.entry(oracle_key(s)).or_insert_with(|| {
                unique.push(s);
                unique.len() - 1
            })
        })
        .collect();
    let values: Vec<Result<f64, String>> = unique.par_iter().map(|s| oracle_value(s)).collect();
    slots.into_iter().map(|i| values[i].clone()).collect()
}

/// Worst relative deviation and the case where it occurs.
#[derive(Default)]
struct Worst {
    rel: f64,
    at: String,
    failures: usize,
    errors: Vec<String>,
    cases: usize,
}

impl Worst {
    fn add(&mut self, rel: f64, tol: f64, at: impl FnOnce() -> String) {
        self.cases += 1;
        if rel > tol || rel.is_nan() {
            self.failures += 1;
        }
        if rel > self.rel || rel.is_nan() {
            self.rel = rel;
            self.at = at();
        }
    }

    fn error(&mut self, e: String) {
        self.cases += 1;
        self.failures += 1;
        if self.errors.len() < 3 {
            self.errors.push(e);
        }
    }

    fn pass(&self) -> bool {
        self.failures == 0
    }

    fn summary(&self, tol: f64) -> String {
        let mut s = format!("{} cases, worst {:.2e} (tol {:.0e})", self.cases, self.rel, tol);
        if self.failures > 0 {
            s += &format!(", {} failing, worst at {}", self.failures, self.at);
        }
        for e in &self.errors {
            s += &format!("; error: {e}");
        }
        s
    }
}

fn describe(s: &WeightedIntegralSpec) -> String {
    format!("{:?} r={:?} {}(p={}) n={}", s.orders, s.radii.as_array(), s.damping.kind().label(), s.damping.p(), s.n)
}

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

/// Recursion values and oracle values over the oracle grid.
struct OracleSuite {
    specs: Vec<WeightedIntegralSpec>,
    analytic: Vec<Result<f64, String>>,
    oracle: Vec<Result<f64, String>>,
}

fn recursion_suite(kind: DampingKind) -> OracleSuite {
    let ev = Evaluator::default();
    let specs = grid_specs(kind, 5, 2);
    let analytic = specs.par_iter().map(|s| evaluate_with(&ev, s).map(|r| r.value).map_err(|e| e.to_string())).collect();
    let oracle = oracles(&specs);
    OracleSuite { specs, analytic, oracle }
}

fn judge(suite: &OracleSuite, tol: f64) -> Worst {
    let mut w = Worst::default();
    for ((s, a), o) in suite.specs.iter().zip(&suite.analytic).zip(&suite.oracle) {
        match (a, o) {
            (Ok(a), Ok(o)) => w.add(rel_diff(*a, *o), tol, || describe(s)),
            (Err(e), _) => w.error(format!("{}: {e}", describe(s))),
            (_, Err(e)) => w.error(format!("oracle {}: {e}", describe(s))),
        }
    }
    w
}

fn bits(v: &[Result<f64, String>]) -> Vec<Option<u64>> {
    v.iter().map(|x| x.as_ref().ok().map(|f| f.to_bits())).collect()
}

struct Harness {
    only: Option<Vec<u32>>,
    results: Vec<(u32, bool)>,
    c1_threaded: Option<OracleSuite>,
}

impl Harness {
    fn wants(&self, id: u32) -> bool {
        self.only.as_ref().is_none_or(|o| o.contains(&id))
    }

    fn run(&mut self, id: u32, name: &str, f: impl FnOnce(&mut Self) -> (bool, String)) {
        if !self.wants(id) {
            return;
        }
        let t = Instant::now();
        let (pass, detail) = f(self);
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {id:>2}: {name}: {detail} [{:.1}s]", t.elapsed().as_secs_f64());
        self.results.push((id, pass));
    }
}

const C1_THREADS: usize = 8;

fn c1(h: &mut Harness) -> (bool, String) {
    let suite = in_pool(C1_THREADS, || recursion_suite(DampingKind::Exp));
    let w = judge(&suite, 1e-6);
    h.c1_threaded = Some(suite);
    (w.pass(), w.summary(1e-6))
}

fn c2(_: &mut Harness) -> (bool, String) {
    let suite = recursion_suite(DampingKind::Gauss);
    let w = judge(&suite, 1e-6);
    (w.pass(), w.summary(1e-6))
}

fn c3(_: &mut Harness) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let draws: Vec<([f64; 3], f64)> =
        (0..50).map(|_| ([0; 3].map(|_: i32| rng.gen_range(0.3..5.0)), rng.gen_range(0.3..3.0))).collect();
    let variants = [BaseCaseVariant::L00, BaseCaseVariant::Lm10, BaseCaseVariant::Lm1m1];
    let mut jobs = Vec::new();
    for kind in [DampingKind::Exp, DampingKind::Gauss] {
        for &(r, p) in &draws {
            for ell in 0..=20usize {
                for v in variants {
                    jobs.push((kind, ell, v, r, p));
                }
            }
        }
    }
    let ev = Evaluator::default();
    let out: Vec<_> = jobs
        .par_iter()
        .map(|&(kind, ell, v, r, p)| base_case_eval(&ev, kind, ell, v, &RadiiTriple::from_array(r), p))
        .collect();
    let mut violations = 0;
    let mut worst = 0f64;
    let mut errors = Vec::new();
    for (job, res) in jobs.iter().zip(out) {
        match res {
            Ok(r) => {
                let bound = 1e-12f64.max(1e-10 * r.value.abs());
                worst = worst.max(r.im_residual.abs() / bound);
                if r.im_residual.abs() > bound {
                    violations += 1;
                }
            }
            Err(e) => {
                violations += 1;
                if errors.len() < 3 {
                    errors.push(format!("{:?}: {e}", (job.0, job.1, job.2)));
                }
            }
        }
    }
    let mut s = format!(
        "{} base cases, {violations} violations, worst |Im|/bound {worst:.2e}",
        jobs.len()
    );
    for e in errors {
        s += &format!("; {e}");
    }
    (violations == 0, s)
}

fn c4(_: &mut Harness) -> (bool, String) {
    // every interior node of every plan of the oracle grids, deduplicated
    // by (damping, target orders in slot order, radii in slot order, p)
    let mut nodes: HashMap<(u8, [i32; 3], [u64; 3], u64), ([i32; 3], [f64; 3], f64, DampingKind)> = HashMap::new();
    for kind in [DampingKind::Exp, DampingKind::Gauss] {
        for ell in triples(5) {
            for r in radii_grid() {
                let plan = reduction_plan_for(ell, &RadiiTriple::from_array(r)).unwrap();
                let (_, cr, _) = trisbf::recursion::canonicalize(ell, RadiiTriple::from_array(r));
                let cr = cr.as_array();
                for node in &plan.nodes {
                    if let PlanNode::Interior(a) = node {
                        let app = &plan.applications[*a];
                        let rr = app.slots.map(|i| cr[i]);
                        for p in PS {
                            nodes.insert(
                                (kind as u8, app.target, rr.map(f64::to_bits), p.to_bits()),
                                (app.target, rr, p, kind),
                            );
                        }
                    }
                }
            }
        }
    }
    let mut list: Vec<_> = nodes.into_values().collect();
    list.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    let ev = Evaluator::default();
    let out: Vec<_> = list
        .par_iter()
        .map(|&(t, r, p, kind)| {
            let below = [t[0], t[1] - 1, t[2]];
            relation_residual(&ev, kind, below, 1, &RadiiTriple::from_array(r), p)
        })
        .collect();
    let mut w = Worst::default();
    for (job, res) in list.iter().zip(out) {
        match res {
            Ok((res, scale)) => w.add(res / scale, 1e-9, || format!("{job:?}")),
            Err(e) => w.error(format!("{job:?}: {e}")),
        }
    }
    (w.pass(), format!("interior nodes: {}", w.summary(1e-9)))
}

fn c5(_: &mut Harness) -> (bool, String) {
    let a = reduction_plan([1, 1, 1]).map(|p| p.leaf_count());
    let b = reduction_plan([1, 1, 0]).map(|p| p.leaf_count());
    (a == Ok(7) && b == Ok(3), format!("leaves (1,1,1) = {a:?} (want 7), (1,1,0) = {b:?} (want 3)"))
}

fn c6(_: &mut Harness) -> (bool, String) {
    let ev = Evaluator::default();
    let specs = grid_specs(DampingKind::Gauss, 4, 2);
    let out: Vec<_> = specs
        .par_iter()
        .map(|s| {
            let hb = evaluate_hb_with(&ev, s)?;
            let rec = evaluate_with(&ev, s)?;
            Ok::<_, Error>((hb, rec))
        })
        .collect();
    let mut w = Worst::default();
    let mut flagged = 0;
    for (s, r) in specs.iter().zip(out) {
        match r {
            Ok((hb, rec)) => {
                flagged += hb.is_flagged() as usize;
                w.add(rel_diff(hb.value, rec.value), 1e-6, || describe(s));
            }
            Err(e) => w.error(format!("{}: {e}", describe(s))),
        }
    }
    let mut s = w.summary(1e-6);
    if flagged > 0 {
        s += &format!(", {flagged} flagged");
    }
    (w.pass(), s)
}

fn c7(_: &mut Harness) -> (bool, String) {
    let ev = Evaluator::default();
    let mut specs = Vec::new();
    for n in [0, 1, 3] {
        specs.extend(grid_specs(DampingKind::Gauss, 2, n));
    }
    let analytic: Vec<_> = specs.par_iter().map(|s| evaluate_hb_with(&ev, s).map(|r| r.value).map_err(|e| e.to_string())).collect();
    let oracle = oracles(&specs);
    let w = judge(&OracleSuite { specs, analytic, oracle }, 1e-6);
    (w.pass(), w.summary(1e-6))
}

fn c8(_: &mut Harness) -> (bool, String) {
    let ev = Evaluator::default();
    let mut specs = Vec::new();
    for (kind, n) in [(DampingKind::Exp, 3), (DampingKind::Exp, 4), (DampingKind::Gauss, 4), (DampingKind::Gauss, 6)] {
        specs.extend(grid_specs(kind, 2, n));
    }
    let analytic: Vec<_> =
        specs.par_iter().map(|s| evaluate_weighted_with(&ev, s).map(|r| r.value).map_err(|e| e.to_string())).collect();
    let oracle = oracles(&specs);
    let fd: Vec<_> = specs.par_iter().map(|s| finite_difference(s).map_err(|e| e.to_string())).collect();
    let suite = OracleSuite { specs, analytic, oracle };
    let w = judge(&suite, 1e-5);
    let mut d = Worst::default();
    for ((s, a), f) in suite.specs.iter().zip(&suite.analytic).zip(&fd) {
        match (a, f) {
            (Ok(a), Ok(f)) => d.add(rel_diff(*a, *f), 1e-5, || describe(s)),
            (Err(e), _) | (_, Err(e)) => d.error(format!("{}: {e}", describe(s))),
        }
    }
    (w.pass() && d.pass(), format!("oracle: {}; finite differences: {}", w.summary(1e-5), d.summary(1e-5)))
}

fn c9(_: &mut Harness) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let specs: Vec<WeightedIntegralSpec> = (0..100)
        .map(|_| {
            let kind = if rng.gen_bool(0.5) { DampingKind::Exp } else { DampingKind::Gauss };
            let ell = [0; 3].map(|_: i32| rng.gen_range(0..=5));
            let r = [0; 3].map(|_: i32| rng.gen_range(0.4..3.0));
            spec(kind, ell, r, rng.gen_range(0.4..2.5), 2)
        })
        .collect();
    let ev = Evaluator::default();
    let out: Vec<_> = specs
        .par_iter()
        .map(|s| {
            let base = evaluate_with(&ev, s)?.value;
            let mut rels = Vec::new();
            for lambda in [0.5f64, 2.0] {
                // f(λr; p) = λ^-3 f(r; p/√λ) (exp) or f(r; p/λ) (gauss),
                // so the scaled geometry carries p·√λ or p·λ
                let p = s.damping.p();
                let p2 = match s.damping {
                    Damping::Exp(_) => p * lambda.sqrt(),
                    Damping::Gauss(_) => p * lambda,
                };
                let scaled = WeightedIntegralSpec::new(s.orders, s.radii.scaled(lambda), s.damping.with_p(p2), 2);
                let v = evaluate_with(&ev, &scaled)?.value;
                rels.push(rel_diff(v, base / lambda.powi(3)));
            }
            Ok::<_, Error>(rels)
        })
        .collect();
    let mut w = Worst::default();
    for (s, r) in specs.iter().zip(out) {
        match r {
            Ok(rels) => rels.into_iter().for_each(|x| w.add(x, 1e-10, || describe(s))),
            Err(e) => w.error(format!("{}: {e}", describe(s))),
        }
    }
    (w.pass(), w.summary(1e-10))
}

/// Q_0..Q_4 from their closed forms, evaluated in 50-digit arithmetic.
#[rustfmt::skip]
const Q_REFERENCE: [((f64, f64), [(f64, f64); 5]); 8] = [
    ((2.5, -0.3), [(4.1567377227690792437e-1, 5.5945133085838055439e-2), (5.5967970618021226923e-2, 1.5160701031522765902e-2), (8.8653191433108831836e-3, 3.6944755471817932313e-3), (1.4740871253720918634e-3, 8.538545205868531009e-4), (2.4841543932783737606e-4, 1.9086112636078919334e-4)]),
    ((1.1, -0.05), [(1.4666170142333238522, 2.1992129140786791969e-1), (6.2427478022704976425e-1, 1.6858256983698853451e-1), (3.0938857299574440889e-1, 1.2137998601006840964e-1), (1.6114419584167065396e-1, 8.4359213377487710464e-2), (8.5542578418937902321e-2, 5.7256379107966365521e-2)]),
    ((-1.7, -1.0), [(-4.290684622974589616e-1, 3.0268235519737385538e-1), (3.2098741103054071045e-2, -8.5491541538076579108e-2), (4.4451290288267331107e-3, 1.8514141668827236771e-2), (-3.1367902023330628968e-3, -2.8709220843373385932e-3), (9.7399043273046950291e-4, 1.4476980336601458291e-4)]),
    ((0.3, -0.8), [(1.8091265871333998455e-1, 8.6898567194398709591e-1), (-2.5053766483080829133e-1, 1.1596557461252412345e-1), (-6.4039588995504763331e-2, -8.166312959938772805e-2), (2.6121142590269503626e-2, -3.27558292140369223e-2), (1.5885130706868367629e-2, 7.4809372357941053595e-3)]),
    ((5.0, -2.0), [(1.7328679513998632735e-1, 7.0948527302081961406e-2), (8.3310303040955595844e-3, 8.1690462304371523235e-3), (3.4646840203499017632e-4, 8.0049216495098296996e-4), (1.523697397821646296e-6, 6.9842547516789279574e-5), (-2.0700329865407486448e-6, 5.420226166293206764e-6)]),
    ((0.0, -0.25), [(0.0, 1.3258176636680324651), (-6.6854558408299188374e-1, 0.0), (0.0, -4.1220423780289427613e-1), (2.739452903041219741e-1, 0.0), (0.0, 1.8930211384411734343e-1)]),
    ((-0.9, 0.1), [(-1.2996242578164564842, -1.1518057142907015349), (2.8484240346388102456e-1, 9.0666271707998575134e-1), (1.2927547666999097922e-1, -6.0536545039304787101e-1), (-2.8291390891539917256e-1, 3.2515227698124649242e-1), (2.9173115056754233403e-1, -1.0760068251087219288e-1)]),
    ((12.0, -0.5), [(8.3380595493697949131e-2, 3.4903447001945164347e-3), (2.312318274472647787e-3, 1.9383865548522265094e-4), (7.6810185272602588452e-5, 9.6847427822636593313e-6), (2.7288081221729604981e-6, 4.6059759462259562284e-7), (1.0035450647500029042e-7, 2.1285293475423145445e-8)]),
];

fn c10(_: &mut Harness) -> (bool, String) {
    // three-term recurrence of Q_l, relative to the largest term
    let mut rec = 0f64;
    for &((x, y), _) in &Q_REFERENCE {
        let z = Complex::new(x, y);
        let q = legendre_q_sequence(40, z).unwrap();
        for l in 1..40 {
            let lf = l as f64;
            let terms = [q[l + 1] * (lf + 1.0), -(q[l] * z) * (2.0 * lf + 1.0), q[l - 1] * lf];
            let scale = terms.iter().map(|t| t.norm()).fold(0f64, f64::max);
            rec = rec.max((terms[0] + terms[1] + terms[2]).norm() / scale);
        }
    }
    let mut closed = 0f64;
    for &((x, y), want) in &Q_REFERENCE {
        let q = legendre_q_sequence(4, Complex::new(x, y)).unwrap();
        for (got, w) in q.iter().zip(want) {
            let w = Complex::new(w.0, w.1);
            closed = closed.max((got - w).norm() / w.norm());
        }
    }
    // Γ(s+1, x) = s Γ(s, x) + x^s e^{-x}, on the half-integer lattice
    let mut gam = 0f64;
    for a2 in 1..40u32 {
        let s = a2 as f64 / 2.0;
        for x in [0.0, 0.01, 0.5, 1.0, 3.7, 10.0, 25.0, 60.0] {
            let lhs = upper_incomplete_gamma(s + 1.0, x).unwrap();
            let rhs = s * upper_incomplete_gamma(s, x).unwrap() + x.powf(s) * (-x).exp();
            gam = gam.max(rel_diff(lhs, rhs));
        }
    }
    let policy = PrecisionPolicy::default();
    let zero = Complex::new(0.0, 0.0);
    let one = [
        pfq(&[], &[], zero, &policy),
        pfq(&[1.5], &[2.5], zero, &policy),
        pfq(&[1.0, 0.5], &[1.5, 2.0], zero, &policy),
        pfq(&[3.0, 1.0, 0.5, 2.5], &[4.0, 2.0, 1.5, 3.5], zero, &policy),
    ]
    .iter()
    .all(|v| matches!(v, Ok(x) if x.value == Complex::new(1.0, 0.0)));
    let pass = rec <= 1e-12 && closed <= 1e-13 && gam <= 1e-13 && one;
    (
        pass,
        format!(
            "Q recurrence {rec:.2e} (tol 1e-12), Q0..Q4 closed forms {closed:.2e} (tol 1e-13), \
             Gamma recurrence {gam:.2e} (tol 1e-13), pFq(0) == 1: {one}"
        ),
    )
}

fn c11(_: &mut Harness) -> (bool, String) {
    let mut grid_calls = Vec::new();
    let mut point_calls = Vec::new();
    let mut table = Vec::new();
    let mut worst = 0f64;
    for n in [4, 8, 16] {
        let g = GridSpec::cube(GridAxis::new(0.5, 3.0, n), [1, 1, 0], Damping::Gauss(1.0), 2);
        let a = evaluate_grid(&g).unwrap();
        let b = evaluate_pointwise(&g).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            worst = worst.max(rel_diff(*x, *y));
        }
        grid_calls.push(a.kernel_calls as f64);
        point_calls.push(b.kernel_calls as f64);
        table.push(collect_arguments(&g).unwrap().len());
    }
    // doubling N adds twice the previous increment for linear growth,
    // four times for quadratic and eight times for cubic
    let growth = |c: &[f64]| (c[2] - c[1]) / (c[1] - c[0]);
    let (g, p) = (growth(&grid_calls), growth(&point_calls));
    let mut exp_table = Vec::new();
    for n in [4, 8, 16] {
        let g = GridSpec::cube(GridAxis::new(0.5, 3.0, n), [1, 1, 0], Damping::Exp(1.0), 2);
        exp_table.push(collect_arguments(&g).unwrap().len());
    }
    let pass = g <= 2.5 && p >= 6.0 && worst <= 1e-12;
    (
        pass,
        format!(
            "gaussian N=4/8/16: grid calls {grid_calls:?} (increment ratio {g:.2}, linear = 2), pointwise {point_calls:?} \
             (ratio {p:.2}, cubic = 8), tables {table:?}, max rel diff {worst:.1e}; exponential tables {exp_table:?} (quadratic)"
        ),
    )
}

fn c12(h: &mut Harness) -> (bool, String) {
    let threaded = match h.c1_threaded.take() {
        Some(s) => s,
        None => in_pool(C1_THREADS, || recursion_suite(DampingKind::Exp)),
    };
    let single = in_pool(1, || recursion_suite(DampingKind::Exp));
    let same_a = bits(&threaded.analytic) == bits(&single.analytic);
    let same_o = bits(&threaded.oracle) == bits(&single.oracle);
    (
        same_a && same_o,
        format!(
            "{} cases, 1 vs {C1_THREADS} threads: recursion identical {same_a}, quadrature identical {same_o}",
            threaded.specs.len()
        ),
    )
}

fn main() {
    let only = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect::<Vec<u32>>());
    let mut h = Harness { only, results: Vec::new(), c1_threaded: None };
    let t = Instant::now();
    h.run(1, "exponential recursion vs quadrature", c1);
    h.run(2, "gaussian recursion vs quadrature", c2);
    h.run(3, "base cases are real", c3);
    h.run(4, "three-term relation residual", c4);
    h.run(5, "reduction plan leaf counts", c5);
    h.run(6, "nested sums vs recursion (gaussian, n=2)", c6);
    h.run(7, "nested sums vs quadrature for n = 0, 1, 3", c7);
    h.run(8, "parametric differentiation", c8);
    h.run(9, "scaling laws", c9);
    h.run(10, "kernel unit properties", c10);
    h.run(11, "grid path complexity", c11);
    h.run(12, "determinism across thread counts", c12);
    let failed: Vec<u32> = h.results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    println!(
        "acceptance: {} passed, {} failed {:?} in {:.1}s",
        h.results.len() - failed.len(),
        failed.len(),
        failed,
        t.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
