//! Brute-force reference values.
//!
//! [`quadrature_eval`] integrates the damped triple product directly:
//! panels one half-oscillation wide (`π / max r`), each integrated with a
//! 20/30-point Gauss–Legendre pair and bisected until the pair agrees,
//! truncated at a `k_max` beyond which the envelope `k^{n-3} w(k) / (r1 r2 r3)`
//! integrates to less than the tolerance. [`cubature_q`] integrates the
//! `q`-space integrands behind the nested-sum route on a tensor grid.
//! Neither shares code with the closed-form routes beyond the incomplete
//! Gamma used for the tail bound.

use std::collections::BinaryHeap;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::gamma::upper_incomplete_gamma;
use crate::types::{Damping, OrderTriple, RadiiTriple, WeightedIntegralSpec};

/// Outcome of one quadrature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals_used: usize,
    /// `k_max`.
    pub truncation_point: f64,
    /// Bound on the discarded integral beyond `k_max`.
    pub tail_bound: f64,
}

/// Spherical Bessel function `j_l(x)` for `l >= -1`, `x >= 0`.
pub fn sbf(ell: i32, x: f64) -> f64 {
    assert!(ell >= -1, "sbf order below -1");
    if ell == -1 {
        return x.cos() / x;
    }
    if x == 0.0 {
        return if ell == 0 { 1.0 } else { 0.0 };
    }
    let l = ell as usize;
    if x < 1.5 {
        return sbf_series(l, x);
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    let j1 = (j0 - c) / x;
    if (l as f64) <= x {
        // upward recurrence is stable while l <= x
        let (mut a, mut b) = (j0, j1);
        for k in 1..l {
            let next = (2 * k + 1) as f64 / x * b - a;
            a = b;
            b = next;
        }
        return b;
    }
    sbf_miller(l, x, j0, j1)
}

fn sbf_series(l: usize, x: f64) -> f64 {
    // x^l / (2l+1)!! Σ (-x^2/2)^k / (k! (2l+3)(2l+5)…(2l+2k+1))
    let mut lead = 1.0;
    for k in 1..=l {
        lead *= x / (2 * k + 1) as f64;
    }
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= y / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn sbf_miller(l: usize, x: f64, j0: f64, j1: f64) -> f64 {
    let start = l + 30 + (x as usize) + (4.0 * (l as f64).sqrt()) as usize;
    let mut f = vec![0f64; start + 2];
    f[start] = 1.0;
    for k in (1..=start).rev() {
        f[k - 1] = (2 * k + 1) as f64 / x * f[k] - f[k + 1];
        if f[k - 1].abs() > 1e100 {
            for v in f.iter_mut().skip(k - 1) {
                *v *= 1e-100;
            }
        }
    }
    // Σ (2k+1) j_k^2 = 1
    let norm: f64 = f.iter().enumerate().map(|(k, v)| (2 * k + 1) as f64 * v * v).sum::<f64>().sqrt();
    let sign = if j0.abs() > j1.abs() { (j0 * f[0]).signum() } else { (j1 * f[1]).signum() };
    sign * f[l] / norm
}

fn rule(n: usize) -> &'static [(f64, f64)] {
    static R20: OnceLock<GaussLegendre> = OnceLock::new();
    static R30: OnceLock<GaussLegendre> = OnceLock::new();
    let cell = match n {
        20 => &R20,
        30 => &R30,
        _ => unreachable!(),
    };
    cell.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(n).unwrap())).as_node_weight_pairs()
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut lo = Compensated::default();
    for &(x, w) in rule(20) {
        lo.add(w * f(mid + half * x));
    }
    let mut hi = Compensated::default();
    let mut abs = 0.0;
    for &(x, w) in rule(30) {
        let v = w * f(mid + half * x);
        hi.add(v);
        abs += v.abs();
    }
    let value = half * hi.value();
    Panel { a, b, value, error: (half * (hi.value() - lo.value())).abs(), abs: half * abs }
}

/// `∫_K^∞ k^m w(k) dk` for the damping envelope.
fn envelope_tail(m: f64, damping: &Damping, k: f64) -> f64 {
    match *damping {
        Damping::Exp(p) => {
            let a = p * p;
            if m <= 0.0 {
                k.powf(m) * (-a * k).exp() / a
            } else {
                upper_incomplete_gamma(m + 1.0, a * k).unwrap_or(f64::INFINITY) / a.powf(m + 1.0)
            }
        }
        Damping::Gauss(p) => {
            let a = p * p;
            if m <= 0.0 {
                k.powf(m) * (-a * k * k).exp() / (2.0 * a * k)
            } else {
                0.5 * upper_incomplete_gamma((m + 1.0) / 2.0, a * k * k).unwrap_or(f64::INFINITY)
                    / p.powf(m + 1.0)
            }
        }
    }
}

/// Bound on the integrand beyond `k` using `|x j_l(x)| <= 1` (doubled
/// for margin).
fn tail_bound(n: u32, radii: &RadiiTriple, damping: &Damping, k: f64) -> f64 {
    2.0 * envelope_tail(n as f64 - 3.0, damping, k) / (radii.r1 * radii.r2 * radii.r3)
}

/// Direct quadrature of `∫ k^n w(k) j_l1(k r1) j_l2(k r2) j_l3(k r3) dk`.
pub fn quadrature_eval(spec: &WeightedIntegralSpec, tol: f64) -> Result<QuadratureReport> {
    spec.validate()?;
    quadrature_orders(spec.orders, &spec.radii, &spec.damping.canonical()?, spec.n, tol)
}

/// As [`quadrature_eval`] but admitting orders of `-1`.
pub fn quadrature_orders(
    orders: OrderTriple,
    radii: &RadiiTriple,
    damping: &Damping,
    n: u32,
    tol: f64,
) -> Result<QuadratureReport> {
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::Domain(format!("oracle tolerance {tol:e} outside [1e-12, 1e-4]")));
    }
    if orders.iter().any(|&l| l < -1) {
        return Err(Error::Domain("orders must be >= -1".into()));
    }
    radii.validate()?;
    let damping = damping.canonical()?;
    let singular = orders.iter().filter(|&&l| l == -1).count() as u32;
    if n < singular {
        return Err(Error::Domain("integrand not integrable at k = 0".into()));
    }
    let r = radii.as_array();
    let f = |k: f64| {
        let w = match damping {
            Damping::Exp(p) => (-p * p * k).exp(),
            Damping::Gauss(p) => (-(p * k) * (p * k)).exp(),
        };
        k.powi(n as i32) * w * sbf(orders[0], k * r[0]) * sbf(orders[1], k * r[1]) * sbf(orders[2], k * r[2])
    };
    let h = std::f64::consts::PI / radii.max();
    // scale of the integrand near the origin
    let mut scale = 0.0;
    for &(x, w) in rule(30) {
        let k = 0.5 * h * (x + 1.0);
        scale += 0.5 * h * w * f(k).abs();
    }
    let scale = scale.max(f64::MIN_POSITIVE);
    let mut kmax = h;
    while tail_bound(n, radii, &damping, kmax) > 1e-6 * tol * scale {
        kmax += h;
        if kmax > 1e7 * h {
            return Err(Error::NonConvergence { what: "oracle truncation search", terms: 10_000_000 });
        }
    }

    let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
    let mut covered = 0.0;
    let add_panels = |heap: &mut BinaryHeap<Panel>, from: f64, to: f64| {
        let mut a = from;
        while a < to - 0.5 * h {
            heap.push(panel(&f, a, a + h));
            a += h;
        }
        a
    };
    covered = add_panels(&mut heap, covered, kmax);
    let max_panels = 200_000;
    loop {
        let mut total = Compensated::default();
        let mut err = 0.0;
        let mut abs = 0.0;
        for p in heap.iter() {
            total.add(p.value);
            err += p.error;
            abs += p.abs;
        }
        let value = total.value();
        let floor = 8.0 * f64::EPSILON * abs;
        let tail = tail_bound(n, radii, &damping, covered);
        if tail > 0.1 * tol * value.abs() && tail > floor {
            let next = covered * 1.5;
            covered = add_panels(&mut heap, covered, next);
            continue;
        }
        let target = (tol * value.abs()).max(floor);
        if err <= target || heap.len() >= max_panels {
            let error_estimate = err + tail + floor;
            let report = QuadratureReport {
                value,
                error_estimate,
                intervals_used: heap.len(),
                truncation_point: covered,
                tail_bound: tail,
            };
            if error_estimate > tol * value.abs() {
                return Err(Error::ToleranceUnreachable {
                    requested: tol,
                    achieved: error_estimate / value.abs(),
                    value,
                });
            }
            return Ok(report);
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(panel(&f, worst.a, mid));
        heap.push(panel(&f, mid, worst.b));
    }
}

/// Which `q`-space integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QIntegral {
    /// Power-law part.
    Pl,
    /// Hypergeometric part.
    Hg,
}

/// `1F1(1; c; -x) = e^{-x} 1F1(c-1; c; x)` summed with positive terms.
fn hyp1f1_one(c: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let a = c - 1.0;
    for k in 0..10_000 {
        let k = k as f64;
        term *= (a + k) / (c + k) * x / (k + 1.0);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum * (-x).exp()
}

fn ln_gamma_half(a2: u32) -> f64 {
    // Γ(a2/2) by the half-integer recurrence
    let (mut v, mut a) = if a2 % 2 == 0 { (1.0f64, 2u32) } else { (std::f64::consts::PI.sqrt(), 1u32) };
    while a < a2 {
        v *= a as f64 / 2.0;
        a += 2;
    }
    v.ln()
}

/// Tensor-product Gauss–Legendre cubature of the `q`-space integrals
///
/// * `I_pl = Γ((α+1)/2) ∫ Π(1-q_i^2)^{l_i} e^{-(s/2p)^2} s^ζ d^3q`
/// * `I_hg = 2/(α+1) (-i)^{α+1} (2p)^{-(α+1)} ∫ Π(1-q_i^2)^{l_i} s^{n+L+1} 1F1(1; (α+3)/2; -(s/2p)^2) d^3q`
///
/// with `s = r1 q1 + r2 q2 + r3 q3` and `α = n + L - ζ`.
pub fn cubature_q(spec: &WeightedIntegralSpec, which: QIntegral, zeta: u32, tol: f64) -> Result<Complex<f64>> {
    spec.validate()?;
    if !(tol >= 1e-9) {
        return Err(Error::Domain(format!("cubature tolerance {tol:e} below 1e-9")));
    }
    let Damping::Gauss(p) = spec.damping.canonical()? else {
        return Err(Error::Domain("q-space integrals are defined for Gaussian damping".into()));
    };
    if spec.orders.iter().any(|&l| l > 2) {
        return Err(Error::CostLimit("cubature oracle supports orders <= 2".into()));
    }
    let l = spec.orders;
    let big_l = (l[0] + l[1] + l[2]) as u32;
    let nl = spec.n + big_l;
    if zeta > nl {
        return Err(Error::Domain(format!("zeta = {zeta} exceeds n + L = {nl}")));
    }
    let alpha = nl - zeta;
    let r = spec.radii.as_array();
    let c = (alpha as f64 + 3.0) / 2.0;
    let g = |s: f64| -> f64 {
        let y = s / (2.0 * p);
        match which {
            QIntegral::Pl => (-y * y).exp() * s.powi(zeta as i32),
            QIntegral::Hg => s.powi(nl as i32 + 1) * hyp1f1_one(c, y * y),
        }
    };
    let integrate = |nodes: usize| -> f64 {
        let q = GaussLegendre::new(NonZeroUsize::new(nodes).unwrap());
        let pts = q.as_node_weight_pairs();
        let wt = |x: f64, li: i32| (1.0 - x * x).powi(li);
        let mut total = Compensated::default();
        for &(x1, w1) in pts {
            let a1 = w1 * wt(x1, l[0]);
            for &(x2, w2) in pts {
                let a2 = a1 * w2 * wt(x2, l[1]);
                let s12 = r[0] * x1 + r[1] * x2;
                let mut inner = Compensated::default();
                for &(x3, w3) in pts {
                    inner.add(w3 * wt(x3, l[2]) * g(s12 + r[2] * x3));
                }
                total.add(a2 * inner.value());
            }
        }
        total.value()
    };
    let coarse = integrate(48);
    let fine = integrate(72);
    let err = (fine - coarse).abs();
    if err > tol * fine.abs().max(1e-300) {
        return Err(Error::ToleranceUnreachable { requested: tol, achieved: err / fine.abs(), value: fine });
    }
    let a1 = alpha as f64 + 1.0;
    Ok(match which {
        QIntegral::Pl => Complex::new(ln_gamma_half(alpha + 1).exp() * fine, 0.0),
        QIntegral::Hg => {
            // (-i)^{α+1}
            let phase = match (alpha + 1) % 4 {
                0 => Complex::new(1.0, 0.0),
                1 => Complex::new(0.0, -1.0),
                2 => Complex::new(-1.0, 0.0),
                _ => Complex::new(0.0, 1.0),
            };
            phase * (2.0 / a1 * (2.0 * p).powf(-a1) * fine)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sbf_regimes_agree() {
        // values from closed forms
        let x: f64 = 2.0;
        let j2 = (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x);
        assert!((sbf(2, x) - j2).abs() < 1e-15);
        let x: f64 = 0.3;
        let j2 = (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x);
        assert!((sbf(2, x) - j2).abs() < 1e-12 * j2.abs());
        // Miller near a zero of j0
        let x = std::f64::consts::PI;
        let j3 = sbf(3, x);
        // j_3(π) = (15/π^3 - 6/π)(0) - (15/π^2 - 1)(-1)/π
        let want = (15.0 / (x * x) - 1.0) / x;
        assert!((j3 - want).abs() < 1e-14, "{j3} {want}");
        // continuity across the series/recurrence switch
        for l in [0, 1, 4, 9] {
            let a = sbf(l, 1.5 - 1e-12);
            let b = sbf(l, 1.5 + 1e-12);
            assert!((a - b).abs() < 1e-10 * a.abs().max(1e-300), "l={l}");
        }
    }

    #[test]
    fn j000_exp() {
        // ∫ k^2 e^{-k} j0(k)^3 dk = (1/4)[atan(3) - 3 atan(1) + ... ] checked by halving
        let spec = WeightedIntegralSpec::new([0, 0, 0], RadiiTriple::new(1.0, 1.0, 1.0).unwrap(), Damping::Exp(1.0), 2);
        let a = quadrature_eval(&spec, 1e-10).unwrap();
        let b = quadrature_eval(&spec, 5e-11).unwrap();
        assert!((a.value - b.value).abs() < 1e-10 * a.value.abs());
        assert!((a.value - 0.27678717944852262575).abs() < 1e-10);
    }

    #[test]
    fn gauss_n0_finite() {
        let spec = WeightedIntegralSpec::new([0, 0, 0], RadiiTriple::new(1.0, 1.0, 1.0).unwrap(), Damping::Gauss(1.0), 0);
        let a = quadrature_eval(&spec, 1e-10).unwrap();
        assert!(a.value.is_finite() && a.value > 0.0);
    }

    #[test]
    fn tolerance_range() {
        let spec = WeightedIntegralSpec::new([0, 0, 0], RadiiTriple::new(1.0, 1.0, 1.0).unwrap(), Damping::Exp(1.0), 2);
        assert!(quadrature_eval(&spec, 1e-13).is_err());
        assert!(quadrature_eval(&spec, 1e-3).is_err());
    }

    #[test]
    fn separable_zero_orders() {
        // zero orders and ζ = 0, huge p: I_pl -> Γ((n+1)/2) * 8
        let spec = WeightedIntegralSpec::new([0, 0, 0], RadiiTriple::new(1.0, 1.0, 1.0).unwrap(), Damping::Gauss(1e4), 2);
        let v = cubature_q(&spec, QIntegral::Pl, 0, 1e-9).unwrap();
        let want = 8.0 * ln_gamma_half(3).exp();
        assert!((v.re - want).abs() < 1e-8 * want);
    }
}
