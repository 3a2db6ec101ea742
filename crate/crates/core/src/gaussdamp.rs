//! Base cases under the weight `e^{-(pk)^2}`.
//!
//! Each base case is a double sum over the power-series terms of a
//! Legendre polynomial. Every term needs the incomplete-Gamma factor `G`
//! and the hypergeometric factor `χ` at the eight signed radius sums
//! `±r1 ± r2 ± r3`. Both are evaluated through moments of `e^{-y^2}` and
//! of Dawson's integral at `Y = rs / 2p`, which keeps every kernel a sum
//! of positive terms:
//!
//! * `G(m, rs) = 2^m p^{m+1} Γ((m+1)/2, Y^2)`, entering the bracket as
//!   `-(2p)^{m+1} sgn(rs)^{m+1} ∫_0^{|Y|} y^m e^{-y^2} dy` once the
//!   constant `Γ((m+1)/2)` that cancels between paired lines is removed;
//! * `χ(m, rs) = -(2i/√π) (2p)^{m+1} sgn(rs)^m ∫_0^{|Y|} y^m F(y) dy`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::basecase::{BaseCaseVariant, LeafSet, LeafValue};
use crate::engine::{global, Evaluator};
use crate::error::{Error, Result};
use crate::kernels::{order_bucket, ExactSum, GaussTable, KernelKey};
use crate::specfun::branch::QuarterTurns;
use crate::specfun::gamma::upper_incomplete_gamma;
use crate::specfun::hyper::dawson_moments;
use crate::specfun::jet::{moment_taylor, Jet};
use crate::specfun::policy::Tier;
use crate::specfun::real::Real;
use crate::types::{DampingKind, EvalResult, RadiiTriple};

/// `±r1 ± r2 ± r3` with its signs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedRadiusSum {
    pub value: f64,
    pub signs: [i8; 3],
}

impl SignedRadiusSum {
    pub fn new(signs: [i8; 3], radii: &RadiiTriple) -> Self {
        let r = radii.as_array();
        let terms = [signs[0] as f64 * r[0], signs[1] as f64 * r[1], signs[2] as f64 * r[2]];
        SignedRadiusSum { value: ExactSum::new(&terms).to_f64(), signs }
    }

    /// A bare value with no sign bookkeeping.
    pub fn from_value(value: f64) -> Self {
        SignedRadiusSum { value, signs: [1, 0, 0] }
    }
}

/// `(n, m)` of one term of the double sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreExpansionTerm {
    pub n: usize,
    pub m: usize,
}

impl LegendreExpansionTerm {
    /// Exponent of `(-s2 r2 - s3 r3)` in this term.
    pub fn exponent(&self, ell: usize) -> i64 {
        ell as i64 - 2 * self.n as i64 - self.m as i64
    }
}

/// All `(n, m)` with `0 <= n <= l/2`, `0 <= m <= l - 2n`.
pub fn expansion_terms(ell: usize) -> Vec<LegendreExpansionTerm> {
    let mut out = Vec::new();
    for n in 0..=ell / 2 {
        for m in 0..=ell - 2 * n {
            out.push(LegendreExpansionTerm { n, m });
        }
    }
    out
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!("damping parameter p = {p} must be finite and > 0")));
    }
    Ok(())
}

/// `G = 2^m p^{m+1} Γ((m+1)/2, (rs/2p)^2)`.
pub fn g_factor(m: u32, rs: &SignedRadiusSum, p: f64) -> Result<f64> {
    check_p(p)?;
    let x = (rs.value / (2.0 * p)).powi(2);
    Ok(2f64.powi(m as i32) * p.powi(m as i32 + 1) * upper_incomplete_gamma((m as f64 + 1.0) / 2.0, x)?)
}

/// `χ = -(i/4p) Γ((m+2)/2) rs^{m+2} 2F2~(1, (m+2)/2; 3/2, (m+4)/2; -(rs/2p)^2)`,
/// purely imaginary.
pub fn chi_factor(m: u32, rs: &SignedRadiusSum, p: f64) -> Result<Complex<f64>> {
    check_p(p)?;
    let y = rs.value / (2.0 * p);
    let mm = dawson_moments::<f64>(m as usize, &y.abs(), 10_000)?[m as usize];
    let sign = if y < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let v = -2.0 / std::f64::consts::PI.sqrt() * (2.0 * p).powi(m as i32 + 1) * sign * mm;
    Ok(Complex::new(0.0, v))
}

/// Binomial coefficient in working precision.
pub(crate) fn binom<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut c = T::one();
    for i in 0..k {
        c = c * T::from_i64((n - i) as i64) / T::from_i64(i as i64 + 1);
    }
    c
}

/// Sign pairs `(s2, s3)` in the order `++`, `+-`, `-+`, `--`.
const LINES: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

/// Per-variant signs over [`LINES`] and phase of the prefactor.
fn pattern(variant: BaseCaseVariant, ell: usize) -> ([f64; 4], QuarterTurns) {
    let l = ell as i64;
    match variant {
        BaseCaseVariant::L00 => ([1.0, -1.0, -1.0, 1.0], QuarterTurns::MINUS_ONE.mul(QuarterTurns::minus_i_pow(l))),
        BaseCaseVariant::Lm10 => ([1.0, -1.0, 1.0, -1.0], QuarterTurns::minus_i_pow(l + 1)),
        BaseCaseVariant::Lm1m1 => ([1.0, 1.0, 1.0, 1.0], QuarterTurns::minus_i_pow(l)),
    }
}

/// Kernel jets at one signed radius sum.
struct SideJets<T> {
    /// `sgn^{m+1}`.
    sigma_g: Vec<f64>,
    /// `sgn^m`.
    sigma_chi: Vec<f64>,
    e: Vec<Jet<T>>,
    u: Vec<Jet<T>>,
    mm: Vec<Jet<T>>,
    /// Plain values for choosing the cancellation-free form.
    e0: Vec<f64>,
    u0: Vec<f64>,
}

fn side_jets<T: Real>(table: &GaussTable<T>, negative: bool, y_jet: &Jet<T>, ell: usize, order: usize) -> SideJets<T> {
    let mut s = SideJets {
        sigma_g: Vec::with_capacity(ell + 1),
        sigma_chi: Vec::with_capacity(ell + 1),
        e: Vec::with_capacity(ell + 1),
        u: Vec::with_capacity(ell + 1),
        mm: Vec::with_capacity(ell + 1),
        e0: Vec::with_capacity(ell + 1),
        u0: Vec::with_capacity(ell + 1),
    };
    for m in 0..=ell {
        let sg = if negative && m % 2 == 0 { -1.0 } else { 1.0 };
        let sc = if negative && m % 2 == 1 { -1.0 } else { 1.0 };
        s.sigma_g.push(sg);
        s.sigma_chi.push(sc);
        s.e0.push(table.e[m].to_f64());
        s.u0.push(table.u[m].to_f64());
        if order == 0 {
            s.e.push(Jet::constant(table.e[m].clone(), 0));
            s.u.push(Jet::constant(table.u[m].clone(), 0));
            s.mm.push(Jet::constant(table.mm[m].clone(), 0));
            continue;
        }
        let te = moment_taylor(m, &table.y, &table.gauss, false, table.e[m].clone(), order);
        let mut tu: Vec<T> = te.iter().map(|c| -c.clone()).collect();
        tu[0] = table.u[m].clone();
        let tm = moment_taylor(m, &table.y, &table.dawson, true, table.mm[m].clone(), order);
        s.e.push(y_jet.compose(&te));
        s.u.push(y_jet.compose(&tu));
        s.mm.push(y_jet.compose(&tm));
    }
    s
}

fn abs_jet<T: Real>(j: &Jet<T>) -> Vec<f64> {
    j.c.iter().map(|x| x.to_f64().abs()).collect()
}

fn add_abs(acc: &mut [f64], v: &[f64], s: f64) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b * s;
    }
}

/// All three Gaussian base cases at order `ell` as jets of order `order`
/// in `s = -p^2`.
pub fn gauss_leaf_set<T: Real>(
    ev: &Evaluator,
    tier: Tier,
    ell: usize,
    r: [f64; 3],
    p: f64,
    order: usize,
) -> Result<LeafSet<T>> {
    let [r1, r2, r3] = r;
    let top = order_bucket(ell);
    let max_terms = ev.policy.max_terms;
    let p0sq = T::from_f64(p) * T::from_f64(p);
    // p^{-1}, and (2p)^{m+1} built by repeated multiplication by 2p
    let p_inv = Jet::<T>::shifted_power(&p0sq, -1, order);
    let two_p = Jet::<T>::shifted_power(&p0sq, 1, order).scale(&T::from_i64(2));
    let mut two_p_pow = Vec::with_capacity(ell + 1);
    let mut cur = two_p.clone();
    for _ in 0..=ell {
        two_p_pow.push(cur.clone());
        cur = &cur * &two_p;
    }
    // Y(s) = |rs| / (2p)
    let half_p_inv = p_inv.scale(&T::from_f64(0.5));
    let two_over_sqrt_pi = T::from_i64(2) / T::pi().sqrt();

    // bracket jets per line and m: (G part, χ part as coefficient of i)
    let mut bg: Vec<Vec<Jet<T>>> = Vec::with_capacity(4);
    let mut bc: Vec<Vec<Jet<T>>> = Vec::with_capacity(4);
    let mut bmag: Vec<Vec<Vec<f64>>> = Vec::with_capacity(4);
    let mut bases: Vec<T> = Vec::with_capacity(4);
    for &(s2, s3) in &LINES {
        bases.push(-(T::from_f64(s2 * r2) + T::from_f64(s3 * r3)));
        let minus = ExactSum::new(&[-r1, s2 * r2, s3 * r3]);
        let plus = ExactSum::new(&[r1, s2 * r2, s3 * r3]);
        let mut sides = Vec::with_capacity(2);
        for rs in [minus, plus] {
            let key = KernelKey::gauss(tier, p, rs, top);
            let table = ev.kernels.get_or_compute(key, || GaussTable::<T>::compute(p, &rs, top, max_terms))?;
            let y_jet = half_p_inv.scale(&rs.abs().to_t::<T>());
            sides.push(side_jets(&table, rs.is_negative(), &y_jet, ell, order));
        }
        let (lo, hi) = (&sides[0], &sides[1]);
        let mut g_line = Vec::with_capacity(ell + 1);
        let mut c_line = Vec::with_capacity(ell + 1);
        let mut m_line = Vec::with_capacity(ell + 1);
        for m in 0..=ell {
            // G(r-) - G(r+) = -(2p)^{m+1} [σ- E- - σ+ E+]
            let same = lo.sigma_g[m] == hi.sigma_g[m];
            let tail_form = same && lo.u0[m] + hi.u0[m] < lo.e0[m] + hi.e0[m];
            let inner = if tail_form {
                // σ [(E∞ - U-) - (E∞ - U+)] = σ (U+ - U-)
                (&hi.u[m] - &lo.u[m]).scale(&T::from_f64(lo.sigma_g[m]))
            } else {
                let mut j = lo.e[m].scale(&T::from_f64(lo.sigma_g[m]));
                j.add_scaled(&hi.e[m], &T::from_f64(-hi.sigma_g[m]));
                j
            };
            let g = -(&two_p_pow[m] * &inner);
            // χ(r-) - χ(r+) = -(2/√π)(2p)^{m+1} [σ'- M- - σ'+ M+]
            let mut cm = lo.mm[m].scale(&T::from_f64(lo.sigma_chi[m]));
            cm.add_scaled(&hi.mm[m], &T::from_f64(-hi.sigma_chi[m]));
            let c = -(&two_p_pow[m] * &cm).scale(&two_over_sqrt_pi);
            // magnitude of the inputs, not of the (possibly cancelled) bracket
            let tp = abs_jet(&two_p_pow[m]);
            let mut mg = vec![0f64; order + 1];
            let parts: Vec<Vec<f64>> = if tail_form {
                vec![abs_jet(&hi.u[m]), abs_jet(&lo.u[m])]
            } else {
                vec![abs_jet(&hi.e[m]), abs_jet(&lo.e[m])]
            };
            let chi_parts = [abs_jet(&hi.mm[m]), abs_jet(&lo.mm[m])];
            for part in parts.iter() {
                add_abs(&mut mg, &convolve(&tp, part), 1.0);
            }
            for part in chi_parts.iter() {
                add_abs(&mut mg, &convolve(&tp, part), two_over_sqrt_pi.to_f64());
            }
            g_line.push(g);
            c_line.push(c);
            m_line.push(mg);
        }
        bg.push(g_line);
        bc.push(c_line);
        bmag.push(m_line);
    }

    // powers of the line bases, 0^0 = 1
    let base_pow: Vec<Vec<T>> = bases
        .iter()
        .map(|b| {
            let mut v = Vec::with_capacity(ell + 1);
            let mut cur = T::one();
            for _ in 0..=ell {
                v.push(cur.clone());
                cur = cur * b;
            }
            v
        })
        .collect();

    let r1t = T::from_f64(r1);
    let k0 = T::pi().sqrt() / (T::from_i64(16) * T::from_f64(r2) * T::from_f64(r3) * T::from_i64(2).powi(ell as i32));
    let pre_mag = convolve(&abs_jet(&p_inv), &[k0.to_f64().abs()]);

    let mut out: Vec<LeafValue<T>> = Vec::with_capacity(3);
    for variant in BaseCaseVariant::ALL {
        let (signs, phase) = pattern(variant, ell);
        let mut sg = Jet::<T>::zero(order);
        let mut sc = Jet::<T>::zero(order);
        let mut smag = vec![0f64; order + 1];
        for n in 0..=ell / 2 {
            let c1 = binom::<T>(ell, n) * binom::<T>(2 * ell - 2 * n, ell) * r1t.powi(2 * n as i32 - 1 - ell as i32);
            let c1 = if n % 2 == 1 { -c1 } else { c1 };
            for m in 0..=ell - 2 * n {
                let e = ell - 2 * n - m;
                let coef = c1.clone() * binom::<T>(ell - 2 * n, m);
                for li in 0..4 {
                    let w = coef.clone() * &base_pow[li][e] * T::from_f64(signs[li]);
                    if w == T::zero() {
                        continue;
                    }
                    sg.add_scaled(&bg[li][m], &w);
                    sc.add_scaled(&bc[li][m], &w);
                    add_abs(&mut smag, &bmag[li][m], w.to_f64().abs());
                }
            }
        }
        // value = phase * k0 / p * (sg + i sc)
        let pre = p_inv.scale(&k0);
        let vg = &pre * &sg;
        let vc = &pre * &sc;
        let (re, im) = match phase {
            QuarterTurns::ONE => (vg, vc),
            QuarterTurns::MINUS_ONE => (-vg, -vc),
            // i (g + i c) = -c + i g
            QuarterTurns::I => (-vc, vg),
            _ => (vc, -vg),
        };
        let mag = convolve(&pre_mag, &smag);
        out.push(LeafValue { im: re_to_f64(&im), re, mag });
    }
    let mut it = out.into_iter();
    Ok(LeafSet { v: [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()] })
}

fn re_to_f64<T: Real>(j: &Jet<T>) -> Vec<f64> {
    j.to_f64()
}

/// Truncated product of two magnitude series.
fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0f64; n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// One Gaussian base case with the process-wide evaluator.
pub fn gauss_base_case(ell: usize, variant: BaseCaseVariant, radii: &RadiiTriple, p: f64) -> Result<EvalResult> {
    crate::basecase::base_case_eval(global(), DampingKind::Gauss, ell, variant, radii, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_factor_values() {
        let z = SignedRadiusSum::from_value(0.0);
        assert!((g_factor(0, &z, 1.0).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((g_factor(1, &z, 1.0).unwrap() - 2.0).abs() < 1e-15);
        // Γ(1/2, 1) = √π erfc(1)
        let v = g_factor(0, &SignedRadiusSum::from_value(2.0), 1.0).unwrap();
        assert!((v - 0.278_805_585_280_661_98).abs() < 1e-15, "{v}");
    }

    #[test]
    fn chi_parity() {
        let a = chi_factor(2, &SignedRadiusSum::from_value(1.0), 1.0).unwrap();
        let b = chi_factor(2, &SignedRadiusSum::from_value(-1.0), 1.0).unwrap();
        assert_eq!(a, b);
        let a = chi_factor(1, &SignedRadiusSum::from_value(1.0), 1.0).unwrap();
        let b = chi_factor(1, &SignedRadiusSum::from_value(-1.0), 1.0).unwrap();
        assert_eq!(a, -b);
        assert_eq!(chi_factor(0, &SignedRadiusSum::from_value(0.0), 1.0).unwrap(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn expansion_exponents_are_non_negative() {
        for ell in 0..=22 {
            for t in expansion_terms(ell) {
                assert!(t.exponent(ell) >= 0);
            }
        }
    }
}
