//! Nested finite sums for arbitrary `n` under Gaussian damping.
//!
//! Each spherical Bessel function is expanded as a finite sum of
//! exponentials times inverse powers, the angular integrals are done
//! in closed form and what remains are incomplete Gamma functions and a
//! `4F4` per index tuple. The nine inner indices reach the kernels only
//! through four aggregates `(ζ, B, E, H)`, so the binomial and radius
//! weights are first collapsed into per-line convolution tables and
//! the kernels are evaluated once per aggregate tuple.
//!
//! The `4F4` splits by partial fractions in its three distinct
//! `a/(a+n)` ratios into `x^a 2F2(1, a; c, a+1; -x)` pieces, each a
//! positive series in regularized lower incomplete Gamma values.

use num_complex::Complex;

use crate::engine::{climb, global, Evaluator, Graded};
use crate::error::{Error, Result};
use crate::kernels::{note_kernel_calls, thread_kernel_calls};
use crate::specfun::branch::{PhaseSum, QuarterTurns};
use crate::specfun::gamma::{gamma_half, lower_incomplete_gamma};
use crate::specfun::hyper::LatticePair;
use crate::specfun::policy::{current_tier, TierTask};
use crate::specfun::real::Real;
use crate::types::{Damping, Diagnostics, EvalResult, Method, WeightedIntegralSpec};

/// One tuple of the nine inner indices plus `ζ`, with the derived
/// half-integer parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HBIndexState {
    pub zeta: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub g: u32,
    pub h: u32,
    pub m: u32,
    pub t: u32,
    pub u: u32,
    pub v: u32,
    pub alpha: u32,
    pub beta: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub rho: f64,
    /// Same value as `η`, assembled along the `ρ` chain.
    pub phi: f64,
    /// Exponent of `i` that the `ψ` phase collapses from.
    pub tau: i64,
    /// Exponent of the overall `(-1)`.
    pub omega_exp: i64,
    /// Exponent of `2p`.
    pub sigma: i64,
}

impl HBIndexState {
    fn new(n_total: u32, idx: [u32; 10]) -> Self {
        let [zeta, b, c, d, g, h, m, t, u, v] = idx;
        let (zi, bi, ci, di, gi, hi, mi, ti, ui, vi) =
            (zeta as i64, b as i64, c as i64, d as i64, g as i64, h as i64, m as i64, t as i64, u as i64, v as i64);
        let kappa = (n_total as i64 + 2 * bi - ci) as f64 / 2.0;
        let epsilon = (ci + 2 * di - gi - hi - 1) as f64 / 2.0;
        let eta = (gi + 2 * mi - ti - ui - vi - 1) as f64 / 2.0;
        let lambda = kappa + 1.0 + epsilon;
        let phi = (gi + 2 * mi - ti - ui - vi - 1) as f64 / 2.0;
        HBIndexState {
            zeta,
            b,
            c,
            d,
            g,
            h,
            m,
            t,
            u,
            v,
            alpha: n_total - zeta,
            beta: (zi + 2 * bi - ci - 1) as f64 / 2.0,
            epsilon,
            eta,
            kappa,
            lambda,
            rho: lambda + 1.0 + phi,
            phi,
            tau: n_total as i64 + ci + 2 * di + 2 * mi - hi - ti - ui - vi,
            omega_exp: bi + ci + di + gi + mi - ui,
            sigma: 2 * bi + 2 * di + 2 * mi - hi - ti - ui - vi,
        }
    }

    /// Every Gamma argument and partial-fraction denominator is positive.
    pub fn check(&self) -> Result<()> {
        let pos = [
            ("β+1", self.beta + 1.0),
            ("ε+1", self.epsilon + 1.0),
            ("η+1", self.eta + 1.0),
            ("η+ε+2", self.eta + self.epsilon + 2.0),
            ("κ+1", self.kappa + 1.0),
            ("λ-κ", self.lambda - self.kappa),
            ("ρ-λ", self.rho - self.lambda),
            ("α+1", self.alpha as f64 + 1.0),
        ];
        if self.phi != self.eta {
            return Err(Error::Domain(format!("index tuple {self:?} has φ != η")));
        }
        for (name, x) in pos {
            if !(x > 0.0) {
                return Err(Error::Domain(format!("index tuple {self:?} gives {name} = {x}")));
            }
        }
        Ok(())
    }
}

/// All index tuples for orders `ℓ` and power `n`.
pub fn index_states(orders: [i32; 3], n: u32) -> Result<Vec<HBIndexState>> {
    if orders.iter().any(|l| *l < 0) {
        return Err(Error::Domain(format!("orders {orders:?} must be >= 0")));
    }
    let [l1, l2, l3] = orders.map(|l| l as u32);
    let nt = n + l1 + l2 + l3;
    let mut out = Vec::new();
    for zeta in 0..=nt {
        for b in 0..=l3 {
            for c in 0..=2 * b {
                for d in 0..=l2 {
                    for g in 0..=2 * d {
                        for h in 0..=c {
                            for m in 0..=l1 {
                                for t in 0..=2 * m {
                                    for u in 0..=g {
                                        for v in 0..=g - u {
                                            out.push(HBIndexState::new(nt, [zeta, b, c, d, g, h, m, t, u, v]));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The two per-tuple prefactors: `ω = Γ((α+1)/2)/(ε+1)` on the
/// incomplete-Gamma part and `ψ = 2(-i)^{α+1}/((α+1)(κ+1)(λ+1)(ρ+1))` on
/// the hypergeometric part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HBCoefficients {
    pub omega: f64,
    pub psi: Complex<f64>,
}

pub fn coefficients(s: &HBIndexState) -> HBCoefficients {
    let a1 = s.alpha as f64 + 1.0;
    let omega = gamma_half::<f64>(s.alpha + 1) / (s.epsilon + 1.0);
    let mag = 2.0 / (a1 * (s.kappa + 1.0) * (s.lambda + 1.0) * (s.rho + 1.0));
    let psi = QuarterTurns::minus_i_pow(s.alpha as i64 + 1).to_complex() * mag;
    HBCoefficients { omega, psi }
}

fn signed_lower_gamma(a: f64, s: f64, p: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok(0.0);
    }
    let x = (s / (2.0 * p)).powi(2);
    let v = lower_incomplete_gamma(a, x)?;
    let odd = (2.0 * a).round() as i64 % 2 == 1;
    Ok(if odd && s < 0.0 { -v } else { v })
}

/// The incomplete-Gamma brackets `(Z, Y)` of one tuple at a signed
/// radius sum `rs`, with `y = rs/(2p)`, `x = y^2`, `ŝγ(a) = sgn(rs)^{2a} γ(a, x)`:
///
/// `Z = (y^{2(η+ε+2)} ŝγ(β+1) - ŝγ(β+η+ε+3)) / (η+ε+2)`,
/// `Y = (y^{2(η+1)} ŝγ(β+ε+2) - ŝγ(β+η+ε+3)) / (η+1)`.
pub fn z_y_terms(s: &HBIndexState, rs: f64, p: f64) -> Result<(f64, f64)> {
    s.check()?;
    if !(p > 0.0) || !rs.is_finite() {
        return Err(Error::Domain(format!("need p > 0 and finite rs, got p = {p}, rs = {rs}")));
    }
    let y = rs / (2.0 * p);
    let top = s.beta + s.eta + s.epsilon + 3.0;
    let e1 = s.eta + s.epsilon + 2.0;
    let e2 = s.eta + 1.0;
    let g_top = signed_lower_gamma(top, rs, p)?;
    let z = (y.powi((2.0 * e1).round() as i32) * signed_lower_gamma(s.beta + 1.0, rs, p)? - g_top) / e1;
    let yv = (y.powi((2.0 * e2).round() as i32) * signed_lower_gamma(s.beta + s.epsilon + 2.0, rs, p)? - g_top) / e2;
    Ok((z, yv))
}

/// Tables at one unsigned radius sum `|s|`, shared by the two signed
/// sums `±|s|` that occur across the four lines.
struct Core<T> {
    zero: bool,
    /// `|y|^e`, `y = s/(2p)`.
    apow: Vec<T>,
    apow_f: Vec<f64>,
    /// `γ(a2/2, y^2)`, index `a2`.
    sg: Vec<T>,
    sg_f: Vec<f64>,
    lat: Option<LatticePair<T>>,
    /// `x^a 2F2(1, a; (α+3)/2, a+1; -x)` by `[α][a2]`, filled on demand.
    phi: Vec<Vec<Option<(T, f64)>>>,
    /// Lattice terms by `a2` and the `Φ` weights by `α`.
    terms: Vec<Option<Vec<T>>>,
    weights: Vec<Vec<T>>,
    calls: u64,
}

impl<T: Real> Core<T> {
    fn new(abs_s: &T, two_p: &T, a2_max: u32, n_total: u32, max_terms: usize) -> Result<Self> {
        let zero = abs_s.to_f64() == 0.0;
        let ay = abs_s.clone() / two_p;
        let len = a2_max as usize + 2;
        let mut apow = Vec::with_capacity(len);
        let mut b = T::one();
        for _ in 0..len {
            apow.push(b.clone());
            b = b * &ay;
        }
        let apow_f = apow.iter().map(|x| x.to_f64()).collect();
        let mut sg = vec![T::zero(); len];
        let mut lat = None;
        if !zero {
            let x = ay.clone() * &ay;
            let l = LatticePair::new(&x, a2_max + 2, a2_max as i32 / 2 + 2, max_terms)?;
            for (a2, slot) in sg.iter_mut().enumerate().skip(1) {
                *slot = l.p(a2 as u32) * gamma_half::<T>(a2 as u32);
            }
            lat = Some(l);
        }
        let sg_f = sg.iter().map(|x| x.to_f64()).collect();
        let phi = vec![vec![None; len]; n_total as usize + 1];
        let terms = vec![None; len];
        let weights = vec![Vec::new(); n_total as usize + 1];
        Ok(Core { zero, apow, apow_f, sg, sg_f, lat, phi, terms, weights, calls: 1 })
    }

    fn phi(&mut self, alpha: u32, a2: u32) -> (T, f64) {
        let Some(lat) = &self.lat else { return (T::zero(), 0.0) };
        if let Some(v) = &self.phi[alpha as usize][a2 as usize] {
            return v.clone();
        }
        self.calls += 1;
        let terms = self.terms[a2 as usize].get_or_insert_with(|| lat.terms(a2));
        // (c-1)/(c-1+k) with c = (α+3)/2
        let w = &mut self.weights[alpha as usize];
        let cm1 = T::ratio(alpha as i64 + 1, 2);
        while w.len() < terms.len() {
            let k = w.len() as i64;
            w.push(cm1.clone() / (cm1.clone() + T::from_i64(k)));
        }
        let mut acc = T::zero();
        for (t, wk) in terms.iter().zip(w.iter()) {
            acc += &(t.clone() * wk);
        }
        let v = acc * T::ratio(a2 as i64, 2);
        let f = v.to_f64();
        self.phi[alpha as usize][a2 as usize] = Some((v.clone(), f));
        (v, f)
    }
}

fn binom_f(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Dense table with a shadow of absolute values.
#[derive(Clone)]
struct Table<T> {
    dims: (usize, usize),
    v: Vec<T>,
    a: Vec<f64>,
}

impl<T: Real> Table<T> {
    fn new(n0: usize, n1: usize) -> Self {
        Table { dims: (n0, n1), v: vec![T::zero(); n0 * n1], a: vec![0.0; n0 * n1] }
    }
    fn add(&mut self, i: usize, j: usize, x: T, ax: f64) {
        let k = i * self.dims.1 + j;
        self.v[k] += &x;
        self.a[k] += ax;
    }
    fn get(&self, i: usize, j: usize) -> (&T, f64) {
        let k = i * self.dims.1 + j;
        (&self.v[k], self.a[k])
    }
}

/// Collapsed index weights of one line `(s2, s3)`, by `[B][E][H]`.
struct LineWeights<T> {
    dims: [usize; 3],
    v: Vec<T>,
    a: Vec<f64>,
}

fn line_weights<T: Real>(l: [u32; 3], r: &[T; 3], p: &T, s2: i32, s3: i32) -> LineWeights<T> {
    let [l1, l2, l3] = l;
    let two_p = p.clone() * T::from_i64(2);
    let base = -(r[1].clone() * T::from_i64(s2 as i64)) - r[2].clone() * T::from_i64(s3 as i64);
    let w = base / &two_p;
    let q_h = -(r[2].clone() * T::from_i64(s3 as i64)) / &two_p;
    let q_u = -q_h.clone();
    let powers = |x: &T, n: usize| -> Vec<T> {
        let mut out = Vec::with_capacity(n + 1);
        let mut c = T::one();
        for _ in 0..=n {
            out.push(c.clone());
            c = c * x;
        }
        out
    };
    let wp = powers(&w, (2 * l1.max(l2)) as usize + 1);
    let qh = powers(&q_h, 2 * l3 as usize + 1);
    let qu = powers(&q_u, 2 * l2 as usize + 1);
    let ratio = |ri: &T| (two_p.clone() / ri).powi(2);

    // (b, c, h) -> [B = 2b - c][c - h]
    let n_b = 2 * l3 as usize + 1;
    let mut a2 = Table::<T>::new(n_b, n_b);
    let k3 = ratio(&r[2]);
    let mut kb = T::one();
    for b in 0..=l3 {
        for c in 0..=2 * b {
            let sign = if (b + c) % 2 == 0 { 1.0 } else { -1.0 };
            let f = binom_f(l3, b) * binom_f(2 * b, c) * sign;
            for h in 0..=c {
                let ch = binom_f(c, h);
                let x = kb.clone() * &qh[h as usize] * T::from_f64(f * ch);
                let ax = x.to_f64().abs();
                a2.add((2 * b - c) as usize, (c - h) as usize, x, ax);
            }
        }
        kb = kb * &k3;
    }

    // (d, g, u, v) -> [2d - g][g - u - v]
    let n_g = 2 * l2 as usize + 1;
    let mut gt = Table::<T>::new(n_g, n_g);
    let k2 = ratio(&r[1]);
    let mut kd = T::one();
    for d in 0..=l2 {
        for g in 0..=2 * d {
            let sign = if (d + g) % 2 == 0 { 1.0 } else { -1.0 };
            let f = binom_f(l2, d) * binom_f(2 * d, g) * sign;
            for u in 0..=g {
                for v in 0..=g - u {
                    let cc = binom_f(g, u) * binom_f(g - u, v);
                    let x = kd.clone() * &qu[u as usize] * &wp[v as usize] * T::from_f64(f * cc);
                    let ax = x.to_f64().abs();
                    gt.add((2 * d - g) as usize, (g - u - v) as usize, x, ax);
                }
            }
        }
        kd = kd * &k2;
    }

    // (m, t) -> [2m - t]
    let n_m = 2 * l1 as usize + 1;
    let mut mt = Table::<T>::new(1, n_m);
    let k1 = ratio(&r[0]);
    let mut km = T::one();
    for m in 0..=l1 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for t in 0..=2 * m {
            let f = binom_f(l1, m) * binom_f(2 * m, t) * sign;
            let x = km.clone() * &wp[t as usize] * T::from_f64(f);
            let ax = x.to_f64().abs();
            mt.add(0, (2 * m - t) as usize, x, ax);
        }
        km = km * &k1;
    }

    let n_e = n_b + n_g - 1;
    let n_h = n_g + n_m - 1;
    let dims = [n_b, n_e, n_h];
    let mut v = vec![T::zero(); n_b * n_e * n_h];
    let mut a = vec![0.0; n_b * n_e * n_h];
    let line = T::from_i64((s2 * s3) as i64);
    // G * M first: [e1b][H]
    let mut gm = Table::<T>::new(n_g, n_h);
    for e1b in 0..n_g {
        for h1a in 0..n_g {
            let (gv, ga) = gt.get(e1b, h1a);
            if ga == 0.0 {
                continue;
            }
            for h1b in 0..n_m {
                let (mv, ma) = mt.get(0, h1b);
                gm.add(e1b, h1a + h1b, gv.clone() * mv, ga * ma);
            }
        }
    }
    for bb in 0..n_b {
        for e1a in 0..n_b {
            let (av, aa) = a2.get(bb, e1a);
            if aa == 0.0 {
                continue;
            }
            for e1b in 0..n_g {
                for hh in 0..n_h {
                    let (gv, ga) = gm.get(e1b, hh);
                    if ga == 0.0 {
                        continue;
                    }
                    let k = (bb * n_e + e1a + e1b) * n_h + hh;
                    v[k] += &(av.clone() * gv * &line);
                    a[k] += aa * ga;
                }
            }
        }
    }
    LineWeights { dims, v, a }
}

/// Per-`ζ` real parts of the two integrals, before the common
/// `(p^3/(r1 r2 r3)) (2p)^ζ` factor.
struct ZetaSums<T> {
    pl: Vec<T>,
    hg: Vec<T>,
    pl_mag: Vec<f64>,
    hg_mag: Vec<f64>,
    calls: u64,
}

/// A value and the running sum of absolute contributions.
#[derive(Clone)]
struct Acc<T> {
    v: T,
    a: f64,
}

impl<T: Real> Acc<T> {
    fn zeros(n: usize) -> Vec<Self> {
        vec![Acc { v: T::zero(), a: 0.0 }; n]
    }
    fn add(&mut self, x: T, ax: f64) {
        self.v += &x;
        self.a += ax;
    }
}

/// Kernel terms contracted over the indices they do not depend on, for
/// one line and one signed radius sum. Slots are keyed by `B`,
/// `J = B + E` and `K = B + E + H`.
struct Contracted<T> {
    /// Incomplete-Gamma part, multiplying `γ` at `ζ+B+1`, `ζ+J+2`, `ζ+K+3`.
    u: [Vec<Acc<T>>; 3],
    /// Hypergeometric part, multiplying `Φ` at `n+B+2`, `n+J+3`, `n+K+4`.
    v: [Vec<Acc<T>>; 3],
}

/// Rational weights of one `(B, E, H)` slot: the `Z`, `Y` and shared
/// `γ` weights, then the three partial-fraction coefficients over `a`.
struct SlotRatios<T> {
    r: [T; 6],
    f: [f64; 6],
}

fn slot_ratios<T: Real>(dims: [usize; 3], nt: u32) -> Vec<SlotRatios<T>> {
    let [n_b, n_e, n_h] = dims;
    let mut out = Vec::with_capacity(n_b * n_e * n_h);
    for bb in 0..n_b {
        for e1 in 0..n_e {
            for h1 in 0..n_h {
                let (hp, ep, hep) = (h1 as i64 + 1, e1 as i64 + 1, (e1 + h1) as i64 + 2);
                let a_r = nt as i64 + (bb + e1 + h1) as i64 + 4;
                let a_l = nt as i64 + (bb + e1) as i64 + 3;
                let a_k = nt as i64 + bb as i64 + 2;
                // 2/(ε+1) times 1/(η+ε+2) and 1/(η+1)
                let (nz, dz) = (4, ep * hep);
                let (ny, dy) = (4, ep * hp);
                let r = [
                    T::ratio(nz, dz),
                    T::ratio(-ny, dy),
                    T::ratio(4 * (hep - hp), dz * hp),
                    T::ratio(8, hep * ep * a_k),
                    T::ratio(-8, hp * ep * a_l),
                    T::ratio(8, hp * hep * a_r),
                ];
                let f = [
                    nz as f64 / dz as f64,
                    ny as f64 / dy as f64,
                    (4 * (hep - hp)) as f64 / (dz * hp) as f64,
                    8.0 / (hep * ep * a_k) as f64,
                    8.0 / (hp * ep * a_l) as f64,
                    8.0 / (hp * hep * a_r) as f64,
                ];
                out.push(SlotRatios { r, f });
            }
        }
    }
    out
}

fn contract<T: Real>(lw: &LineWeights<T>, rat: &[SlotRatios<T>], core: &Core<T>, sigma: i32) -> Contracted<T> {
    let [n_b, n_e, n_h] = lw.dims;
    let n_k = n_b + n_e + n_h;
    let mut u = [Acc::zeros(n_k), Acc::zeros(n_k), Acc::zeros(n_k)];
    let mut v = [Acc::zeros(n_k), Acc::zeros(n_k), Acc::zeros(n_k)];
    if core.zero {
        return Contracted { u, v };
    }
    for bb in 0..n_b {
        for e1 in 0..n_e {
            for h1 in 0..n_h {
                let k = (bb * n_e + e1) * n_h + h1;
                let wa = lw.a[k];
                if wa == 0.0 {
                    continue;
                }
                let kk = bb + e1 + h1;
                let w = if sigma < 0 && kk % 2 == 1 { -lw.v[k].clone() } else { lw.v[k].clone() };
                let SlotRatios { r, f } = &rat[k];
                let x1 = w.clone() * &core.apow[e1 + h1 + 2];
                let a1 = wa * core.apow_f[e1 + h1 + 2];
                let x2 = w.clone() * &core.apow[h1 + 1];
                let a2 = wa * core.apow_f[h1 + 1];
                u[0][bb].add(x1.clone() * &r[0], a1 * f[0]);
                u[1][bb + e1].add(x2.clone() * &r[1], a2 * f[1]);
                u[2][kk].add(w.clone() * &r[2], wa * f[2]);
                v[0][bb].add(x1 * &r[3], a1 * f[3]);
                v[1][bb + e1].add(x2 * &r[4], a2 * f[4]);
                v[2][kk].add(w * &r[5], wa * f[5]);
            }
        }
    }
    Contracted { u, v }
}

fn zeta_sums<T: Real>(orders: [u32; 3], n: u32, radii: [f64; 3], p: f64, max_terms: usize) -> Result<ZetaSums<T>> {
    let nt = n + orders.iter().sum::<u32>();
    let r = radii.map(T::from_f64);
    let pt = T::from_f64(p);
    let two_p = pt.clone() * T::from_i64(2);
    let [l1, l2, l3] = orders;
    let a2_max = nt + 4 * (l1 + l2 + l3) + 6;
    let nz = nt as usize + 1;
    let mut pl = Acc::<T>::zeros(nz);
    let mut hg = Acc::<T>::zeros(nz);
    let lines = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
    // rp of each line; rm of a line is minus rp of the opposite line
    let mut cores = Vec::with_capacity(4);
    let mut signs = [0i32; 4];
    for (i, (s2, s3)) in lines.iter().enumerate() {
        let mid = r[1].clone() * T::from_i64(*s2 as i64) + r[2].clone() * T::from_i64(*s3 as i64);
        let rp = r[0].clone() + &mid;
        signs[i] = if rp.to_f64() < 0.0 { -1 } else { 1 };
        cores.push(Core::<T>::new(&rp.abs(), &two_p, a2_max, nt, max_terms)?);
    }
    let omega: Vec<T> = (0..=nt).map(|z| gamma_half::<T>(nt - z + 1)).collect();
    let mut rat: Vec<SlotRatios<T>> = Vec::new();
    for (i, (s2, s3)) in lines.iter().enumerate() {
        let lw = line_weights(orders, &r, &pt, *s2, *s3);
        if rat.is_empty() {
            rat = slot_ratios(lw.dims, nt);
        }
        for (ci, sigma, side) in [(i, signs[i], 1), (3 - i, -signs[3 - i], -1)] {
            let con = contract(&lw, &rat, &cores[ci], sigma);
            let core = &mut cores[ci];
            if core.zero {
                continue;
            }
            for zeta in 0..=nt {
                let zu = zeta as usize;
                // σ^{ζ+1} on the incomplete-Gamma part
                let flip = side * if sigma < 0 && (zeta + 1) % 2 == 1 { -1 } else { 1 };
                let mut s = T::zero();
                let mut sa = 0.0;
                for (j, off) in [(0usize, 1usize), (1, 2), (2, 3)] {
                    for (kk, c) in con.u[j].iter().enumerate() {
                        if c.a == 0.0 {
                            continue;
                        }
                        let a2 = zu + kk + off;
                        s += &(c.v.clone() * &core.sg[a2]);
                        sa += c.a * core.sg_f[a2];
                    }
                }
                let s = s * &omega[zu];
                let of = omega[zu].to_f64();
                pl[zu].add(if flip < 0 { -s } else { s }, sa * of);

                let alpha = nt - zeta;
                let flip = side * if sigma < 0 && nt % 2 == 1 { -1 } else { 1 };
                let mut s = T::zero();
                let mut sa = 0.0;
                for (j, off) in [(0usize, 2u32), (1, 3), (2, 4)] {
                    for (kk, c) in con.v[j].iter().enumerate() {
                        if c.a == 0.0 {
                            continue;
                        }
                        let (f, ff) = core.phi(alpha, nt + kk as u32 + off);
                        s += &(c.v.clone() * &f);
                        sa += c.a * ff;
                    }
                }
                let s = s * T::ratio(2, alpha as i64 + 1);
                let sa = sa * 2.0 / (alpha as f64 + 1.0);
                hg[zu].add(if flip < 0 { -s } else { s }, sa);
            }
        }
    }
    Ok(ZetaSums {
        pl: pl.iter().map(|x| x.v.clone()).collect(),
        pl_mag: pl.iter().map(|x| x.a).collect(),
        hg: hg.iter().map(|x| x.v.clone()).collect(),
        hg_mag: hg.iter().map(|x| x.a).collect(),
        calls: cores.iter().map(|c| c.calls).sum(),
    })
}

fn check_spec(ev: &Evaluator, spec: &WeightedIntegralSpec) -> Result<f64> {
    spec.validate()?;
    let Damping::Gauss(_) = spec.damping else {
        return Err(Error::Domain("the nested-sum route needs Gaussian damping".into()));
    };
    let p = spec.damping.canonical()?.p();
    if !ev.config.hb_override_caps {
        let lmax = *spec.orders.iter().max().unwrap();
        if lmax > ev.config.hb_max_order || spec.n > ev.config.hb_max_power {
            return Err(Error::CostLimit(format!(
                "orders {:?} with n = {} exceed the nested-sum caps l <= {}, n <= {}",
                spec.orders, spec.n, ev.config.hb_max_order, ev.config.hb_max_power
            )));
        }
    }
    Ok(p)
}

fn orders_u32(spec: &WeightedIntegralSpec) -> [u32; 3] {
    spec.orders.map(|l| l as u32)
}

/// `(value, im, magnitude, unit roundoff, kernel calls)`.
type HbOut = (f64, f64, f64, f64, u64);

struct HbTask<'a> {
    ev: &'a Evaluator,
    orders: [u32; 3],
    n: u32,
    radii: [f64; 3],
    p: f64,
}

/// `2^{-L-4} p^3 Π r_i^{ℓ_i - 1} / Π ℓ_i!`
fn prefactor<T: Real>(orders: [u32; 3], radii: [f64; 3], p: f64) -> T {
    let l: u32 = orders.iter().sum();
    let mut f = T::one() / T::from_i64(2).powi(l as i32 + 4) * T::from_f64(p).powi(3);
    for i in 0..3 {
        f = f * T::from_f64(radii[i]).powi(orders[i] as i32 - 1);
        for k in 2..=orders[i] {
            f = f / T::from_i64(k as i64);
        }
    }
    f
}

impl TierTask for HbTask<'_> {
    type Output = Graded<HbOut>;

    fn run<T: Real>(&self) -> Result<Self::Output> {
        let tier = current_tier::<T>();
        let nt = self.n + self.orders.iter().sum::<u32>();
        let zs = zeta_sums::<T>(self.orders, self.n, self.radii, self.p, self.ev.policy.max_terms)?;
        let pref = prefactor::<T>(self.orders, self.radii, self.p) / T::from_f64(self.p).powi(nt as i32 + 1);
        let mut acc = PhaseSum::<T>::new();
        let mut mag = 0.0;
        for zeta in 0..=nt {
            let alpha = nt - zeta;
            let c = pref.clone() * T::from_f64(binom_f(nt, zeta));
            let ca = c.to_f64().abs();
            let ph = QuarterTurns::i_pow(zeta as i64);
            acc.add(ph, &(zs.pl[zeta as usize].clone() * &c));
            let phh = ph.mul(QuarterTurns::minus_i_pow(alpha as i64 + 1)).mul(QuarterTurns::MINUS_ONE);
            acc.add(phh, &(zs.hg[zeta as usize].clone() * &c));
            mag += ca * (zs.pl_mag[zeta as usize] + zs.hg_mag[zeta as usize]);
        }
        let tot = acc.total();
        let value = tot.re.to_f64();
        let im = tot.im.to_f64();
        // every input is exact in T, so the tier's own roundoff applies
        let u = tier.unit_roundoff();
        let bound = self.ev.config.error_constant * u * mag;
        let accurate = bound <= self.ev.policy.tolerance * value.abs();
        let real = im.abs() <= hb_reality_bound(value).max(bound);
        Ok(Graded { out: (value, im, mag, u, zs.calls), accurate, real })
    }
}

/// Reality bound of the nested-sum route.
pub fn hb_reality_bound(value: f64) -> f64 {
    1e-10f64.max(1e-8 * value.abs())
}

/// `∫ k^n e^{-(pk)^2} j_l1 j_l2 j_l3 dk` by the nested sums, any `n >= 0`.
pub fn evaluate_hb_with(ev: &Evaluator, spec: &WeightedIntegralSpec) -> Result<EvalResult> {
    let p = check_spec(ev, spec)?;
    let calls0 = thread_kernel_calls();
    let task = HbTask { ev, orders: orders_u32(spec), n: spec.n, radii: spec.radii.as_array(), p };
    let c = climb(&ev.policy, &task)?;
    let (value, im, mag, u, calls) = c.out;
    note_kernel_calls(calls);
    if !c.real {
        return Err(Error::RealityViolation { value, residual: im.abs(), bound: hb_reality_bound(value) });
    }
    let mut flags = Vec::new();
    if !c.accurate {
        flags.push("precision-exhausted".to_string());
    }
    Ok(EvalResult {
        value,
        method: Method::HankelBowman,
        im_residual: im,
        error_estimate: ev.config.error_constant * u * mag,
        diagnostics: Diagnostics {
            base_cases: 0,
            escalations: c.escalations,
            precision: c.tier.label(),
            kernel_calls: thread_kernel_calls() - calls0,
            cancellation: if value != 0.0 { mag / value.abs() } else { f64::INFINITY },
            flags,
        },
    })
}

/// [`evaluate_hb_with`] on the process-wide evaluator.
pub fn evaluate_hb(spec: &WeightedIntegralSpec) -> Result<EvalResult> {
    evaluate_hb_with(global(), spec)
}

struct PartTask {
    orders: [u32; 3],
    n: u32,
    radii: [f64; 3],
    p: f64,
    zeta: u32,
    max_terms: usize,
    tolerance: f64,
    error_constant: f64,
}

impl TierTask for PartTask {
    type Output = Graded<(f64, f64)>;

    fn run<T: Real>(&self) -> Result<Self::Output> {
        let zs = zeta_sums::<T>(self.orders, self.n, self.radii, self.p, self.max_terms)?;
        let [r1, r2, r3] = self.radii;
        let k = self.p.powi(3) / (r1 * r2 * r3) * (2.0 * self.p).powi(self.zeta as i32);
        let z = self.zeta as usize;
        let u = current_tier::<T>().unit_roundoff();
        let pl = zs.pl[z].to_f64();
        let hg = zs.hg[z].to_f64();
        let ok = |v: f64, m: f64| self.error_constant * u * m <= self.tolerance * v.abs().max(1e-300);
        let accurate = ok(pl, zs.pl_mag[z]) && ok(hg, zs.hg_mag[z]);
        Ok(Graded { out: (k * pl, k * hg), accurate, real: true })
    }
}

fn parts(ev: &Evaluator, spec: &WeightedIntegralSpec, zeta: u32) -> Result<(f64, f64, u32)> {
    let p = check_spec(ev, spec)?;
    let nt = spec.n + orders_u32(spec).iter().sum::<u32>();
    if zeta > nt {
        return Err(Error::Domain(format!("ζ = {zeta} exceeds n + L = {nt}")));
    }
    let task = PartTask {
        orders: orders_u32(spec),
        n: spec.n,
        radii: spec.radii.as_array(),
        p,
        zeta,
        max_terms: ev.policy.max_terms,
        tolerance: ev.policy.tolerance,
        error_constant: ev.config.error_constant,
    };
    let c = climb(&ev.policy, &task)?;
    Ok((c.out.0, c.out.1, nt - zeta))
}

/// Power-law part `I_pl(ζ)` of the nested-sum decomposition: the
/// `k`-integral of `e^{-(pk)^2} k^ζ` against the angular weights,
/// normalized so that
/// `f = 2^{-L-4} Π r^ℓ/Π ℓ! Σ_ζ C(n+L, ζ) (i/(2p^2))^ζ p^{-(α+1)} (I_pl - I_hg)`.
pub fn i_pl(spec: &WeightedIntegralSpec, zeta: u32) -> Result<Complex<f64>> {
    let (pl, _, _) = parts(global(), spec, zeta)?;
    Ok(Complex::new(pl, 0.0))
}

/// Hypergeometric part `I_hg(ζ)`, carrying the phase `(-i)^{α+1}`.
pub fn i_hg(spec: &WeightedIntegralSpec, zeta: u32) -> Result<Complex<f64>> {
    let (_, hg, alpha) = parts(global(), spec, zeta)?;
    Ok(QuarterTurns::minus_i_pow(alpha as i64 + 1).to_complex() * hg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_counts_and_positivity() {
        let s = index_states([1, 1, 1], 2).unwrap();
        // ζ: 6, (b,c,h): 1+1+2+3 = 7, (d,g,u,v): 1+1+3+6 = 11, (m,t): 4
        assert_eq!(s.len(), 6 * 7 * 11 * 4);
        for st in &s {
            st.check().unwrap();
            assert!(st.rho > st.lambda && st.lambda > st.kappa);
        }
    }

    #[test]
    fn z_y_vanish_at_zero_radius_sum() {
        let s = index_states([0, 0, 0], 2).unwrap()[0];
        assert_eq!(z_y_terms(&s, 0.0, 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn omega_is_gamma_ratio() {
        let s = index_states([0, 0, 0], 0).unwrap()[0];
        let c = coefficients(&s);
        // α = 0, ε = -1/2
        assert!((c.omega - 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }
}
