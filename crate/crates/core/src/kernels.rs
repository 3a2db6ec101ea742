//! Special-function tables shared between base cases, grid points and
//! repeated evaluations.
//!
//! Every base case reads its special functions from a small number of
//! arguments: `R = (-ip^2 + u)/r1` with `u = ±r2 ± r3` for exponential
//! damping and `rs = ±r1 ± r2 ± r3` for Gaussian damping. The store keys
//! those arguments exactly (signed radii summed in double-double after
//! sorting), so two grid points that need the same argument share one
//! kernel evaluation and every path computes bit-identical tables.

use std::any::Any;
use std::cell::Cell;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_complex::Complex;

use crate::error::Result;
use crate::specfun::dd::Dd;
use crate::specfun::gamma::{gamma_half, upper_gamma_ladder};
use crate::specfun::hyper::{dawson, dawson_moments, LatticePair};
use crate::specfun::legendre::legendre_q_sequence_t;
use crate::specfun::policy::Tier;
use crate::specfun::real::Real;

thread_local! {
    static THREAD_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Kernel evaluations performed on the current thread so far.
pub fn thread_kernel_calls() -> u64 {
    THREAD_CALLS.with(|c| c.get())
}

/// Records `n` kernel evaluations made outside the shared store.
pub(crate) fn note_kernel_calls(n: u64) {
    THREAD_CALLS.with(|c| c.set(c.get() + n));
}

/// A sum of signed radii kept to double-double accuracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactSum {
    hi: u64,
    lo: u64,
}

impl ExactSum {
    /// Sums the terms in a canonical order so that any permutation of the
    /// same multiset gives the same key.
    pub fn new(terms: &[f64]) -> Self {
        let mut t: Vec<f64> = terms.to_vec();
        t.sort_by(|a, b| a.total_cmp(b));
        let mut acc = Dd::from_f64(0.0);
        for x in t {
            acc = acc + Dd::from_f64(x);
        }
        // normalize -0 so that exact zeros share one key
        let hi = if acc.hi == 0.0 { 0.0 } else { acc.hi };
        let lo = if acc.lo == 0.0 { 0.0 } else { acc.lo };
        ExactSum { hi: hi.to_bits(), lo: lo.to_bits() }
    }

    pub fn hi(&self) -> f64 {
        f64::from_bits(self.hi)
    }

    pub fn lo(&self) -> f64 {
        f64::from_bits(self.lo)
    }

    pub fn to_f64(&self) -> f64 {
        self.hi() + self.lo()
    }

    pub fn to_t<T: Real>(&self) -> T {
        T::from_f64(self.hi()) + T::from_f64(self.lo())
    }

    pub fn negated(&self) -> Self {
        let n = |b: u64| {
            let v = f64::from_bits(b);
            if v == 0.0 { 0f64.to_bits() } else { (-v).to_bits() }
        };
        ExactSum { hi: n(self.hi), lo: n(self.lo) }
    }

    pub fn is_negative(&self) -> bool {
        self.hi() < 0.0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() { self.negated() } else { *self }
    }
}

/// Identifies one kernel table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KernelKey {
    /// `Q_0 … Q_top` at `(-ip^2 + u)/r1`.
    Legendre { tier: u32, p: u64, r1: u64, u: ExactSum, top: u32 },
    /// Gaussian moments at `|rs| / 2p`.
    Gauss { tier: u32, p: u64, rs: ExactSum, top: u32 },
}

impl KernelKey {
    pub fn legendre(tier: Tier, p: f64, r1: f64, u: ExactSum, top: usize) -> Self {
        KernelKey::Legendre { tier: tier.id(), p: p.to_bits(), r1: r1.to_bits(), u, top: top as u32 }
    }

    pub fn gauss(tier: Tier, p: f64, rs: ExactSum, top: usize) -> Self {
        KernelKey::Gauss { tier: tier.id(), p: p.to_bits(), rs: rs.abs(), top: top as u32 }
    }
}

/// Orders are computed in blocks so that tables for nearby maximum orders
/// coincide.
pub fn order_bucket(max: usize) -> usize {
    max.div_ceil(8).max(1) * 8
}

/// Legendre table.
#[derive(Clone, Debug)]
pub struct LegendreTable<T> {
    pub z: Complex<T>,
    pub q: Vec<Complex<T>>,
}

impl<T: Real> LegendreTable<T> {
    pub fn compute(p: f64, r1: f64, u: &ExactSum, top: usize, max_terms: usize) -> Result<Self> {
        let _ = max_terms;
        let pt = T::from_f64(p);
        let r1t = T::from_f64(r1);
        let z = Complex::new(u.to_t::<T>() / &r1t, -(pt.clone() * &pt) / &r1t);
        let q = legendre_q_sequence_t(top, &z)?;
        Ok(LegendreTable { z, q })
    }
}

/// Gaussian moment table at `Y = |rs| / 2p`, orders `m = 0..=top`.
///
/// `e[m] = ∫_0^Y y^m e^{-y^2} dy`, `u[m] = ∫_Y^∞ y^m e^{-y^2} dy` and
/// `mm[m] = ∫_0^Y y^m F(y) dy` with `F` Dawson's integral.
#[derive(Clone, Debug)]
pub struct GaussTable<T> {
    pub y: T,
    pub e: Vec<T>,
    pub u: Vec<T>,
    pub mm: Vec<T>,
    /// `F(Y)`.
    pub dawson: T,
    /// `e^{-Y^2}`.
    pub gauss: T,
}

impl<T: Real> GaussTable<T> {
    pub fn compute(p: f64, rs: &ExactSum, top: usize, max_terms: usize) -> Result<Self> {
        let y = rs.abs().to_t::<T>() / (T::from_f64(p) * T::from_i64(2));
        let x = y.clone() * &y;
        let half = T::from_f64(0.5);
        let n = top + 1;
        let mut e = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        if y.to_f64() == 0.0 {
            for m in 0..n {
                e.push(T::zero());
                u.push(gamma_half::<T>(m as u32 + 1) * &half);
            }
        } else {
            let lat = LatticePair::new(&x, n as u32 + 1, 0, max_terms)?;
            let even = upper_gamma_ladder(1, n.div_ceil(2), &x, max_terms)?;
            let odd = upper_gamma_ladder(2, n / 2 + 1, &x, max_terms)?;
            for m in 0..n {
                let a2 = m as u32 + 1;
                e.push(lat.p(a2) * gamma_half::<T>(a2) * &half);
                let up = if m % 2 == 0 { &even[m / 2] } else { &odd[m / 2] };
                u.push(up.clone() * &half);
            }
        }
        let mm = dawson_moments(top, &y, max_terms)?;
        let dawson = dawson(&y, max_terms)?;
        let gauss = (-x).exp();
        Ok(GaussTable { y, e, u, mm, dawson, gauss })
    }
}

type Entry = Arc<dyn Any + Send + Sync>;

/// Thread-safe cache of kernel tables with an evaluation counter.
pub struct KernelStore {
    map: Mutex<HashMap<KernelKey, Entry>>,
    calls: AtomicU64,
    capacity: usize,
}

impl Default for KernelStore {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for KernelStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelStore").field("calls", &self.calls()).finish()
    }
}

impl KernelStore {
    pub fn new() -> Self {
        KernelStore { map: Mutex::new(HashMap::new()), calls: AtomicU64::new(0), capacity: 400_000 }
    }

    /// Kernel tables computed by this store.
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.lock().unwrap().clear();
    }

    pub fn contains(&self, key: &KernelKey) -> bool {
        self.map.lock().unwrap().contains_key(key)
    }

    /// Returns the cached table or computes and inserts it. Concurrent
    /// duplicate computation is possible and harmless: tables are pure
    /// functions of their key.
    pub fn get_or_compute<V, F>(&self, key: KernelKey, f: F) -> Result<Arc<V>>
    where
        V: Any + Send + Sync,
        F: FnOnce() -> Result<V>,
    {
        if let Some(e) = self.map.lock().unwrap().get(&key) {
            if let Ok(v) = e.clone().downcast::<V>() {
                return Ok(v);
            }
        }
        let v = Arc::new(f()?);
        self.calls.fetch_add(1, Ordering::Relaxed);
        THREAD_CALLS.with(|c| c.set(c.get() + 1));
        let mut map = self.map.lock().unwrap();
        if map.len() >= self.capacity {
            map.clear();
        }
        map.insert(key, v.clone() as Entry);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sum_is_permutation_invariant() {
        let a = ExactSum::new(&[0.7, -1.3, 2.5]);
        let b = ExactSum::new(&[2.5, 0.7, -1.3]);
        assert_eq!(a, b);
        assert_eq!(ExactSum::new(&[1.0, -1.0]), ExactSum::new(&[-1.0, 1.0]));
        assert_eq!(ExactSum::new(&[1.0, -1.0]).to_f64(), 0.0);
    }

    #[test]
    fn gauss_table_pieces_add_up() {
        // e + u is the complete half moment Γ((m+1)/2)/2
        let t = GaussTable::<f64>::compute(0.8, &ExactSum::new(&[1.3, 0.7, 2.5]), 8, 10_000).unwrap();
        for m in 0..=8u32 {
            let total = gamma_half::<f64>(m + 1) / 2.0;
            let s = t.e[m as usize] + t.u[m as usize];
            assert!((s - total).abs() < 1e-14 * total, "m={m}");
        }
    }

    #[test]
    fn store_counts_unique_tables() {
        let s = KernelStore::new();
        let k = KernelKey::gauss(Tier::Double, 1.0, ExactSum::new(&[1.0, 1.0, 1.0]), 8);
        for _ in 0..3 {
            s.get_or_compute(k.clone(), || GaussTable::<f64>::compute(1.0, &ExactSum::new(&[1.0, 1.0, 1.0]), 8, 1000))
                .unwrap();
        }
        assert_eq!(s.calls(), 1);
    }
}
