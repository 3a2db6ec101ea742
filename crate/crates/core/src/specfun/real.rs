//! Scalar abstraction shared by every kernel.
//!
//! Kernels are written once against [`Real`] and instantiated for `f64`,
//! the double-double [`Dd`](super::dd::Dd) and the MPFR-backed
//! [`Mp`](super::mp::Mp). The precision ladder in
//! [`policy`](super::policy) picks the instantiation at run time.

use std::fmt::Debug;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign,
};

use num_complex::Complex;

/// Real scalar with the transcendental functions the kernels need.
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + PartialEq
    + Send
    + Sync
    + 'static
    + num_traits::Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Short label used in diagnostics.
    const LABEL: &'static str;

    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Unit roundoff of the current working precision.
    fn unit_roundoff() -> f64;
    fn pi() -> Self;
    fn ln2() -> Self;
    fn euler_gamma() -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;

    /// Exact for |n| < 2^53.
    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }

    fn ratio(a: i64, b: i64) -> Self {
        Self::from_i64(a) / Self::from_i64(b)
    }

    fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return Self::one() / self.powi(-n);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    fn is_finite(&self) -> bool {
        self.to_f64().is_finite()
    }

    fn is_negative(&self) -> bool {
        self.to_f64() < 0.0
    }

    fn mul_f64(&self, x: f64) -> Self {
        self.clone() * Self::from_f64(x)
    }
}

impl Real for f64 {
    const LABEL: &'static str = "f64";

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn ln2() -> Self {
        std::f64::consts::LN_2
    }
    fn euler_gamma() -> Self {
        0.577_215_664_901_532_9
    }
    #[inline]
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    #[inline]
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    #[inline]
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    #[inline]
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    #[inline]
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    #[inline]
    fn mul_f64(&self, x: f64) -> Self {
        self * x
    }
}

/// Magnitude of a complex value with component scaling.
pub fn cabs<T: Real>(z: &Complex<T>) -> T {
    let a = z.re.abs();
    let b = z.im.abs();
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big == T::zero() {
        return big;
    }
    let q = small / &big;
    big * (T::one() + q.clone() * &q).sqrt()
}

/// Principal complex logarithm.
pub fn cln<T: Real>(z: &Complex<T>) -> Complex<T> {
    Complex::new(cabs(z).ln(), z.im.atan2(&z.re))
}

/// Principal complex square root.
pub fn csqrt<T: Real>(z: &Complex<T>) -> Complex<T> {
    let r = cabs(z);
    if r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let half = T::from_f64(0.5);
    if z.re >= T::zero() {
        let t = ((r + &z.re) * &half).sqrt();
        let im = z.im.clone() / (t.clone() + &t);
        Complex::new(t, im)
    } else {
        let t = ((r - &z.re) * &half).sqrt();
        let re = z.im.abs() / (t.clone() + &t);
        let im = if z.im.is_negative() { -t } else { t };
        Complex::new(re, im)
    }
}

/// Converts a complex value to double precision.
pub fn c64<T: Real>(z: &Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

/// Lifts a double-precision complex value to `T`.
pub fn clift<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

/// Neumaier-compensated accumulator.
#[derive(Clone, Debug)]
pub struct Compensated<T> {
    sum: T,
    carry: T,
    peak: f64,
}

impl<T: Real> Default for Compensated<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Compensated<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero(), peak: 0.0 }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum.clone() + &x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum.clone() - &t) + &x;
        } else {
            self.carry += (x - &t) + &self.sum;
        }
        self.sum = t;
        let m = self.sum.to_f64().abs();
        if m > self.peak {
            self.peak = m;
        }
    }

    pub fn value(&self) -> T {
        self.sum.clone() + &self.carry
    }

    /// Largest magnitude the running sum has taken.
    pub fn peak(&self) -> f64 {
        self.peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_addend() {
        let mut acc = Compensated::<f64>::new();
        acc.add(1.0);
        acc.add(1e-17);
        acc.add(-1.0);
        assert!((acc.value() - 1e-17).abs() < 1e-30);
    }

    #[test]
    fn csqrt_branch() {
        let z = Complex::new(-4.0f64, -0.0);
        let s = csqrt(&z);
        assert!((s.im + 2.0).abs() < 1e-15 || (s.im - 2.0).abs() < 1e-15);
        let z = Complex::new(-4.0f64, -1e-3);
        assert!(csqrt(&z).im < 0.0);
    }
}
