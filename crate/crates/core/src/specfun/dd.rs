//! Double-double arithmetic: an unevaluated sum `hi + lo` of two doubles
//! carrying about 106 significant bits.
//!
//! Basic operations follow the error-free transformations of Dekker and
//! Knuth with fused multiply-add products. Transcendentals use argument
//! reduction plus Taylor series, or one Newton step from the double
//! result, so every function returns close to full double-double accuracy.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign,
};

use super::real::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const PI: Dd = Dd { hi: 3.141_592_653_589_793, lo: 1.224_646_799_147_353_2e-16 };
const HALF_PI: Dd = Dd { hi: 1.570_796_326_794_896_6, lo: 6.123_233_995_736_766e-17 };
const LN2: Dd = Dd { hi: 0.693_147_180_559_945_3, lo: 2.319_046_813_846_299_6e-17 };
const EULER: Dd = Dd { hi: 0.577_215_664_901_532_9, lo: -4.942_915_152_430_645e-18 };

impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    /// Exact multiplication by a power of two.
    fn ldexp(self, k: i32) -> Self {
        // split so that intermediate factors stay representable
        let mut out = self;
        let mut k = k;
        while k != 0 {
            let step = k.clamp(-1000, 1000);
            let f = 2f64.powi(step);
            out = Dd { hi: out.hi * f, lo: out.lo * f };
            k -= step;
        }
        out
    }

    fn mul_f(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Dd::renorm(p, e + self.lo * b)
    }

    fn expm1_small(r: Dd) -> Dd {
        // |r| <= ln2/1024; 12 terms reach far below 2^-106
        let mut term = r;
        let mut sum = r;
        for i in 2..=14 {
            term = term * r / Dd::from(i as f64);
            sum += term;
            if term.hi.abs() < 1e-36 * sum.hi.abs() {
                break;
            }
        }
        sum
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.hi + self.lo)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Dd::renorm(s1, s2 + t2)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        let q = (self / b).hi.trunc();
        self - b.mul_f(q)
    }
}

macro_rules! ref_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl<'a> $tr<&'a Dd> for Dd {
            type Output = Dd;
            #[inline]
            fn $f(self, b: &'a Dd) -> Dd { $tr::$f(self, *b) }
        }
    )*};
}
ref_ops!(Add add, Sub sub, Mul mul, Div div);

macro_rules! assign_ops {
    ($($tr:ident $f:ident $op:ident),*) => {$(
        impl $tr for Dd {
            #[inline]
            fn $f(&mut self, b: Dd) { *self = self.$op(b); }
        }
        impl<'a> $tr<&'a Dd> for Dd {
            #[inline]
            fn $f(&mut self, b: &'a Dd) { *self = self.$op(*b); }
        }
    )*};
}
assign_ops!(AddAssign add_assign add, SubAssign sub_assign sub, MulAssign mul_assign mul);

impl DivAssign for Dd {
    fn div_assign(&mut self, b: Dd) {
        *self = *self / b;
    }
}

impl num_traits::Zero for Dd {
    fn zero() -> Self {
        Dd::default()
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl num_traits::One for Dd {
    fn one() -> Self {
        Dd::from(1.0)
    }
}

impl num_traits::Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(Dd::from)
    }
}

impl Real for Dd {
    const LABEL: &'static str = "double-double";

    fn from_f64(x: f64) -> Self {
        Dd::from(x)
    }
    fn to_f64(&self) -> f64 {
        self.hi + self.lo
    }
    fn unit_roundoff() -> f64 {
        // 2^-104, slightly pessimistic for the pair representation
        4.930_380_657_631_324e-32
    }
    fn pi() -> Self {
        PI
    }
    fn ln2() -> Self {
        LN2
    }
    fn euler_gamma() -> Self {
        EULER
    }

    fn sqrt(&self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::default() } else { Dd::from(f64::NAN) };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (p, e) = two_prod(ax, ax);
        let diff = *self - Dd { hi: p, lo: e };
        let (s, t) = two_sum(ax, diff.hi * x * 0.5);
        Dd::renorm(s, t)
    }

    fn exp(&self) -> Self {
        if self.hi > 709.78 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Dd::default();
        }
        let k = (self.hi / LN2.hi).round();
        let r = (*self - LN2.mul_f(k)).ldexp(-10);
        let mut s = Dd::expm1_small(r);
        for _ in 0..10 {
            s = s * (s + Dd::from(2.0));
        }
        (s + Dd::from(1.0)).ldexp(k as i32)
    }

    fn ln(&self) -> Self {
        if self.hi <= 0.0 {
            return Dd::from(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        let y = Dd::from(self.hi.ln());
        y + *self * (-y).exp() - Dd::from(1.0)
    }

    fn sin_cos(&self) -> (Self, Self) {
        let k = (self.hi / HALF_PI.hi).round();
        let t = *self - HALF_PI.mul_f(k);
        let t2 = t * t;
        let mut s = t;
        let mut term = t;
        let mut c = Dd::from(1.0);
        let mut cterm = Dd::from(1.0);
        let mut i = 1.0;
        loop {
            cterm = -cterm * t2 / Dd::from(i * (i + 1.0));
            c += cterm;
            term = -term * t2 / Dd::from((i + 1.0) * (i + 2.0));
            s += term;
            i += 2.0;
            if term.hi.abs() < 1e-36 && cterm.hi.abs() < 1e-36 {
                break;
            }
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn atan2(&self, x: &Self) -> Self {
        let th = Dd::from(self.hi.atan2(x.hi));
        if self.hi == 0.0 && x.hi == 0.0 {
            return th;
        }
        let (s, c) = th.sin_cos();
        th + (*self * c - *x * s) / (*x * c + *self * s)
    }

    fn abs(&self) -> Self {
        if self.hi < 0.0 {
            -*self
        } else {
            *self
        }
    }

    fn from_i64(n: i64) -> Self {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Dd::renorm(hi, lo)
    }

    fn mul_f64(&self, x: f64) -> Self {
        self.mul_f(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn to_mp(x: Dd) -> Float {
        Float::with_val(300, x.hi) + Float::with_val(300, x.lo)
    }

    fn rel(a: Dd, b: Float) -> f64 {
        let d = to_mp(a) - &b;
        (d / b).to_f64().abs()
    }

    #[test]
    fn transcendentals_reach_double_double_accuracy() {
        let mut worst = 0f64;
        for i in 1..400 {
            let x = Dd::from(i as f64 * 0.173 + 0.001) / Dd::from(3.0);
            let xm = to_mp(x);
            worst = worst.max(rel(x.exp(), xm.clone().exp()));
            worst = worst.max(rel((-x).exp(), (-xm.clone()).exp()));
            worst = worst.max(rel(x.ln(), xm.clone().ln()));
            worst = worst.max(rel(x.sqrt(), xm.clone().sqrt()));
            let (s, c) = x.sin_cos();
            worst = worst.max(rel(s, xm.clone().sin()) * s.hi.abs().min(1.0));
            worst = worst.max(rel(c, xm.clone().cos()) * c.hi.abs().min(1.0));
            let y = Dd::from(0.7) - x / Dd::from(7.0);
            let ym = to_mp(y);
            worst = worst.max(rel(y.atan2(&x), ym.atan2(&xm)));
        }
        assert!(worst < 1e-30, "worst relative error {worst:e}");
    }

    #[test]
    fn division_and_integer_conversion() {
        let a = Dd::from_i64((1i64 << 60) + 7);
        assert_eq!(a.hi + a.lo, ((1i64 << 60) + 7) as f64);
        let third = Dd::from(1.0) / Dd::from(3.0);
        let back = third * Dd::from(3.0) - Dd::from(1.0);
        assert!(back.hi.abs() < 1e-31);
    }
}
