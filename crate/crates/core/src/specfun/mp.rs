//! Arbitrary-precision scalar backed by MPFR.
//!
//! New values take the thread-local working precision set by
//! [`with_bits`]; arithmetic between existing values keeps the precision
//! of the left operand. Kernels therefore run entirely at one precision
//! as long as they are invoked inside a single `with_bits` scope.

use std::cell::Cell;
use std::cmp::Ordering;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign,
};

use rug::float::Constant;
use rug::Float;

use super::real::Real;

const DEFAULT_BITS: u32 = 128;

thread_local! {
    static BITS: Cell<u32> = const { Cell::new(DEFAULT_BITS) };
}

/// Current working precision in bits.
pub fn bits() -> u32 {
    BITS.with(|b| b.get())
}

/// Runs `f` with the working precision set to `bits`, restoring the
/// previous value afterwards (also on unwind).
pub fn with_bits<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    struct Restore(u32);
    impl Drop for Restore {
        fn drop(&mut self) {
            BITS.with(|b| b.set(self.0));
        }
    }
    let _guard = Restore(BITS.with(|b| b.replace(bits)));
    f()
}

#[derive(Clone, Debug)]
pub struct Mp(pub Float);

impl Mp {
    fn wrap(f: Float) -> Self {
        Mp(f)
    }
}

impl PartialEq for Mp {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Mp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! bin_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Mp {
            type Output = Mp;
            #[inline]
            fn $f(self, b: Mp) -> Mp { Mp::wrap($tr::$f(self.0, b.0)) }
        }
        impl<'a> $tr<&'a Mp> for Mp {
            type Output = Mp;
            #[inline]
            fn $f(self, b: &'a Mp) -> Mp { Mp::wrap($tr::$f(self.0, &b.0)) }
        }
    )*};
}
bin_ops!(Add add, Sub sub, Mul mul, Div div);

impl Rem for Mp {
    type Output = Mp;
    fn rem(self, b: Mp) -> Mp {
        Mp::wrap(self.0 % b.0)
    }
}

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp::wrap(-self.0)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Mp {
            #[inline]
            fn $f(&mut self, b: Mp) { $tr::$f(&mut self.0, b.0) }
        }
        impl<'a> $tr<&'a Mp> for Mp {
            #[inline]
            fn $f(&mut self, b: &'a Mp) { $tr::$f(&mut self.0, &b.0) }
        }
    )*};
}
assign_ops!(AddAssign add_assign, SubAssign sub_assign, MulAssign mul_assign);

impl DivAssign for Mp {
    fn div_assign(&mut self, b: Mp) {
        self.0 /= b.0;
    }
}

impl num_traits::Zero for Mp {
    fn zero() -> Self {
        Mp(Float::new(bits()))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl num_traits::One for Mp {
    fn one() -> Self {
        Mp(Float::with_val(bits(), 1))
    }
}

impl num_traits::Num for Mp {
    type FromStrRadixErr = rug::float::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let parsed = Float::parse_radix(s, radix as i32)?;
        Ok(Mp(Float::with_val(bits(), parsed)))
    }
}

impl Real for Mp {
    const LABEL: &'static str = "mpfr";

    fn from_f64(x: f64) -> Self {
        Mp(Float::with_val(bits(), x))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn unit_roundoff() -> f64 {
        2f64.powi(-(bits() as i32))
    }
    fn pi() -> Self {
        Mp(Float::with_val(bits(), Constant::Pi))
    }
    fn ln2() -> Self {
        Mp(Float::with_val(bits(), Constant::Log2))
    }
    fn euler_gamma() -> Self {
        Mp(Float::with_val(bits(), Constant::Euler))
    }
    fn sqrt(&self) -> Self {
        Mp(self.0.clone().sqrt())
    }
    fn exp(&self) -> Self {
        Mp(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        Mp(self.0.clone().ln())
    }
    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.0.prec()));
        (Mp(s), Mp(c))
    }
    fn atan2(&self, x: &Self) -> Self {
        Mp(self.0.clone().atan2(&x.0))
    }
    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }
    fn from_i64(n: i64) -> Self {
        Mp(Float::with_val(bits(), n))
    }
    fn powi(&self, n: i32) -> Self {
        use rug::ops::Pow;
        Mp(self.0.clone().pow(n))
    }
    fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn mul_f64(&self, x: f64) -> Self {
        Mp(self.0.clone() * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scope_restores_precision() {
        let outer = bits();
        with_bits(300, || {
            assert_eq!(bits(), 300);
            let x = Mp::from_f64(2.0).sqrt();
            assert_eq!(x.0.prec(), 300);
        });
        assert_eq!(bits(), outer);
    }
}
