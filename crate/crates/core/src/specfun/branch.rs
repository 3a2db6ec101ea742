//! Powers of -1 and i on the principal branch.

use num_complex::Complex;

use super::real::Real;

/// `e^{iπq}`. Integer and half-integer exponents give exact results.
pub fn minus_one_power(q: f64) -> Complex<f64> {
    let twice = 2.0 * q;
    if twice.fract() == 0.0 && twice.abs() < 9.0e15 {
        return QuarterTurns::from_half_turns(twice as i64).to_complex();
    }
    let r = q.rem_euclid(2.0);
    let (s, c) = (std::f64::consts::PI * r).sin_cos();
    Complex::new(c, s)
}

/// `i^k` kept symbolically as k mod 4.
///
/// Products of phases add exponents, so a term's overall phase is
/// combined into one integer before it touches any arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuarterTurns(pub u8);

impl QuarterTurns {
    pub const ONE: QuarterTurns = QuarterTurns(0);
    pub const I: QuarterTurns = QuarterTurns(1);
    pub const MINUS_ONE: QuarterTurns = QuarterTurns(2);
    pub const MINUS_I: QuarterTurns = QuarterTurns(3);

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        QuarterTurns(k.rem_euclid(4) as u8)
    }

    /// `(-i)^k`.
    pub fn minus_i_pow(k: i64) -> Self {
        QuarterTurns((-k).rem_euclid(4) as u8)
    }

    /// `(-1)^(h/2)` on the principal branch, i.e. `i^h`.
    pub fn from_half_turns(h: i64) -> Self {
        Self::i_pow(h)
    }

    /// `(-1)^k`.
    pub fn sign(k: i64) -> Self {
        Self::i_pow(2 * k.rem_euclid(2))
    }

    pub fn mul(self, o: Self) -> Self {
        QuarterTurns((self.0 + o.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_complex(self) -> Complex<f64> {
        match self.0 {
            0 => Complex::new(1.0, 0.0),
            1 => Complex::new(0.0, 1.0),
            2 => Complex::new(-1.0, 0.0),
            _ => Complex::new(0.0, -1.0),
        }
    }

    /// Multiplies a complex value by this phase without rounding.
    pub fn apply<T: Real>(self, z: Complex<T>) -> Complex<T> {
        match self.0 {
            0 => z,
            1 => Complex::new(-z.im, z.re),
            2 => Complex::new(-z.re, -z.im),
            _ => Complex::new(z.im, -z.re),
        }
    }

    /// Multiplies a real value by this phase.
    pub fn apply_real<T: Real>(self, x: T) -> Complex<T> {
        match self.0 {
            0 => Complex::new(x, T::zero()),
            1 => Complex::new(T::zero(), x),
            2 => Complex::new(-x, T::zero()),
            _ => Complex::new(T::zero(), -x),
        }
    }
}

/// Four real accumulators, one per quarter-turn phase.
///
/// Terms of the form `phase * real` are summed without complex
/// arithmetic; the complex total is formed once at the end.
#[derive(Clone, Debug)]
pub struct PhaseSum<T> {
    pub parts: [T; 4],
}

impl<T: Real> Default for PhaseSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> PhaseSum<T> {
    pub fn new() -> Self {
        PhaseSum { parts: [T::zero(), T::zero(), T::zero(), T::zero()] }
    }

    pub fn add(&mut self, phase: QuarterTurns, x: &T) {
        self.parts[phase.0 as usize] += x;
    }

    pub fn total(&self) -> Complex<T> {
        let [a, b, c, d] = &self.parts;
        Complex::new(a.clone() - c, b.clone() - d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_values() {
        assert_eq!(minus_one_power(1.0), Complex::new(-1.0, 0.0));
        assert_eq!(minus_one_power(0.5), Complex::new(0.0, 1.0));
        assert_eq!(minus_one_power(2.0), Complex::new(1.0, 0.0));
        assert_eq!(minus_one_power(-0.5), Complex::new(0.0, -1.0));
        assert_eq!(minus_one_power(1.5), Complex::new(0.0, -1.0));
    }

    #[test]
    fn quarter_turn_algebra() {
        assert_eq!(QuarterTurns::minus_i_pow(1), QuarterTurns::MINUS_I);
        assert_eq!(QuarterTurns::minus_i_pow(2), QuarterTurns::MINUS_ONE);
        assert_eq!(QuarterTurns::I.mul(QuarterTurns::I), QuarterTurns::MINUS_ONE);
        assert_eq!(QuarterTurns::sign(-3), QuarterTurns::MINUS_ONE);
        let z = Complex::new(2.0, 3.0);
        assert_eq!(QuarterTurns::I.apply(z), z * Complex::new(0.0, 1.0));
    }
}
