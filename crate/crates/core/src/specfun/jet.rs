//! Truncated Taylor series in one variable.
//!
//! A jet of order `d` stores the coefficients `c_0 … c_d` of a function
//! around an expansion point; the `k`-th derivative is `k! c_k`. Jets are
//! how parameter derivatives travel through the closed forms.

use std::ops::{Add, Mul, Neg, Sub};

use super::real::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    pub c: Vec<T>,
}

impl<T: Real> Jet<T> {
    pub fn constant(v: T, order: usize) -> Self {
        let mut c = vec![T::zero(); order + 1];
        c[0] = v;
        Jet { c }
    }

    pub fn zero(order: usize) -> Self {
        Jet { c: vec![T::zero(); order + 1] }
    }

    /// `x0 + h`.
    pub fn variable(x0: T, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order >= 1 {
            j.c[1] = T::one();
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> &T {
        &self.c[0]
    }

    pub fn scale(&self, s: &T) -> Self {
        Jet { c: self.c.iter().map(|x| x.clone() * s).collect() }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &T) {
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += &(b.clone() * s);
        }
    }

    /// `(x0 - h)^a` written as a jet in `h`, for `x0 > 0` and real `a`
    /// given as `a2 / 2`.
    pub fn shifted_power(x0: &T, a2: i64, order: usize) -> Self {
        let a = T::ratio(a2, 2);
        // x0^a via exp(a ln x0)
        let lead = if a2 == 0 { T::one() } else { (a.clone() * x0.ln()).exp() };
        let mut c = Vec::with_capacity(order + 1);
        let mut binom = T::one();
        let inv = T::one() / x0;
        let mut pw = T::one();
        for k in 0..=order {
            if k > 0 {
                binom = binom * (a.clone() - T::from_i64(k as i64 - 1)) / T::from_i64(k as i64);
                pw = -(pw * &inv);
            }
            c.push(lead.clone() * &binom * &pw);
        }
        Jet { c }
    }

    /// `g(self)` where `g_k` are the Taylor coefficients of `g` around
    /// `self.c[0]`.
    pub fn compose(&self, g: &[T]) -> Self {
        let d = self.order();
        let mut delta = self.clone();
        delta.c[0] = T::zero();
        let mut out = Self::constant(g[0].clone(), d);
        let mut pw = Self::constant(T::one(), d);
        for gk in g.iter().take(d + 1).skip(1) {
            pw = &pw * &delta;
            out.add_scaled(&pw, gk);
        }
        out
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.c.iter().map(|x| x.to_f64()).collect()
    }
}

impl<'a, T: Real> Mul for &'a Jet<T> {
    type Output = Jet<T>;
    fn mul(self, o: &'a Jet<T>) -> Jet<T> {
        let d = self.order().min(o.order());
        let mut c = vec![T::zero(); d + 1];
        for (i, a) in self.c.iter().enumerate().take(d + 1) {
            for (j, b) in o.c.iter().enumerate().take(d + 1 - i) {
                c[i + j] += &(a.clone() * b);
            }
        }
        Jet { c }
    }
}

impl<'a, T: Real> Add for &'a Jet<T> {
    type Output = Jet<T>;
    fn add(self, o: &'a Jet<T>) -> Jet<T> {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a.clone() + b).collect() }
    }
}

impl<'a, T: Real> Sub for &'a Jet<T> {
    type Output = Jet<T>;
    fn sub(self, o: &'a Jet<T>) -> Jet<T> {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a.clone() - b).collect() }
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        Jet { c: self.c.into_iter().map(|a| -a).collect() }
    }
}

/// Taylor coefficients at `y0` of `∫ y^m w(y) dy` (constant term `base`)
/// where `w` obeys `w' = delta - 2 y w` and `w(y0) = w0`.
///
/// `delta = 0` gives `w = e^{-y^2}`, `delta = 1` gives Dawson's integral.
pub fn moment_taylor<T: Real>(m: usize, y0: &T, w0: &T, delta: bool, base: T, order: usize) -> Vec<T> {
    let mut out = vec![base];
    if order == 0 {
        return out;
    }
    // Taylor coefficients of w up to order-1
    let n = order;
    let mut w = vec![T::zero(); n];
    w[0] = w0.clone();
    for k in 0..n.saturating_sub(1) {
        // (k+1) w_{k+1} = [k == 0] delta - 2 (y0 w_k + w_{k-1})
        let mut v = -(y0.clone() * &w[k]);
        if k >= 1 {
            v -= &w[k - 1];
        }
        v = v * T::from_i64(2);
        if k == 0 && delta {
            v += &T::one();
        }
        w[k + 1] = v / T::from_i64(k as i64 + 1);
    }
    // (y0 + h)^m
    let mut poly = vec![T::zero(); n];
    let mut binom = T::one();
    for (j, slot) in poly.iter_mut().enumerate().take(n.min(m + 1)) {
        if j > 0 {
            binom = binom * T::from_i64((m + 1 - j) as i64) / T::from_i64(j as i64);
        }
        *slot = binom.clone() * y0.powi((m - j) as i32);
    }
    for k in 0..n {
        let mut g = T::zero();
        for j in 0..=k {
            g += &(poly[j].clone() * &w[k - j]);
        }
        out.push(g / T::from_i64(k as i64 + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_compose() {
        let x = Jet::<f64>::variable(2.0, 3);
        let sq = &x * &x;
        assert_eq!(sq.c, vec![4.0, 4.0, 1.0, 0.0]);
        // exp composed with x around 2
        let e2 = 2f64.exp();
        let g = [e2, e2, e2 / 2.0, e2 / 6.0];
        let y = x.compose(&g);
        assert!((y.c[3] - e2 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn shifted_power_matches_binomial() {
        // (4 - h)^{1/2} = 2 - h/4 - h^2/64 - ...
        let j = Jet::<f64>::shifted_power(&4.0, 1, 2);
        assert!((j.c[0] - 2.0).abs() < 1e-15);
        assert!((j.c[1] + 0.25).abs() < 1e-15);
        assert!((j.c[2] + 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_moment_derivatives() {
        // d/dy ∫ y^2 e^{-y^2} = y^2 e^{-y^2}
        let y0 = 0.7f64;
        let w0 = (-y0 * y0).exp();
        let t = moment_taylor(2, &y0, &w0, false, 0.0, 3);
        let h = 1e-4;
        let f = |y: f64| y * y * (-y * y).exp();
        assert!((t[1] - f(y0)).abs() < 1e-15);
        assert!((t[2] - (f(y0 + h) - f(y0 - h)) / (4.0 * h)).abs() < 1e-8);
    }
}
