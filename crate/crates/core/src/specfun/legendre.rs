//! Legendre functions of the second kind for complex argument.
//!
//! The branch cut lies on the real segment `[-1, 1]` and
//! `Q_0(z) = ½ ln((z+1)/(z-1))`. `Q_l` is the minimal solution of the
//! three-term recurrence away from the cut, so the sequence is built from
//! continued-fraction ratios run downward. Close to the cut the dominant
//! and minimal solutions have comparable size and the forward recurrence
//! is used instead.

use num_complex::Complex;

use super::real::{c64, cabs, cln, Real};
use crate::error::{Error, Result};

/// `Q_0(z)`.
pub fn q0<T: Real>(z: &Complex<T>) -> Complex<T> {
    let one = T::one();
    if cabs(z).to_f64() >= 2.0 {
        // atanh(1/z) series; |w|^2 <= 1/4 so it converges geometrically
        let w = Complex::new(one.clone(), T::zero()) / z.clone();
        let w2 = w.clone() * &w;
        let mut pow = w.clone();
        let mut sum = w;
        let eps = T::unit_roundoff();
        let mut k = 1i64;
        loop {
            pow = pow * &w2;
            let term = pow.clone().unscale(T::from_i64(2 * k + 1));
            sum = sum + &term;
            if cabs(&term).to_f64() <= eps * cabs(&sum).to_f64() * 0.25 {
                break;
            }
            k += 1;
        }
        sum
    } else {
        let c1 = Complex::new(one.clone(), T::zero());
        let ratio = (z.clone() + &c1) / (z.clone() - &c1);
        cln(&ratio).scale(T::from_f64(0.5))
    }
}

/// Modulus of the larger root of `w^2 - 2zw + 1 = 0`, the geometric rate
/// that separates the two recurrence solutions.
fn growth_rate(z: Complex<f64>) -> f64 {
    let s = (z * z - 1.0).sqrt();
    let a = (z + s).norm();
    let b = (z - s).norm();
    a.max(b)
}

fn check_cut(z: Complex<f64>) -> Result<()> {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        return Err(Error::ArgumentOnCut { re: z.re, im: z.im });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    Ok(())
}

/// `Q_0(z) … Q_{ell_max}(z)` in working precision `T`.
pub fn legendre_q_sequence_t<T: Real>(ell_max: usize, z: &Complex<T>) -> Result<Vec<Complex<T>>> {
    let zf = c64(z);
    check_cut(zf)?;
    let mut out = Vec::with_capacity(ell_max + 1);
    out.push(q0(z));
    if ell_max == 0 {
        return finish(out);
    }
    let rho = growth_rate(zf);
    let ln_rho = rho.ln();
    // forward error grows like rho^(2l); tolerate a factor 16
    if 2.0 * ell_max as f64 * ln_rho <= 16f64.ln() {
        let c1 = Complex::new(T::one(), T::zero());
        out.push(z.clone() * &out[0] - &c1);
        for l in 1..ell_max {
            let a = z.clone() * &out[l];
            let a = a.scale(T::from_i64(2 * l as i64 + 1));
            let b = out[l - 1].clone().scale(T::from_i64(l as i64));
            out.push((a - b).unscale(T::from_i64(l as i64 + 1)));
        }
        return finish(out);
    }
    // downward ratios r_l = Q_l / Q_{l-1}
    let digits = -T::unit_roundoff().ln();
    let extra = (digits / (2.0 * ln_rho)).ceil() as usize + 8;
    let top = ell_max + extra.min(200_000);
    let mut ratios: Vec<Complex<T>> = vec![Complex::new(T::zero(), T::zero()); ell_max + 1];
    let mut r = Complex::new(T::zero(), T::zero());
    for l in (1..=top).rev() {
        let denom = z.clone().scale(T::from_i64(2 * l as i64 + 1)) - r.scale(T::from_i64(l as i64 + 1));
        r = Complex::new(T::from_i64(l as i64), T::zero()) / denom;
        if l <= ell_max {
            ratios[l] = r.clone();
        }
    }
    for l in 1..=ell_max {
        let next = out[l - 1].clone() * &ratios[l];
        out.push(next);
    }
    finish(out)
}

fn finish<T: Real>(out: Vec<Complex<T>>) -> Result<Vec<Complex<T>>> {
    for q in &out {
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::Overflow("Legendre Q sequence".into()));
        }
    }
    Ok(out)
}

/// `Q_0(z) … Q_{ell_max}(z)` in double precision.
pub fn legendre_q_sequence(ell_max: usize, z: Complex<f64>) -> Result<Vec<Complex<f64>>> {
    legendre_q_sequence_t::<f64>(ell_max, &z)
}

/// Derivatives `Q_l^{(k)}(z)` for `k = 0..=order`, given `Q_l` and `Q_{l-1}`
/// (the latter unused for `l = 0`).
pub fn legendre_q_derivatives<T: Real>(
    ell: usize,
    z: &Complex<T>,
    q_l: &Complex<T>,
    q_lm1: Option<&Complex<T>>,
    order: usize,
) -> Vec<Complex<T>> {
    let mut d = Vec::with_capacity(order + 1);
    d.push(q_l.clone());
    if order == 0 {
        return d;
    }
    let one = Complex::new(T::one(), T::zero());
    let one_minus_z2 = one.clone() - z.clone() * z;
    let first = if ell == 0 {
        one / &one_minus_z2
    } else {
        // (z^2 - 1) Q' = l (z Q_l - Q_{l-1})
        let qm = q_lm1.expect("Q_{l-1} required for l >= 1");
        let num = (z.clone() * q_l - qm).scale(T::from_i64(ell as i64));
        -(num / &one_minus_z2)
    };
    d.push(first);
    let ll = (ell * (ell + 1)) as i64;
    for k in 0..order.saturating_sub(1) {
        // (1-z^2) Q^{(k+2)} = 2(k+1) z Q^{(k+1)} - (l(l+1) - k(k+1)) Q^{(k)}
        let kk = k as i64;
        let a = (z.clone() * &d[k + 1]).scale(T::from_i64(2 * (kk + 1)));
        let b = d[k].clone().scale(T::from_i64(ll - kk * (kk + 1)));
        d.push((a - b) / &one_minus_z2);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q0_and_q1_at_two() {
        let q = legendre_q_sequence(1, Complex::new(2.0, 0.0)).unwrap();
        let q0 = 0.5f64.atanh();
        assert!((q[0].re - q0).abs() < 1e-15);
        assert!((q[1].re - (2.0 * q0 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn q0_at_i() {
        let q = legendre_q_sequence(0, Complex::new(0.0, 1.0)).unwrap();
        assert!(q[0].re.abs() < 1e-16);
        assert!((q[0].im + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn rejects_cut() {
        assert!(matches!(
            legendre_q_sequence(3, Complex::new(0.5, 0.0)),
            Err(Error::ArgumentOnCut { .. })
        ));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let z = Complex::new(1.3, -0.4);
        let h = 1e-6;
        for ell in 0..6usize {
            let q = legendre_q_sequence(ell, z).unwrap();
            let qp = legendre_q_sequence(ell, z + h).unwrap()[ell];
            let qm = legendre_q_sequence(ell, z - h).unwrap()[ell];
            let d = legendre_q_derivatives(ell, &z, &q[ell], if ell > 0 { Some(&q[ell - 1]) } else { None }, 2);
            let fd1 = (qp - qm) / (2.0 * h);
            let fd2 = (qp - 2.0 * q[ell] + qm) / (h * h);
            assert!((d[1] - fd1).norm() < 1e-8 * d[1].norm().max(1.0));
            assert!((d[2] - fd2).norm() < 1e-3 * d[2].norm().max(1.0));
        }
    }
}
