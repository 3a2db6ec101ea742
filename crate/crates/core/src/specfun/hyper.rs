//! Generalized hypergeometric series and the Dawson-type moments behind
//! the regularized `2F2(1, (m+2)/2; 3/2, (m+4)/2; -x)` pattern.

use num_complex::Complex;

use super::dd::Dd;
use super::gamma::{gamma_half, LowerLattice};
use super::policy::PrecisionPolicy;
use super::real::{c64, cabs, clift, Real};
use crate::error::{Error, Result};

/// Raw outcome of a series summation.
#[derive(Clone, Debug)]
pub struct SeriesSum<T> {
    pub value: Complex<T>,
    /// Largest partial-sum magnitude over the result magnitude.
    pub cancellation: f64,
    pub terms: usize,
}

fn check_poles(lower: &[f64]) -> Result<()> {
    for &b in lower {
        if b <= 0.0 && b.fract() == 0.0 {
            return Err(Error::Pole(b));
        }
    }
    Ok(())
}

/// Sums `pFq(upper; lower; x)` in precision `T`.
///
/// Stops once three consecutive terms fall below roundoff relative to the
/// partial sum; the sum is Neumaier-compensated per component.
pub fn pfq_series<T: Real>(upper: &[T], lower: &[T], x: &Complex<T>, max_terms: usize) -> Result<SeriesSum<T>> {
    let eps = T::unit_roundoff();
    let mut term = Complex::new(T::one(), T::zero());
    let mut re = super::real::Compensated::<T>::new();
    let mut im = super::real::Compensated::<T>::new();
    re.add(T::one());
    im.add(T::zero());
    let mut peak = 1f64;
    let mut small_run = 0;
    for k in 0..max_terms {
        let kk = T::from_i64(k as i64);
        let mut num = T::one();
        for a in upper {
            num *= &(a.clone() + &kk);
        }
        let mut den = T::from_i64(k as i64 + 1);
        for b in lower {
            den *= &(b.clone() + &kk);
        }
        term = term * x * (num / den);
        re.add(term.re.clone());
        im.add(term.im.clone());
        let sum = Complex::new(re.value(), im.value());
        let s = cabs(&sum).to_f64();
        peak = peak.max(s);
        if cabs(&term).to_f64() <= eps * s {
            small_run += 1;
            if small_run == 3 {
                let cancellation = if s > 0.0 { peak / s } else { f64::INFINITY };
                return Ok(SeriesSum { value: sum, cancellation, terms: k + 1 });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence { what: "hypergeometric series", terms: max_terms })
}

/// Result of [`pfq`].
#[derive(Clone, Debug, PartialEq)]
pub struct PfqValue {
    pub value: Complex<f64>,
    pub cancellation: f64,
    /// Set when the digits lost to cancellation exceed the tolerance even
    /// in double-double.
    pub flagged: bool,
    pub double_double: bool,
}

/// `pFq(upper; lower; x)` for the entire cases `p <= q`.
///
/// Sums in double first and re-runs in double-double when the ratio of
/// the largest partial sum to the result passes the policy threshold.
pub fn pfq(upper: &[f64], lower: &[f64], x: Complex<f64>, policy: &PrecisionPolicy) -> Result<PfqValue> {
    policy.validate()?;
    check_poles(lower)?;
    if upper.len() > lower.len() {
        return Err(Error::Domain(format!(
            "{}F{} is not entire; only p <= q is supported",
            upper.len(),
            lower.len()
        )));
    }
    let s = pfq_series::<f64>(upper, lower, &x, policy.max_terms)?;
    if s.cancellation <= policy.escalation_threshold {
        return Ok(PfqValue { value: s.value, cancellation: s.cancellation, flagged: false, double_double: false });
    }
    let up: Vec<Dd> = upper.iter().map(|&a| Dd::from_f64(a)).collect();
    let lo: Vec<Dd> = lower.iter().map(|&b| Dd::from_f64(b)).collect();
    let s = pfq_series::<Dd>(&up, &lo, &clift(x), policy.max_terms)?;
    let flagged = s.cancellation * Dd::unit_roundoff() > policy.tolerance;
    Ok(PfqValue { value: c64(&s.value), cancellation: s.cancellation, flagged, double_double: true })
}

/// Argument `x = Y^2` above which the Dawson moments switch from the
/// positive series to the asymptotic recurrence, per working precision.
pub fn dawson_threshold<T: Real>() -> f64 {
    (T::unit_roundoff().recip().ln() + 40.0).clamp(64.0, 900.0)
}

/// Dawson's integral `F(y) = e^{-y^2} ∫_0^y e^{t^2} dt`.
pub fn dawson<T: Real>(y: &T, max_terms: usize) -> Result<T> {
    let yf = y.to_f64();
    if yf < 0.0 {
        return Ok(-dawson(&-y.clone(), max_terms)?);
    }
    if yf == 0.0 {
        return Ok(T::zero());
    }
    let x = y.clone() * y;
    if yf * yf <= dawson_threshold::<T>() {
        // e^{-y^2} Σ y^{2k+1} / (k! (2k+1)), all terms positive
        let eps = T::unit_roundoff();
        let mut pow = y.clone();
        let mut sum = y.clone();
        for k in 1..max_terms {
            pow = pow * &x / T::from_i64(k as i64);
            let term = pow.clone() / T::from_i64(2 * k as i64 + 1);
            sum += &term;
            if term.to_f64() < 0.25 * eps * sum.to_f64() && k as f64 > yf * yf {
                return Ok(sum * (-x).exp());
            }
        }
        return Err(Error::NonConvergence { what: "Dawson series", terms: max_terms });
    }
    dawson_asymptotic(y, max_terms)
}

/// `Σ (2k-1)!! / (2^{k+1} y^{2k+1})`, truncated at roundoff.
fn dawson_asymptotic<T: Real>(y: &T, max_terms: usize) -> Result<T> {
    let eps = T::unit_roundoff();
    let inv2x = T::one() / (y.clone() * y * T::from_i64(2));
    let mut term = T::one() / (y.clone() * T::from_i64(2));
    let mut sum = term.clone();
    for k in 1..max_terms {
        let next = term.clone() * &inv2x * T::from_i64(2 * k as i64 - 1);
        if next.to_f64() > term.to_f64() {
            return Err(Error::NonConvergence { what: "Dawson asymptotic series", terms: k });
        }
        term = next;
        sum += &term;
        if term.to_f64() < 0.25 * eps * sum.to_f64() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { what: "Dawson asymptotic series", terms: max_terms })
}

/// Regularized lower-Gamma lattices at integer and half-integer order
/// sharing one argument.
#[derive(Clone, Debug)]
pub struct LatticePair<T> {
    half: LowerLattice<T>,
    whole: LowerLattice<T>,
}

impl<T: Real> LatticePair<T> {
    /// Covers orders up to at least `a2_max / 2`.
    pub fn new(x: &T, a2_max: u32, weight_power: i32, max_terms: usize) -> Result<Self> {
        let len = a2_max as usize / 2 + 2;
        Ok(LatticePair {
            half: LowerLattice::new(1, x, len, weight_power, max_terms)?,
            whole: LowerLattice::new(2, x, len, weight_power, max_terms)?,
        })
    }

    /// `P(a2/2, x)` for `a2 >= 1`.
    pub fn p(&self, a2: u32) -> T {
        if a2 % 2 == 1 {
            self.half.get((a2 as usize - 1) / 2)
        } else {
            self.whole.get((a2 as usize - 2) / 2)
        }
    }

    fn len_for(&self, a2: u32) -> usize {
        let l = if a2 % 2 == 1 { &self.half } else { &self.whole };
        let base = if a2 % 2 == 1 { (a2 as usize - 1) / 2 } else { (a2 as usize - 2) / 2 };
        l.len().saturating_sub(base)
    }

    /// The terms `P(a2/2 + k, x) Γ(a2/2 + k) / k!` summed by
    /// [`weighted_sum`](Self::weighted_sum).
    pub fn terms(&self, a2: u32) -> Vec<T> {
        let n = self.len_for(a2);
        let mut coef = gamma_half::<T>(a2);
        let a = T::ratio(a2 as i64, 2);
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            if k > 0 {
                coef = coef * (a.clone() + T::from_i64(k as i64 - 1)) / T::from_i64(k as i64);
            }
            out.push(self.p(a2 + 2 * k as u32) * &coef);
        }
        out
    }

    /// `Σ_k w_k P(a2/2 + k, x) Γ(a2/2 + k) / k!` for weights `w_k`.
    pub fn weighted_sum(&self, a2: u32, weight: impl Fn(usize) -> T) -> T {
        let n = self.len_for(a2);
        let mut coef = gamma_half::<T>(a2);
        let a = T::ratio(a2 as i64, 2);
        let mut sum = T::zero();
        for k in 0..n {
            if k > 0 {
                coef = coef * (a.clone() + T::from_i64(k as i64 - 1)) / T::from_i64(k as i64);
            }
            sum += &(self.p(a2 + 2 * k as u32) * &coef * weight(k));
        }
        sum
    }
}

/// `M_m(Y) = ∫_0^Y y^m F(y) dy` for `m = 0..=m_max`, with `F` Dawson's
/// integral.
///
/// Below the switch point each moment is a positive series in
/// regularized lower incomplete Gamma values; above it the moments follow
/// from an upward recurrence seeded by asymptotic expansions, whose terms
/// are dominated by `Y^m / m` and therefore stable.
pub fn dawson_moments<T: Real>(m_max: usize, y: &T, max_terms: usize) -> Result<Vec<T>> {
    let yf = y.to_f64();
    if yf == 0.0 {
        return Ok(vec![T::zero(); m_max + 1]);
    }
    if yf < 0.0 {
        let mut v = dawson_moments(m_max, &-y.clone(), max_terms)?;
        for (m, x) in v.iter_mut().enumerate() {
            if m % 2 == 1 {
                *x = -x.clone();
            }
        }
        return Ok(v);
    }
    let x = y.clone() * y;
    if yf * yf <= dawson_threshold::<T>() {
        let c2_max = m_max as u32 + 2;
        let lat = LatticePair::new(&x, c2_max, c2_max as i32 / 2 + 2, max_terms)?;
        let half = T::from_f64(0.5);
        let out = (0..=m_max)
            .map(|m| {
                let s = lat.weighted_sum(m as u32 + 2, |k| T::one() / T::from_i64(2 * k as i64 + 1));
                s * &half
            })
            .collect();
        return Ok(out);
    }
    let f = dawson_asymptotic(y, max_terms)?;
    let half = T::from_f64(0.5);
    let mut out: Vec<T> = Vec::with_capacity(m_max + 1);
    out.push(m0_asymptotic(y, max_terms)?);
    if m_max >= 1 {
        out.push((y.clone() - &f) * &half);
    }
    let mut ypow = y.clone(); // Y^{m-1}
    for m in 2..=m_max {
        let mm = T::from_i64(m as i64);
        let ym = ypow.clone() * y;
        let v = (out[m - 2].clone() * T::from_i64(m as i64 - 1) + ym.clone() / &mm - ypow.clone() * &f) * &half;
        out.push(v);
        ypow = ym;
    }
    Ok(out)
}

/// `M_0(Y) = ½ ln Y + (γ + ln 4)/4 - Σ_{k>=1} (2k-1)!! / (2^{k+1} 2k Y^{2k})`.
fn m0_asymptotic<T: Real>(y: &T, max_terms: usize) -> Result<T> {
    let eps = T::unit_roundoff();
    let c = (T::euler_gamma() + T::ln2() * T::from_i64(2)) / T::from_i64(4);
    let lead = y.ln() * T::from_f64(0.5) + c;
    let inv_y2 = T::one() / (y.clone() * y);
    // a_k = (2k-1)!! / (2^{k+1} Y^{2k}); the series term is a_k / (2k)
    let mut a = inv_y2.clone() / T::from_i64(4);
    let mut tail = a.clone() / T::from_i64(2);
    for k in 2..max_terms {
        let next = a.clone() * &inv_y2 * T::ratio(2 * k as i64 - 1, 2);
        if next.to_f64() > a.to_f64() {
            return Err(Error::NonConvergence { what: "Dawson moment asymptotic series", terms: k });
        }
        a = next;
        let term = a.clone() / T::from_i64(2 * k as i64);
        tail += &term;
        if term.to_f64() < 0.25 * eps * lead.to_f64().abs() {
            return Ok(lead - tail);
        }
    }
    Err(Error::NonConvergence { what: "Dawson moment asymptotic series", terms: max_terms })
}

/// Regularized `2F2(1, (m+2)/2; 3/2, (m+4)/2; x)` for `x <= 0`.
pub fn reg_2f2_chi_pattern(m: u32, x: f64) -> Result<f64> {
    reg_2f2_chi_pattern_t::<f64>(m, x, 10_000)
}

/// As [`reg_2f2_chi_pattern`] in working precision `T`.
pub fn reg_2f2_chi_pattern_t<T: Real>(m: u32, x: f64, max_terms: usize) -> Result<f64> {
    if !(x <= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("argument x = {x} must be finite and <= 0")));
    }
    let c2 = m + 2;
    let norm = gamma_half::<T>(3) * gamma_half::<T>(c2 + 2);
    if x == 0.0 {
        return Ok((T::one() / norm).to_f64());
    }
    if x >= -1.0 {
        let up = [T::one(), T::ratio(c2 as i64, 2)];
        let lo = [T::ratio(3, 2), T::ratio(c2 as i64 + 2, 2)];
        let s = pfq_series::<T>(&up, &lo, &Complex::new(T::from_f64(x), T::zero()), max_terms)?;
        return Ok((s.value.re / norm).to_f64());
    }
    let y = T::from_f64(-x).sqrt();
    let mm = dawson_moments::<T>(m as usize, &y, max_terms)?;
    // 4 M_m(Y) / (√π Γ(c) Y^{m+2})
    let v = mm[m as usize].clone() * T::from_i64(4)
        / (T::pi().sqrt() * gamma_half::<T>(c2) * y.powi(m as i32 + 2));
    Ok(v.to_f64())
}

/// `x^a 2F2(1, a; b, a+1; -x) = a Σ_n (b-1) γ(a+n, x) / ((b-1+n) n!)`
/// for `a = a2/2 > 0`, `b = b2/2 > 1`.
pub fn phi_2f2<T: Real>(lat: &LatticePair<T>, a2: u32, b2: u32) -> T {
    let bm1 = T::ratio(b2 as i64 - 2, 2);
    let s = lat.weighted_sum(a2, |k| bm1.clone() / (bm1.clone() + T::from_i64(k as i64)));
    s * T::ratio(a2 as i64, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfq_at_zero_is_one() {
        let p = PrecisionPolicy::default();
        let v = pfq(&[1.0, 2.5], &[1.5, 3.0], Complex::new(0.0, 0.0), &p).unwrap();
        assert_eq!(v.value, Complex::new(1.0, 0.0));
    }

    #[test]
    fn pfq_identity() {
        let p = PrecisionPolicy::default();
        let v = pfq(&[1.0], &[2.0], Complex::new(1.0, 0.0), &p).unwrap();
        assert!((v.value.re - (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn pfq_pole_and_shape_errors() {
        let p = PrecisionPolicy::default();
        assert!(matches!(pfq(&[1.0], &[-2.0], Complex::new(1.0, 0.0), &p), Err(Error::Pole(_))));
        assert!(pfq(&[1.0, 1.0], &[2.0], Complex::new(0.1, 0.0), &p).is_err());
    }

    #[test]
    fn dawson_values() {
        // F(1) and F(10)
        assert!((dawson::<f64>(&1.0, 10_000).unwrap() - 0.538_079_506_912_768_4).abs() < 1e-15);
        assert!((dawson::<f64>(&10.0, 10_000).unwrap() - 0.050_253_847_187_598_53).abs() < 1e-16);
        let big = dawson::<f64>(&20.0, 10_000).unwrap();
        assert!((big - 0.025_031_367_926_403_67).abs() < 1e-16);
    }

    #[test]
    fn moments_agree_across_switch() {
        // both paths evaluated on either side of the double-precision switch
        for &y in &[9.0f64, 9.5, 10.0] {
            let series = dawson_moments::<Dd>(9, &Dd::from_f64(y), 100_000).unwrap();
            let asym = dawson_moments::<f64>(9, &y, 100_000).unwrap();
            for (a, b) in series.iter().zip(&asym) {
                let a = a.to_f64();
                assert!((a - b).abs() <= 1e-13 * a.abs(), "y={y} {a} {b}");
            }
        }
    }

    #[test]
    fn chi_pattern_boundaries() {
        let v0 = reg_2f2_chi_pattern(0, 0.0).unwrap();
        assert!((v0 - 1.128_379_167_095_512_6).abs() < 1e-15);
        let v1 = reg_2f2_chi_pattern(1, 0.0).unwrap();
        assert!((v1 - 0.848_826_363_156_775_4).abs() < 1e-15);
    }
}
