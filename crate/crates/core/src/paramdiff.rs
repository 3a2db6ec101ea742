//! Higher powers of `k` by differentiating with respect to `s = -p^2`.
//!
//! `∂_s e^{sk} = k e^{sk}` and `∂_s e^{sk^2} = k^2 e^{sk^2}`, so the
//! `k^n` integral is the `d`-th derivative of the `k^2` integral with
//! `d = n - 2` (exponential) or `d = (n - 2)/2` (Gaussian). Every kernel
//! carries a truncated Taylor series in `s`, and the plan is executed on
//! those series; the derivative is `d!` times the `d`-th coefficient.

use crate::engine::{global, EngineConfig, Evaluator};
use crate::error::{Error, Result};
use crate::recursion::{check_public_orders, evaluate_orders};
use crate::specfun::policy::{PrecisionPolicy, Tier};
use crate::types::{DampingKind, EvalResult, WeightedIntegralSpec};

/// Derivative order needed for `spec.n`.
pub fn derivative_order(spec: &WeightedIntegralSpec, max: usize) -> Result<usize> {
    let n = spec.n as usize;
    let d = match spec.damping.kind() {
        DampingKind::Exp => {
            if n < 2 {
                return Err(Error::UnsupportedPower(format!(
                    "n = {n} is below 2 for exponential damping, which no route supports"
                )));
            }
            n - 2
        }
        DampingKind::Gauss => {
            if n < 2 || n % 2 == 1 {
                return Err(Error::UnsupportedPower(format!(
                    "n = {n} on the Gaussian recursion route needs n >= 2 and even; use the nested-sum route"
                )));
            }
            (n - 2) / 2
        }
    };
    if d > max {
        return Err(Error::DerivativeOrderLimit { d, max });
    }
    Ok(d)
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

/// `∫ k^n w(k) j_l1 j_l2 j_l3 dk` on the recursion route.
pub fn evaluate_weighted_with(ev: &Evaluator, spec: &WeightedIntegralSpec) -> Result<EvalResult> {
    spec.validate()?;
    check_public_orders(ev, spec.orders)?;
    let d = derivative_order(spec, ev.config.max_derivative)?;
    let damping = spec.damping.canonical()?;
    let mut out = evaluate_orders(ev, damping.kind(), spec.orders, &spec.radii, damping.p(), d)?.result;
    let f = factorial(d);
    out.value *= f;
    out.im_residual *= f;
    out.error_estimate *= f;
    Ok(out)
}

/// [`evaluate_weighted_with`] on the process-wide evaluator.
pub fn evaluate_weighted(spec: &WeightedIntegralSpec) -> Result<EvalResult> {
    evaluate_weighted_with(global(), spec)
}

/// Independent check of [`evaluate_weighted`]: Richardson-extrapolated
/// central differences of the `k^2` integral in `p^2`, with step
/// `max(1e-4, 1e-3 p^2)`. The underlying values are computed to about
/// 1e-24 relative so the difference quotient is not swamped by rounding.
pub fn finite_difference(spec: &WeightedIntegralSpec) -> Result<f64> {
    spec.validate()?;
    let d = derivative_order(spec, 6)?;
    let damping = spec.damping.canonical()?;
    let p2 = damping.p() * damping.p();
    let policy = PrecisionPolicy { tolerance: 1e-24, start: Tier::DoubleDouble, ..PrecisionPolicy::default() };
    let ev = Evaluator::new(policy, EngineConfig::default());
    // f(s) with s = -p^2 + shift
    let f = |shift: f64| -> Result<f64> {
        let q2 = p2 - shift;
        if q2 <= 0.0 {
            return Err(Error::Domain("finite-difference step crosses p = 0".into()));
        }
        Ok(evaluate_orders(&ev, damping.kind(), spec.orders, &spec.radii, q2.sqrt(), 0)?.result.value)
    };
    if d == 0 {
        return f(0.0);
    }
    let h = 1e-4f64.max(1e-3 * p2);
    let central = |h: f64| -> Result<f64> {
        // Σ (-1)^j C(d, j) f(s + (d/2 - j) h) / h^d
        let mut acc = 0.0;
        let mut c = 1.0;
        for j in 0..=d {
            let x = (d as f64 / 2.0 - j as f64) * h;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * c * f(x)?;
            c = c * (d - j) as f64 / (j + 1) as f64;
        }
        Ok(acc / h.powi(d as i32))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Damping, RadiiTriple};

    fn spec(d: Damping, n: u32) -> WeightedIntegralSpec {
        WeightedIntegralSpec::new([1, 1, 0], RadiiTriple::new(1.0, 2.0, 1.5).unwrap(), d, n)
    }

    #[test]
    fn derivative_orders() {
        assert_eq!(derivative_order(&spec(Damping::Exp(1.0), 5), 6).unwrap(), 3);
        assert_eq!(derivative_order(&spec(Damping::Gauss(1.0), 6), 6).unwrap(), 2);
        assert!(matches!(derivative_order(&spec(Damping::Gauss(1.0), 3), 6), Err(Error::UnsupportedPower(_))));
        assert!(matches!(derivative_order(&spec(Damping::Exp(1.0), 1), 6), Err(Error::UnsupportedPower(_))));
        assert!(matches!(derivative_order(&spec(Damping::Exp(1.0), 9), 6), Err(Error::DerivativeOrderLimit { .. })));
    }

    #[test]
    fn n2_is_the_recursion_value() {
        let s = spec(Damping::Gauss(1.0), 2);
        let a = evaluate_weighted(&s).unwrap();
        let b = crate::recursion::evaluate(&s).unwrap();
        assert_eq!(a.value, b.value);
    }
}
