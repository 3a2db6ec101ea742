//! Base cases under the weight `e^{-p^2 k}`.
//!
//! All three variants are signed combinations of `Q_l` at the four
//! complex arguments `R±± = (-ip^2 ± r2 ± r3)/r1`, so one Legendre table
//! per argument serves the whole set.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::basecase::{BaseCaseVariant, LeafSet, LeafValue};
use crate::engine::{global, Evaluator};
use crate::error::Result;
use crate::kernels::{order_bucket, ExactSum, KernelKey, LegendreTable};
use crate::specfun::branch::QuarterTurns;
use crate::specfun::jet::Jet;
use crate::specfun::legendre::legendre_q_derivatives;
use crate::specfun::policy::Tier;
use crate::specfun::real::{cabs, Real};
use crate::types::{DampingKind, EvalResult, RadiiTriple};

/// The four Legendre arguments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RArguments {
    pub mm: Complex<f64>,
    pub mp: Complex<f64>,
    pub pm: Complex<f64>,
    pub pp: Complex<f64>,
}

/// Sign pairs `(s2, s3)` in the order `--`, `-+`, `+-`, `++`.
pub const LINES: [(f64, f64); 4] = [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)];

/// `R±± = (-ip^2 ± r2 ± r3)/r1`.
pub fn r_arguments(radii: &RadiiTriple, p: f64) -> RArguments {
    let f = |s2: f64, s3: f64| Complex::new((s2 * radii.r2 + s3 * radii.r3) / radii.r1, -p * p / radii.r1);
    RArguments { mm: f(-1.0, -1.0), mp: f(-1.0, 1.0), pm: f(1.0, -1.0), pp: f(1.0, 1.0) }
}

/// Exact key of the numerator `s2 r2 + s3 r3`.
pub fn line_sum(r2: f64, r3: f64, s2: f64, s3: f64) -> ExactSum {
    ExactSum::new(&[s2 * r2, s3 * r3])
}

/// Per-variant sign pattern over [`LINES`], phase and overall sign.
fn pattern(variant: BaseCaseVariant, ell: usize) -> ([f64; 4], QuarterTurns, f64) {
    let l = ell as i64;
    match variant {
        BaseCaseVariant::L00 => ([1.0, -1.0, -1.0, 1.0], QuarterTurns::minus_i_pow(l + 1), -1.0),
        BaseCaseVariant::Lm10 => ([1.0, -1.0, 1.0, -1.0], QuarterTurns::minus_i_pow(l), -1.0),
        BaseCaseVariant::Lm1m1 => ([1.0, 1.0, 1.0, 1.0], QuarterTurns::minus_i_pow(l + 1), 1.0),
    }
}

/// All three exponential base cases at order `ell` as jets of order
/// `order` in `s = -p^2`.
pub fn exp_leaf_set<T: Real>(
    ev: &Evaluator,
    tier: Tier,
    ell: usize,
    r: [f64; 3],
    p: f64,
    order: usize,
) -> Result<LeafSet<T>> {
    let [r1, r2, r3] = r;
    let top = order_bucket(ell);
    let max_terms = ev.policy.max_terms;
    // dR/ds = i / r1, so the k-th coefficient is Q^{(k)} (i/r1)^k / k!
    let r1t = T::from_f64(r1);
    let mut lines: Vec<Vec<Complex<T>>> = Vec::with_capacity(4);
    for &(s2, s3) in &LINES {
        let u = line_sum(r2, r3, s2, s3);
        let key = KernelKey::legendre(tier, p, r1, u, top);
        let table = ev.kernels.get_or_compute(key, || LegendreTable::<T>::compute(p, r1, &u, top, max_terms))?;
        let qm1 = if ell > 0 { Some(&table.q[ell - 1]) } else { None };
        let d = legendre_q_derivatives(ell, &table.z, &table.q[ell], qm1, order);
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut scale = T::one();
        for (k, dk) in d.into_iter().enumerate() {
            if k > 0 {
                scale = scale / (r1t.clone() * T::from_i64(k as i64));
            }
            let c = QuarterTurns::i_pow(k as i64).apply(dk).scale(scale.clone());
            coeffs.push(c);
        }
        lines.push(coeffs);
    }
    let norm = T::one() / (T::from_f64(r1) * T::from_f64(r2) * T::from_f64(r3) * T::from_i64(4));
    let normf = norm.to_f64();
    let mut mag = vec![0f64; order + 1];
    for line in &lines {
        for (k, c) in line.iter().enumerate() {
            mag[k] += cabs(c).to_f64() * normf;
        }
    }
    let make = |variant: BaseCaseVariant| {
        let (signs, phase, sign) = pattern(variant, ell);
        let mut re = Jet::zero(order);
        let mut im = vec![0f64; order + 1];
        for k in 0..=order {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (line, s) in lines.iter().zip(signs) {
                if s > 0.0 {
                    acc = acc + &line[k];
                } else {
                    acc = acc - &line[k];
                }
            }
            let v = phase.apply(acc).scale(norm.clone() * T::from_f64(sign));
            im[k] = v.im.to_f64();
            re.c[k] = v.re;
        }
        LeafValue { re, im, mag: mag.clone() }
    };
    Ok(LeafSet { v: [make(BaseCaseVariant::L00), make(BaseCaseVariant::Lm10), make(BaseCaseVariant::Lm1m1)] })
}

/// One exponential base case with the process-wide evaluator.
pub fn exp_base_case(ell: usize, variant: BaseCaseVariant, radii: &RadiiTriple, p: f64) -> Result<EvalResult> {
    crate::basecase::base_case_eval(global(), DampingKind::Exp, ell, variant, radii, p)
}
