//! The three anchor integrals shared by both dampings.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{climb, reality_bound, Evaluator, Graded, LeafKey};
use crate::error::{Error, Result};
use crate::kernels::thread_kernel_calls;
use crate::specfun::jet::Jet;
use crate::specfun::policy::{current_tier, Tier, TierTask};
use crate::specfun::real::Real;
use crate::types::{DampingKind, Diagnostics, EvalResult, Method, RadiiTriple};
use crate::{expdamp, gaussdamp};

/// `(l, 0, 0)`, `(l, -1, 0)` and `(l, -1, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseCaseVariant {
    L00,
    Lm10,
    Lm1m1,
}

impl BaseCaseVariant {
    pub const ALL: [BaseCaseVariant; 3] = [BaseCaseVariant::L00, BaseCaseVariant::Lm10, BaseCaseVariant::Lm1m1];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Orders of the second and third slot.
    pub fn tail_orders(self) -> (i32, i32) {
        match self {
            BaseCaseVariant::L00 => (0, 0),
            BaseCaseVariant::Lm10 => (-1, 0),
            BaseCaseVariant::Lm1m1 => (-1, -1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BaseCaseVariant::L00 => "L00",
            BaseCaseVariant::Lm10 => "Lm10",
            BaseCaseVariant::Lm1m1 => "Lm1m1",
        }
    }
}

/// One base case as a jet in `s = -p^2`.
#[derive(Clone, Debug)]
pub struct LeafValue<T> {
    /// Real part.
    pub re: Jet<T>,
    /// Imaginary part per coefficient, kept only as a diagnostic.
    pub im: Vec<f64>,
    /// Sum of the magnitudes of the summed terms per coefficient; the
    /// rounding error of `re` is a small multiple of unit roundoff times
    /// this.
    pub mag: Vec<f64>,
}

/// All three variants at one order and one radii assignment.
#[derive(Clone, Debug)]
pub struct LeafSet<T> {
    pub v: [LeafValue<T>; 3],
}

impl<T: Real> LeafSet<T> {
    pub fn get(&self, variant: BaseCaseVariant) -> &LeafValue<T> {
        &self.v[variant.index()]
    }
}

/// The base-case set at `ell` for slot radii `r`, from cache or computed.
pub fn leaf_set<T: Real>(
    ev: &Evaluator,
    tier: Tier,
    kind: DampingKind,
    p: f64,
    r: [f64; 3],
    ell: usize,
    order: usize,
) -> Result<Arc<LeafSet<T>>> {
    if ell > ev.config.max_leaf_order {
        return Err(Error::OrderLimit { ell: ell as i64, max: ev.config.max_leaf_order as i64 });
    }
    let key = LeafKey {
        tier: tier.id(),
        gauss: kind == DampingKind::Gauss,
        p: p.to_bits(),
        radii: [r[0].to_bits(), r[1].to_bits(), r[2].to_bits()],
        ell: ell as u32,
        order: order as u32,
    };
    if let Some(v) = ev.leaves.get::<LeafSet<T>>(&key) {
        return Ok(v);
    }
    let set = match kind {
        DampingKind::Exp => expdamp::exp_leaf_set::<T>(ev, tier, ell, r, p, order)?,
        DampingKind::Gauss => gaussdamp::gauss_leaf_set::<T>(ev, tier, ell, r, p, order)?,
    };
    let set = Arc::new(set);
    ev.leaves.insert(key, set.clone());
    Ok(set)
}

/// Below this `p^2 / r1` the exponential arguments crowd the branch cut.
pub const SMALL_P_RATIO: f64 = 1e-4;

struct BaseTask<'a> {
    ev: &'a Evaluator,
    kind: DampingKind,
    ell: usize,
    variant: BaseCaseVariant,
    r: [f64; 3],
    p: f64,
}

/// `(value, imaginary part, magnitude bound, unit roundoff)`.
type BaseOut = (f64, f64, f64, f64);

impl TierTask for BaseTask<'_> {
    type Output = Graded<BaseOut>;

    fn run<T: Real>(&self) -> Result<Self::Output> {
        let tier = current_tier::<T>();
        let set = leaf_set::<T>(self.ev, tier, self.kind, self.p, self.r, self.ell, 0)?;
        let leaf = set.get(self.variant);
        let value = leaf.re.value().to_f64();
        let im = leaf.im[0];
        let u = tier.unit_roundoff().max(f64::EPSILON * 0.5 * f64::EPSILON);
        let bound = self.ev.config.error_constant * u * leaf.mag[0];
        let accurate = bound <= self.ev.policy.tolerance * value.abs();
        let real = im.abs() <= reality_bound(value).max(bound);
        Ok(Graded { out: (value, im, leaf.mag[0], tier.unit_roundoff()), accurate, real })
    }
}

/// One base case, climbing the precision ladder until the running error
/// bound meets the tolerance.
pub fn base_case_eval(
    ev: &Evaluator,
    kind: DampingKind,
    ell: usize,
    variant: BaseCaseVariant,
    radii: &RadiiTriple,
    p: f64,
) -> Result<EvalResult> {
    radii.validate()?;
    let p = kind.with_p(p).canonical()?.p();
    let calls0 = thread_kernel_calls();
    let task = BaseTask { ev, kind, ell, variant, r: radii.as_array(), p };
    let c = climb(&ev.policy, &task)?;
    let (value, im, mag, u) = c.out;
    let error_estimate = ev.config.error_constant * u * mag;
    if !c.real {
        return Err(Error::RealityViolation { value, residual: im.abs(), bound: reality_bound(value) });
    }
    let mut flags = Vec::new();
    if !c.accurate {
        flags.push("precision-exhausted".to_string());
    }
    if kind == DampingKind::Exp && p * p / radii.r1 < SMALL_P_RATIO {
        flags.push("small-p".to_string());
    }
    Ok(EvalResult {
        value,
        method: Method::BaseCase,
        im_residual: im,
        error_estimate,
        diagnostics: Diagnostics {
            base_cases: 1,
            escalations: c.escalations,
            precision: c.tier.label(),
            kernel_calls: thread_kernel_calls() - calls0,
            cancellation: if value != 0.0 { mag / value.abs() } else { f64::INFINITY },
            flags,
        },
    })
}
