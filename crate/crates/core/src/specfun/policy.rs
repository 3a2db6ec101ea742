//! Working-precision policy and the escalation ladder.
//!
//! A computation is expressed once as a [`TierTask`], generic over the
//! scalar type. [`escalate`] runs it in plain double, then in
//! double-double, then in MPFR at increasing bit counts, and accepts the
//! first tier whose result agrees with the previous tier to the target
//! tolerance. Since each step cuts the unit roundoff by many orders of
//! magnitude, agreement with the previous tier bounds the error of the
//! accepted one by the tolerance.

use serde::{Deserialize, Serialize};

use super::dd::Dd;
use super::mp::{self, Mp};
use super::real::Real;
use crate::error::{Error, Result};

/// Arithmetic used for one attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tier {
    Double,
    DoubleDouble,
    Multi(u32),
}

impl Tier {
    pub fn label(&self) -> String {
        match self {
            Tier::Double => "double".into(),
            Tier::DoubleDouble => "double-double".into(),
            Tier::Multi(b) => format!("mpfr-{b}"),
        }
    }

    pub fn unit_roundoff(&self) -> f64 {
        match self {
            Tier::Double => f64::EPSILON / 2.0,
            Tier::DoubleDouble => 4.93e-32,
            Tier::Multi(b) => 2f64.powi(-(*b as i32)),
        }
    }

    /// Stable key for caches.
    pub fn id(&self) -> u32 {
        match self {
            Tier::Double => 53,
            Tier::DoubleDouble => 106,
            Tier::Multi(b) => *b,
        }
    }
}

const MULTI_STEPS: [u32; 6] = [192, 320, 512, 768, 1024, 1536];

/// Numerical policy shared by all kernels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    /// Target relative tolerance of accepted results.
    pub tolerance: f64,
    /// Ratio of the largest partial sum to the result above which a
    /// single-shot series is re-run in wider arithmetic.
    pub escalation_threshold: f64,
    /// Term budget of every series.
    pub max_terms: usize,
    /// Widest arithmetic the ladder may reach.
    pub max_bits: u32,
    /// Starting tier of the ladder.
    pub start: Tier,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            tolerance: 1e-12,
            escalation_threshold: 1e8,
            max_terms: 10_000,
            max_bits: 1024,
            start: Tier::Double,
        }
    }
}

impl PrecisionPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain("tolerance must be > 0".into()));
        }
        if !(self.escalation_threshold > 1.0) {
            return Err(Error::Domain("escalation threshold must be > 1".into()));
        }
        if self.max_terms < 1 {
            return Err(Error::Domain("max terms must be >= 1".into()));
        }
        Ok(())
    }

    /// Tiers from `start` up to `max_bits`.
    pub fn ladder(&self) -> Vec<Tier> {
        let mut all = vec![Tier::Double, Tier::DoubleDouble];
        all.extend(MULTI_STEPS.iter().copied().filter(|b| *b <= self.max_bits).map(Tier::Multi));
        all.into_iter().filter(|t| *t >= self.start).collect()
    }

    /// Restricts the ladder to double and double-double.
    pub fn double_double_only(mut self) -> Self {
        self.max_bits = 0;
        self
    }
}

/// A computation that can be run in any working precision.
pub trait TierTask {
    type Output;
    fn run<T: Real>(&self) -> Result<Self::Output>;
}

/// Tier of the arithmetic `T` under the current MPFR precision.
pub fn current_tier<T: Real>() -> Tier {
    match T::LABEL {
        "f64" => Tier::Double,
        "double-double" => Tier::DoubleDouble,
        _ => Tier::Multi(mp::bits()),
    }
}

/// Runs `task` in the arithmetic named by `tier`.
pub fn run_at<K: TierTask>(tier: Tier, task: &K) -> Result<K::Output> {
    match tier {
        Tier::Double => task.run::<f64>(),
        Tier::DoubleDouble => task.run::<Dd>(),
        Tier::Multi(bits) => mp::with_bits(bits, || task.run::<Mp>()),
    }
}

/// Outcome of [`escalate`].
#[derive(Clone, Debug)]
pub struct Escalated<O> {
    pub output: O,
    pub tier: Tier,
    /// Tiers tried beyond the first.
    pub escalations: usize,
    /// Largest relative change between the last two tiers.
    pub change: f64,
    /// True when the ladder ran out before two tiers agreed.
    pub unconverged: bool,
}

/// Runs `task` up the ladder until two consecutive tiers agree.
///
/// `values` projects an output onto the numbers that must agree;
/// entries whose magnitude is below `floor` are compared absolutely.
pub fn escalate<K, F>(policy: &PrecisionPolicy, task: &K, values: F, floor: f64) -> Result<Escalated<K::Output>>
where
    K: TierTask,
    F: Fn(&K::Output) -> Vec<f64>,
{
    let ladder = policy.ladder();
    if ladder.is_empty() {
        return Err(Error::Domain("empty precision ladder".into()));
    }
    let mut prev: Option<Vec<f64>> = None;
    let mut last_err: Option<Error> = None;
    let mut last: Option<(K::Output, Tier, f64)> = None;
    for (i, tier) in ladder.iter().enumerate() {
        let out = match run_at(*tier, task) {
            Ok(o) => o,
            Err(e) => {
                // an overflow or non-convergence at low precision is worth
                // retrying higher up; domain errors are final
                if e.is_numerical() {
                    last_err = Some(e);
                    prev = None;
                    continue;
                }
                return Err(e);
            }
        };
        let cur = values(&out);
        let mut change = f64::INFINITY;
        if let Some(p) = &prev {
            change = max_rel_change(p, &cur, floor);
            if change <= policy.tolerance {
                return Ok(Escalated { output: out, tier: *tier, escalations: i, change, unconverged: false });
            }
        }
        prev = Some(cur);
        last = Some((out, *tier, change));
    }
    match last {
        Some((output, tier, change)) => Ok(Escalated {
            output,
            tier,
            escalations: ladder.len() - 1,
            change,
            unconverged: true,
        }),
        None => Err(last_err.unwrap_or(Error::Domain("no tier produced a value".into()))),
    }
}

fn max_rel_change(a: &[f64], b: &[f64], floor: f64) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut worst = 0f64;
    for (x, y) in a.iter().zip(b) {
        if !x.is_finite() || !y.is_finite() {
            return f64::INFINITY;
        }
        let d = (x - y).abs();
        let scale = x.abs().max(y.abs()).max(floor);
        let r = if d == 0.0 { 0.0 } else { d / scale };
        worst = worst.max(r);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Cancel;
    impl TierTask for Cancel {
        type Output = f64;
        fn run<T: Real>(&self) -> Result<f64> {
            // (1 + 1e-20) - 1 loses everything in double
            let one = T::one();
            let tiny = T::from_f64(1e-20);
            Ok(((one.clone() + &tiny) - &one).to_f64())
        }
    }

    #[test]
    fn ladder_climbs_until_agreement() {
        let p = PrecisionPolicy::default();
        let out = escalate(&p, &Cancel, |v| vec![*v], 0.0).unwrap();
        assert!((out.output - 1e-20).abs() < 1e-32);
        assert!(out.tier > Tier::Double);
        assert!(!out.unconverged);
    }

    #[test]
    fn ladder_respects_cap() {
        let p = PrecisionPolicy::default().double_double_only();
        assert_eq!(p.ladder(), vec![Tier::Double, Tier::DoubleDouble]);
    }
}
