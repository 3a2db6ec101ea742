//! Problem statement and result types shared by every evaluation route.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Three strictly positive radii.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiiTriple {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl RadiiTriple {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let r = RadiiTriple { r1, r2, r3 };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, v) in self.as_array().iter().enumerate() {
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::Domain(format!(
                    "radius r{} = {v} must be finite and strictly positive",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        RadiiTriple { r1: a[0], r2: a[1], r3: a[2] }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        RadiiTriple { r1: self.r1 * lambda, r2: self.r2 * lambda, r3: self.r3 * lambda }
    }

    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3)
    }
}

/// Damping weight applied to the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "lowercase")]
pub enum Damping {
    /// Weight `exp(-p^2 k)`.
    Exp(f64),
    /// Weight `exp(-(p k)^2)`.
    Gauss(f64),
}

impl Damping {
    pub fn p(&self) -> f64 {
        match *self {
            Damping::Exp(p) | Damping::Gauss(p) => p,
        }
    }

    pub fn kind(&self) -> DampingKind {
        match self {
            Damping::Exp(_) => DampingKind::Exp,
            Damping::Gauss(_) => DampingKind::Gauss,
        }
    }

    pub fn with_p(&self, p: f64) -> Self {
        match self {
            Damping::Exp(_) => Damping::Exp(p),
            Damping::Gauss(_) => Damping::Gauss(p),
        }
    }

    /// Rejects p = 0 and non-finite p; a negative p is folded to |p|
    /// since only p^2 enters either weight.
    pub fn canonical(&self) -> Result<Self> {
        let p = self.p();
        if !p.is_finite() || p == 0.0 {
            return Err(Error::Domain(format!(
                "damping parameter p = {p} must be finite and p != 0"
            )));
        }
        Ok(self.with_p(p.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DampingKind {
    Exp,
    Gauss,
}

impl DampingKind {
    pub fn with_p(self, p: f64) -> Damping {
        match self {
            DampingKind::Exp => Damping::Exp(p),
            DampingKind::Gauss => Damping::Gauss(p),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DampingKind::Exp => "exp",
            DampingKind::Gauss => "gauss",
        }
    }
}

/// Spherical Bessel orders at the public boundary.
pub type OrderTriple = [i32; 3];

/// `∫ k^n w(k) j_l1(k r1) j_l2(k r2) j_l3(k r3) dk` over `[0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedIntegralSpec {
    pub orders: OrderTriple,
    pub radii: RadiiTriple,
    pub damping: Damping,
    pub n: u32,
}

impl WeightedIntegralSpec {
    pub fn new(orders: OrderTriple, radii: RadiiTriple, damping: Damping, n: u32) -> Self {
        WeightedIntegralSpec { orders, radii, damping, n }
    }

    /// Checks the invariants common to every route.
    pub fn validate(&self) -> Result<()> {
        for (i, l) in self.orders.iter().enumerate() {
            if *l < 0 {
                return Err(Error::Domain(format!("order l{} = {l} must be >= 0", i + 1)));
            }
        }
        self.radii.validate()?;
        self.damping.canonical()?;
        Ok(())
    }
}

/// How a value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Recursion,
    HankelBowman,
    Quadrature,
    BaseCase,
    Grid,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Recursion => "recursion",
            Method::HankelBowman => "hankel-bowman",
            Method::Quadrature => "quadrature",
            Method::BaseCase => "base-case",
            Method::Grid => "grid",
        }
    }
}

/// Bookkeeping attached to every result.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Distinct base cases evaluated (or reused) for this result.
    pub base_cases: usize,
    /// Number of precision steps taken beyond plain double.
    pub escalations: usize,
    /// Arithmetic that produced the accepted value.
    pub precision: String,
    /// Special-function kernel evaluations attributed to this result.
    pub kernel_calls: u64,
    /// Ratio of the largest partial magnitude to the result.
    pub cancellation: f64,
    /// Non-fatal quality notes.
    pub flags: Vec<String>,
}

/// Value plus the evidence needed to trust it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub method: Method,
    /// Imaginary part discarded when returning a real value.
    pub im_residual: f64,
    /// Estimated absolute error.
    pub error_estimate: f64,
    pub diagnostics: Diagnostics,
}

impl EvalResult {
    pub fn is_flagged(&self) -> bool {
        !self.diagnostics.flags.is_empty()
    }
}

/// Relative difference with a symmetric denominator; zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        return 0.0;
    }
    d / a.abs().max(b.abs())
}
