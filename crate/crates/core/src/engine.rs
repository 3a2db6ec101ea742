//! Evaluation context: numerical policy, limits and the shared caches.

use std::any::Any;
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::KernelStore;
use crate::specfun::policy::{run_at, PrecisionPolicy, Tier, TierTask};

/// Limits applied at the public boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Largest public order on the recursion routes.
    pub max_order: i32,
    /// Largest base-case order; the anchor slot climbs by up to the sum
    /// of the other two orders during a reduction.
    pub max_leaf_order: usize,
    /// Largest parameter-derivative order.
    pub max_derivative: usize,
    /// Suggested caps of the nested-sum route.
    pub hb_max_order: i32,
    pub hb_max_power: u32,
    /// Lifts the nested-sum caps.
    pub hb_override_caps: bool,
    /// Relative-to-result constant multiplying unit roundoff in the
    /// running error bound.
    pub error_constant: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_order: 20,
            max_leaf_order: 64,
            max_derivative: 6,
            hb_max_order: 6,
            hb_max_power: 6,
            hb_override_caps: false,
            error_constant: 64.0,
        }
    }
}

type Entry = Arc<dyn Any + Send + Sync>;

/// Memo of values keyed by arbitrary hashable keys; inserts are
/// idempotent because stored values are deterministic functions of the
/// key.
pub struct Memo<K> {
    map: Mutex<HashMap<K, Entry>>,
    capacity: usize,
}

impl<K: Hash + Eq + Clone> Memo<K> {
    pub fn new(capacity: usize) -> Self {
        Memo { map: Mutex::new(HashMap::new()), capacity }
    }

    pub fn get<V: Any + Send + Sync>(&self, key: &K) -> Option<Arc<V>> {
        self.map.lock().unwrap().get(key).and_then(|e| e.clone().downcast::<V>().ok())
    }

    pub fn insert<V: Any + Send + Sync>(&self, key: K, v: Arc<V>) {
        let mut m = self.map.lock().unwrap();
        if m.len() >= self.capacity {
            m.clear();
        }
        m.insert(key, v as Entry);
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.lock().unwrap().clear();
    }
}

/// Cache key of one base-case set (all three variants at one order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeafKey {
    pub tier: u32,
    pub gauss: bool,
    pub p: u64,
    pub radii: [u64; 3],
    pub ell: u32,
    pub order: u32,
}

/// Policy, limits and caches used by every route.
pub struct Evaluator {
    pub policy: PrecisionPolicy,
    pub config: EngineConfig,
    pub kernels: KernelStore,
    pub leaves: Memo<LeafKey>,
}

impl std::fmt::Debug for Evaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Evaluator").field("policy", &self.policy).field("config", &self.config).finish()
    }
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new(PrecisionPolicy::default(), EngineConfig::default())
    }
}

impl Evaluator {
    pub fn new(policy: PrecisionPolicy, config: EngineConfig) -> Self {
        Evaluator { policy, config, kernels: KernelStore::new(), leaves: Memo::new(200_000) }
    }

    /// Drops every cached table and base case.
    pub fn clear_caches(&self) {
        self.kernels.clear();
        self.leaves.clear();
    }
}

/// Process-wide evaluator used by the free functions.
pub fn global() -> &'static Evaluator {
    static G: OnceLock<Evaluator> = OnceLock::new();
    G.get_or_init(Evaluator::default)
}

/// Output of one tier together with its self-assessment.
#[derive(Clone, Debug)]
pub struct Graded<O> {
    pub out: O,
    /// Running error bound within tolerance.
    pub accurate: bool,
    /// Imaginary residual within its bound.
    pub real: bool,
}

/// Accepted output of [`climb`].
#[derive(Clone, Debug)]
pub struct Climbed<O> {
    pub out: O,
    pub tier: Tier,
    pub escalations: usize,
    pub accurate: bool,
    pub real: bool,
}

/// Runs `task` from the policy's first tier upward until its own error
/// bound and reality check are satisfied; the top tier's output is
/// returned (with the failed checks recorded) when none qualifies.
pub fn climb<K, O>(policy: &PrecisionPolicy, task: &K) -> Result<Climbed<O>>
where
    K: TierTask<Output = Graded<O>>,
{
    let ladder = policy.ladder();
    let mut last: Option<Climbed<O>> = None;
    let mut last_err: Option<Error> = None;
    for (i, tier) in ladder.iter().enumerate() {
        match run_at(*tier, task) {
            Ok(g) => {
                let done = g.accurate && g.real;
                let c = Climbed { out: g.out, tier: *tier, escalations: i, accurate: g.accurate, real: g.real };
                if done {
                    return Ok(c);
                }
                last = Some(c);
            }
            Err(e) if e.is_numerical() => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    match last {
        Some(c) => Ok(c),
        None => Err(last_err.unwrap_or_else(|| Error::Domain("empty precision ladder".into()))),
    }
}

/// Reality bound shared by the recursion routes.
pub fn reality_bound(value: f64) -> f64 {
    1e-12f64.max(1e-10 * value.abs())
}
