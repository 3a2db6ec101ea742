//! Reduction of arbitrary order triples to the three base cases.
//!
//! The three-term relation of spherical Bessel functions, applied once to
//! the second slot and once (through `1/k`) to the first, gives
//!
//! `f(a, b, c) = (r1/r2) (2b-1)/(2a+1) [f(a-1, b-1, c) + f(a+1, b-1, c)] - f(a, b-2, c)`.
//!
//! Every node is canonicalized (orders descending, radii co-permuted) so
//! the anchor slot always holds the largest order and the coefficient
//! `(2b-1)/(2a+1)` never exceeds one. Each application lowers the sum of
//! the two trailing orders, so the plan is finite and acyclic.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::basecase::{leaf_set, BaseCaseVariant};
use crate::engine::{climb, global, reality_bound, Evaluator, Graded};
use crate::error::{Error, Result};
use crate::kernels::thread_kernel_calls;
use crate::specfun::jet::Jet;
use crate::specfun::policy::{current_tier, TierTask};
use crate::specfun::real::Real;
use crate::types::{DampingKind, Diagnostics, EvalResult, Method, OrderTriple, RadiiTriple, WeightedIntegralSpec};

/// Coefficient products above this are reported as ill-conditioned.
pub const CONDITIONING_WARNING: f64 = 1e6;

/// Orders sorted descending with the radii co-permuted; ties are broken
/// by ascending radius so that every permutation of the same problem
/// lands on one representative. `perm[i]` is the input slot moved to
/// slot `i`.
pub fn canonicalize(orders: OrderTriple, radii: RadiiTriple) -> (OrderTriple, RadiiTriple, [usize; 3]) {
    let r = radii.as_array();
    let perm = sort_slots(orders, r);
    let o = [orders[perm[0]], orders[perm[1]], orders[perm[2]]];
    let rr = RadiiTriple::from_array([r[perm[0]], r[perm[1]], r[perm[2]]]);
    (o, rr, perm)
}

fn sort_slots(orders: OrderTriple, r: [f64; 3]) -> [usize; 3] {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| {
        orders[j]
            .cmp(&orders[i])
            .then(r[i].total_cmp(&r[j]))
            .then(i.cmp(&j))
    });
    idx
}

/// One leaf of a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseCaseKey {
    pub ell: usize,
    pub variant: BaseCaseVariant,
    /// Radius index (into the root's canonical radii) of each base-case
    /// slot.
    pub radii_permutation: [usize; 3],
}

impl BaseCaseKey {
    pub fn radii(&self, r: &[f64; 3]) -> [f64; 3] {
        let p = self.radii_permutation;
        [r[p[0]], r[p[1]], r[p[2]]]
    }
}

/// One use of the three-term relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionApplication {
    /// Orders of the target, aligned with `slots`.
    pub target: OrderTriple,
    /// Radius index of each slot of the target.
    pub slots: [usize; 3],
    /// `f(a-1, b-1, c)`, `f(a+1, b-1, c)`, `f(a, b-2, c)` in the target's
    /// slot order.
    pub sources: [OrderTriple; 3],
    /// Node indices of the sources.
    pub source_nodes: [usize; 3],
    /// `(2b-1, 2a+1)`.
    pub order_ratio: (i64, i64),
}

impl RecursionApplication {
    /// `(r_a / r_b) (2b-1)/(2a+1)`.
    pub fn coefficient(&self, r: &[f64; 3]) -> f64 {
        r[self.slots[0]] / r[self.slots[1]] * self.order_ratio.0 as f64 / self.order_ratio.1 as f64
    }

    fn coefficient_t<T: Real>(&self, r: &[f64; 3]) -> T {
        T::from_f64(r[self.slots[0]]) * T::from_i64(self.order_ratio.0)
            / (T::from_f64(r[self.slots[1]]) * T::from_i64(self.order_ratio.1))
    }
}

/// A node of the plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PlanNode {
    Leaf(BaseCaseKey),
    /// Index into [`ReductionPlan::applications`].
    Interior(usize),
}

/// The DAG from a target triple to its base cases, in post order: every
/// node's sources precede it and the root is last.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionPlan {
    pub root: OrderTriple,
    pub nodes: Vec<PlanNode>,
    pub applications: Vec<RecursionApplication>,
    pub leaves: Vec<BaseCaseKey>,
}

impl ReductionPlan {
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn root_node(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Largest base-case order.
    pub fn max_leaf_order(&self) -> usize {
        self.leaves.iter().map(|l| l.ell).max().unwrap_or(0)
    }

    /// Product of `max(1, |coefficient|)` along the worst root-to-leaf
    /// path, a crude amplification estimate.
    pub fn amplification(&self, r: &[f64; 3]) -> f64 {
        let mut amp = vec![1f64; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let PlanNode::Interior(a) = n {
                let app = &self.applications[*a];
                let c = app.coefficient(r).abs().max(1.0);
                let s = app.source_nodes;
                amp[i] = (c * amp[s[0]].max(amp[s[1]])).max(amp[s[2]]);
            }
        }
        *amp.last().unwrap_or(&1.0)
    }
}

type NodeId = ([i32; 3], [usize; 3]);

struct Builder<'a> {
    r: &'a [f64; 3],
    index: HashMap<NodeId, usize>,
    plan: ReductionPlan,
    leaf_index: HashMap<BaseCaseKey, usize>,
}

impl Builder<'_> {
    fn canonical(&self, orders: [i32; 3], slots: [usize; 3]) -> NodeId {
        let rr = [self.r[slots[0]], self.r[slots[1]], self.r[slots[2]]];
        let p = sort_slots(orders, rr);
        ([orders[p[0]], orders[p[1]], orders[p[2]]], [slots[p[0]], slots[p[1]], slots[p[2]]])
    }

    /// Iterative post-order construction; the recursion depth would
    /// otherwise grow with the orders.
    fn build(&mut self, root: NodeId) -> Result<usize> {
        let mut stack: Vec<(NodeId, bool)> = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if self.index.contains_key(&id) {
                continue;
            }
            let (o, s) = id;
            if let Some(key) = leaf_key(o, s) {
                self.push_leaf(id, key);
                continue;
            }
            let children = self.children(o, s);
            if expanded {
                let source_nodes = [self.index[&children[0]], self.index[&children[1]], self.index[&children[2]]];
                let app = RecursionApplication {
                    target: o,
                    slots: s,
                    sources: [
                        [o[0] - 1, o[1] - 1, o[2]],
                        [o[0] + 1, o[1] - 1, o[2]],
                        [o[0], o[1] - 2, o[2]],
                    ],
                    source_nodes,
                    order_ratio: (2 * o[1] as i64 - 1, 2 * o[0] as i64 + 1),
                };
                self.plan.applications.push(app);
                self.plan.nodes.push(PlanNode::Interior(self.plan.applications.len() - 1));
                self.index.insert(id, self.plan.nodes.len() - 1);
            } else {
                stack.push((id, true));
                for c in children.iter().rev() {
                    if !self.index.contains_key(c) {
                        stack.push((*c, false));
                    }
                }
            }
        }
        Ok(self.index[&root])
    }

    fn children(&self, o: [i32; 3], s: [usize; 3]) -> [NodeId; 3] {
        [
            self.canonical([o[0] - 1, o[1] - 1, o[2]], s),
            self.canonical([o[0] + 1, o[1] - 1, o[2]], s),
            self.canonical([o[0], o[1] - 2, o[2]], s),
        ]
    }

    fn push_leaf(&mut self, id: NodeId, key: BaseCaseKey) {
        self.plan.nodes.push(PlanNode::Leaf(key));
        self.index.insert(id, self.plan.nodes.len() - 1);
        if !self.leaf_index.contains_key(&key) {
            self.leaf_index.insert(key, self.plan.leaves.len());
            self.plan.leaves.push(key);
        }
    }
}

/// The base case a canonical node reduces to, if it is one.
fn leaf_key(o: [i32; 3], s: [usize; 3]) -> Option<BaseCaseKey> {
    let ell = usize::try_from(o[0]).ok()?;
    let (variant, perm) = match (o[1], o[2]) {
        (0, 0) => (BaseCaseVariant::L00, s),
        (0, -1) => (BaseCaseVariant::Lm10, [s[0], s[2], s[1]]),
        (-1, 0) => (BaseCaseVariant::Lm10, s),
        (-1, -1) => (BaseCaseVariant::Lm1m1, s),
        _ => return None,
    };
    Some(BaseCaseKey { ell, variant, radii_permutation: perm })
}

/// Plan for orders already in canonical position against the given
/// canonical radii (used to break ties between equal orders).
pub fn reduction_plan_for(orders: OrderTriple, radii: &RadiiTriple) -> Result<ReductionPlan> {
    for l in orders {
        if l < -1 {
            return Err(Error::Domain(format!("order {l} below -1")));
        }
    }
    if orders.iter().all(|&l| l < 0) {
        return Err(Error::Domain("at least one order must be >= 0".into()));
    }
    let r = radii.as_array();
    let mut b = Builder {
        r: &r,
        index: HashMap::new(),
        plan: ReductionPlan { root: orders, nodes: Vec::new(), applications: Vec::new(), leaves: Vec::new() },
        leaf_index: HashMap::new(),
    };
    let root = b.canonical(orders, [0, 1, 2]);
    b.build(root)?;
    b.plan.root = orders;
    Ok(b.plan)
}

/// Plan for `orders` with distinct radii in slot order.
pub fn reduction_plan(orders: OrderTriple) -> Result<ReductionPlan> {
    let max = global().config.max_order;
    if let Some(&l) = orders.iter().find(|&&l| l > max) {
        return Err(Error::OrderLimit { ell: l as i64, max: max as i64 });
    }
    reduction_plan_for(orders, &RadiiTriple::from_array([1.0, 2.0, 3.0]))
}

/// Executed plan in arithmetic `T`.
pub struct PlanRun<T> {
    pub root: Jet<T>,
    /// Running magnitude bound per coefficient.
    pub mag: Vec<f64>,
    /// Imaginary residual per coefficient.
    pub im: Vec<f64>,
    /// Order-0 value of every node.
    pub node_values: Vec<f64>,
}

/// Runs `plan` bottom-up with base-case jets of order `order`.
pub fn run_plan<T: Real>(
    ev: &Evaluator,
    kind: DampingKind,
    plan: &ReductionPlan,
    radii: &[f64; 3],
    p: f64,
    order: usize,
) -> Result<PlanRun<T>> {
    let tier = current_tier::<T>();
    let n = plan.nodes.len();
    let mut val: Vec<Jet<T>> = Vec::with_capacity(n);
    let mut mag: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut im: Vec<Vec<f64>> = Vec::with_capacity(n);
    for node in &plan.nodes {
        match node {
            PlanNode::Leaf(key) => {
                let set = leaf_set::<T>(ev, tier, kind, p, key.radii(radii), key.ell, order)?;
                let leaf = set.get(key.variant);
                val.push(leaf.re.clone());
                mag.push(leaf.mag.clone());
                im.push(leaf.im.clone());
            }
            PlanNode::Interior(a) => {
                let app = &plan.applications[*a];
                let [i, j, k] = app.source_nodes;
                let c = app.coefficient_t::<T>(radii);
                let cf = c.to_f64().abs();
                let sum = &val[i] + &val[j];
                let v = &sum.scale(&c) - &val[k];
                let m: Vec<f64> = (0..=order)
                    .map(|d| {
                        // propagated bound plus the rounding of this step
                        let a = cf * (mag[i][d] + mag[j][d]) + mag[k][d];
                        a + cf * (val[i].c[d].to_f64().abs() + val[j].c[d].to_f64().abs()) + val[k].c[d].to_f64().abs()
                    })
                    .collect();
                let cs = c.to_f64();
                let iv: Vec<f64> = (0..=order).map(|d| cs * (im[i][d] + im[j][d]) - im[k][d]).collect();
                val.push(v);
                mag.push(m);
                im.push(iv);
            }
        }
    }
    let node_values = val.iter().map(|v| v.value().to_f64()).collect();
    Ok(PlanRun { root: val.pop().unwrap(), mag: mag.pop().unwrap(), im: im.pop().unwrap(), node_values })
}

/// Accepted jet of one plan.
#[derive(Clone, Debug)]
pub struct JetResult {
    /// Taylor coefficients in `s = -p^2`.
    pub coeffs: Vec<f64>,
    pub mag: Vec<f64>,
    pub im: Vec<f64>,
    pub node_values: Vec<f64>,
    pub unit_roundoff: f64,
}

struct PlanTask<'a> {
    ev: &'a Evaluator,
    kind: DampingKind,
    plan: &'a ReductionPlan,
    radii: [f64; 3],
    p: f64,
    order: usize,
}

impl TierTask for PlanTask<'_> {
    type Output = Graded<JetResult>;

    fn run<T: Real>(&self) -> Result<Self::Output> {
        let run = run_plan::<T>(self.ev, self.kind, self.plan, &self.radii, self.p, self.order)?;
        let u = current_tier::<T>().unit_roundoff();
        let d = self.order;
        let value = run.root.c[d].to_f64();
        let bound = self.ev.config.error_constant * u * run.mag[d];
        let accurate = bound <= self.ev.policy.tolerance * value.abs();
        let real = run.im[d].abs() <= reality_bound(value).max(bound);
        Ok(Graded {
            out: JetResult {
                coeffs: run.root.to_f64(),
                mag: run.mag,
                im: run.im,
                node_values: run.node_values,
                unit_roundoff: u,
            },
            accurate,
            real,
        })
    }
}

/// Full output of [`evaluate_orders`].
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub result: EvalResult,
    pub jet: JetResult,
    pub plan: ReductionPlan,
    /// Canonical radii the plan refers to.
    pub radii: [f64; 3],
}

/// Evaluates `orders` (each `>= -1`) and the `order`-th Taylor
/// coefficient in `-p^2`, climbing the precision ladder until the
/// running error bound of that coefficient meets the tolerance.
pub fn evaluate_orders(
    ev: &Evaluator,
    kind: DampingKind,
    orders: OrderTriple,
    radii: &RadiiTriple,
    p: f64,
    order: usize,
) -> Result<Evaluated> {
    radii.validate()?;
    let p = kind.with_p(p).canonical()?.p();
    let (o, r, _) = canonicalize(orders, *radii);
    let plan = reduction_plan_for(o, &r)?;
    if plan.max_leaf_order() > ev.config.max_leaf_order {
        return Err(Error::OrderLimit { ell: plan.max_leaf_order() as i64, max: ev.config.max_leaf_order as i64 });
    }
    let ra = r.as_array();
    let calls0 = thread_kernel_calls();
    let task = PlanTask { ev, kind, plan: &plan, radii: ra, p, order };
    let c = climb(&ev.policy, &task)?;
    let jet = c.out;
    let value = jet.coeffs[order];
    let im = jet.im[order];
    if !c.real {
        return Err(Error::RealityViolation { value, residual: im.abs(), bound: reality_bound(value) });
    }
    let mut flags = Vec::new();
    if !c.accurate {
        flags.push("precision-exhausted".to_string());
    }
    let amp = plan.amplification(&ra);
    if amp > CONDITIONING_WARNING {
        flags.push(format!("ill-conditioned: coefficient product {amp:.3e}"));
    }
    if kind == DampingKind::Exp && p * p / r.r1.max(r.r2).max(r.r3) < crate::basecase::SMALL_P_RATIO {
        flags.push("small-p".to_string());
    }
    let result = EvalResult {
        value,
        method: Method::Recursion,
        im_residual: im,
        error_estimate: ev.config.error_constant * jet.unit_roundoff * jet.mag[order],
        diagnostics: Diagnostics {
            base_cases: plan.leaf_count(),
            escalations: c.escalations,
            precision: c.tier.label(),
            kernel_calls: thread_kernel_calls() - calls0,
            cancellation: if value != 0.0 { jet.mag[order] / value.abs() } else { f64::INFINITY },
            flags,
        },
    };
    Ok(Evaluated { result, jet, plan, radii: ra })
}

/// `∫ k^2 w(k) j_l1 j_l2 j_l3 dk` through the reduction plan.
pub fn evaluate_with(ev: &Evaluator, spec: &WeightedIntegralSpec) -> Result<EvalResult> {
    spec.validate()?;
    if spec.n != 2 {
        return Err(Error::UnsupportedPower(format!(
            "the recursion route evaluates n = 2; use the parametric-derivative route for n = {}",
            spec.n
        )));
    }
    check_public_orders(ev, spec.orders)?;
    let d = spec.damping.canonical()?;
    Ok(evaluate_orders(ev, d.kind(), spec.orders, &spec.radii, d.p(), 0)?.result)
}

/// [`evaluate_with`] on the process-wide evaluator.
pub fn evaluate(spec: &WeightedIntegralSpec) -> Result<EvalResult> {
    evaluate_with(global(), spec)
}

pub(crate) fn check_public_orders(ev: &Evaluator, orders: OrderTriple) -> Result<()> {
    for l in orders {
        if l > ev.config.max_order {
            return Err(Error::OrderLimit { ell: l as i64, max: ev.config.max_order as i64 });
        }
    }
    Ok(())
}

/// Residual of the three-term relation at `orders`, raising the slot
/// `raised` (1 or 2) with slot 0 as anchor, from four independent
/// evaluations. Returns `(residual, max |involved value|)`.
pub fn relation_residual(
    ev: &Evaluator,
    kind: DampingKind,
    orders: OrderTriple,
    raised: usize,
    radii: &RadiiTriple,
    p: f64,
) -> Result<(f64, f64)> {
    assert!(raised == 1 || raised == 2);
    let (a, b) = (orders[0], orders[raised]);
    let with = |da: i32, db: i32| {
        let mut o = orders;
        o[0] = a + da;
        o[raised] = b + db;
        o
    };
    let eval = |o: OrderTriple| evaluate_orders(ev, kind, o, radii, p, 0).map(|e| e.result.value);
    let r = radii.as_array();
    let target = eval(with(0, 1))?;
    let lo = eval(with(-1, 0))?;
    let hi = eval(with(1, 0))?;
    let down = eval(with(0, -1))?;
    let c = r[0] / r[raised] * (2 * b + 1) as f64 / (2 * a + 1) as f64;
    let res = (target - c * (lo + hi) + down).abs();
    let scale = [target, lo, hi, down].iter().fold(0f64, |m, v| m.max(v.abs()));
    Ok((res, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        let r = RadiiTriple::from_array([1.0, 2.0, 3.0]);
        let (o, rr, _) = canonicalize([0, 2, 1], r);
        assert_eq!(o, [2, 1, 0]);
        assert_eq!(rr.as_array(), [2.0, 3.0, 1.0]);
        let (o, rr, _) = canonicalize([1, 1, 1], r);
        assert_eq!((o, rr.as_array()), ([1, 1, 1], [1.0, 2.0, 3.0]));
        let (o, rr, _) = canonicalize([0, 0, 5], RadiiTriple::from_array([4.0, 5.0, 6.0]));
        assert_eq!((o, rr.as_array()), ([5, 0, 0], [6.0, 4.0, 5.0]));
    }

    #[test]
    fn leaf_counts() {
        assert_eq!(reduction_plan([1, 1, 1]).unwrap().leaf_count(), 7);
        let p = reduction_plan([1, 1, 0]).unwrap();
        assert_eq!(p.leaf_count(), 3);
        let mut got: Vec<(usize, BaseCaseVariant)> = p.leaves.iter().map(|l| (l.ell, l.variant)).collect();
        got.sort();
        assert_eq!(got, vec![(0, BaseCaseVariant::L00), (1, BaseCaseVariant::Lm10), (2, BaseCaseVariant::L00)]);
        assert_eq!(reduction_plan([5, 0, 0]).unwrap().leaf_count(), 1);
    }

    #[test]
    fn plan_is_post_ordered() {
        let p = reduction_plan([4, 3, 2]).unwrap();
        for (i, n) in p.nodes.iter().enumerate() {
            if let PlanNode::Interior(a) = n {
                assert!(p.applications[*a].source_nodes.iter().all(|&s| s < i));
            }
        }
    }

    #[test]
    fn order_limit() {
        assert!(matches!(reduction_plan([21, 0, 0]), Err(Error::OrderLimit { .. })));
    }
}
