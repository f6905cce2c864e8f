//! Double-exponential quadrature for the catalog integrands.
//!
//! The transform is picked from the endpoint classes of the kernel:
//!
//! * finite interval, no `lnln` endpoint: tanh-sinh;
//! * `(0, inf)`: exp-sinh;
//! * an `lnln` endpoint on `(0,1)` or `(1,inf)`: the pullback `x = e^{-s}` (resp. `x = e^{s}`)
//!   followed by exp-sinh in `s`, so `lnln` becomes `ln s` and is evaluated exactly.
//!
//! Each level halves the step and reuses the previous nodes. Iteration stops once two
//! consecutive levels agree below the target; the reported bound adds that difference,
//! a tail estimate from the outermost nodes, and accumulated rounding.

mod nodes;

use rayon::prelude::*;
use rug::float::Round;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::constants::constant;
use crate::error::{Error, Result};
use crate::kernels::{lookup_identity, rounding_bound, Interval, KernelSpec, Point, SingularityClass};
use crate::precision::{bits_for_digits, format_sig, ten_pow_neg, PrecisionReal};

pub use nodes::clear_node_cache;
use nodes::{level_nodes, Node};

/// Extra decimal digits carried beyond every request.
pub const GUARD_DIGITS: u32 = 10;
/// Highest level tried; the step at level `L` is `2^-L`.
pub const MAX_LEVEL: u32 = 12;
/// `verify_identity` passes when the residual is below `10^-(digits - VERIFY_SLACK)`.
pub const VERIFY_SLACK: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    TanhSinh,
    ExpSinh,
    LogPullback,
}

impl std::fmt::Display for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Transform::TanhSinh => "tanh-sinh",
            Transform::ExpSinh => "exp-sinh",
            Transform::LogPullback => "log-pullback",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: PrecisionReal,
    pub nodes_used: usize,
    pub levels: u32,
    pub transform: Transform,
}

/// Transform dictated by the kernel's interval and endpoint classes.
pub fn transform_for(spec: &KernelSpec) -> Transform {
    match spec.interval() {
        Interval::HalfLine => Transform::ExpSinh,
        Interval::AboveOne => Transform::LogPullback,
        _ if spec.has_loglog() => Transform::LogPullback,
        _ => Transform::TanhSinh,
    }
}

fn working_prec(digits: u32) -> u32 {
    bits_for_digits(digits + GUARD_DIGITS)
}

/// One weighted sample: `term = f(x) * dx/dt`, plus the magnitude used for rounding bounds.
struct Term {
    value: Float,
    scale: Float,
}

/// Map a transform node to a point of the kernel's interval, returning the point and the
/// Jacobian `dx/dt`.
fn place(transform: Transform, interval: Interval, node: &Node, prec: u32) -> (Point, Float) {
    match (transform, node) {
        (Transform::TanhSinh, Node::Tanh { ct, w, upper }) => {
            let a = Float::with_val(prec, interval.lower());
            let b = interval.upper(prec).expect("tanh-sinh needs a finite interval");
            let c = Float::with_val(prec, &b - &a) / 2u32;
            let near = Float::with_val(prec, &c * ct);
            let far = Float::with_val(prec, &c * Float::with_val(prec, 2 - ct));
            let (lo, hi, x) = if *upper {
                let x = Float::with_val(prec, &b - &near);
                (far, near, x)
            } else {
                let x = Float::with_val(prec, &a + &near);
                (near, far, x)
            };
            let jac = Float::with_val(prec, &c * w);
            (Point { x, lo, hi: Some(hi), abs_ln: None, recip: None }, jac)
        }
        (Transform::ExpSinh, Node::Exp { s, w, .. }) => {
            let pt = Point { x: s.clone(), lo: s.clone(), hi: None, abs_ln: None, recip: None };
            (pt, w.clone())
        }
        (Transform::LogPullback, Node::Exp { s, w, .. }) => {
            if interval == Interval::AboveOne {
                let x = Float::with_val(prec, s.exp_ref());
                let recip = Float::with_val(prec, (-s.clone()).exp_ref());
                let lo = Float::with_val(prec, s.exp_m1_ref());
                let jac = Float::with_val(prec, w * &x);
                (Point { x, lo, hi: None, abs_ln: Some(s.clone()), recip: Some(recip) }, jac)
            } else {
                let x = Float::with_val(prec, (-s.clone()).exp_ref());
                let hi = -Float::with_val(prec, (-s.clone()).exp_m1_ref());
                let jac = Float::with_val(prec, w * &x);
                let pt = Point { lo: x.clone(), x, hi: Some(hi), abs_ln: Some(s.clone()), recip: None };
                (pt, jac)
            }
        }
        _ => unreachable!("node kind matches transform"),
    }
}

fn sample(
    spec_eval: &crate::kernels::Evaluator,
    transform: Transform,
    interval: Interval,
    node: &Node,
    prec: u32,
) -> Option<Term> {
    let (pt, jac) = place(transform, interval, node, prec);
    let s = spec_eval.eval(&pt);
    if s.value.is_zero() {
        return Some(Term { value: Float::new(prec), scale: Float::new(64) });
    }
    let value = Float::with_val(prec, &s.value * &jac);
    if !value.is_finite() {
        // abscissa collapsed onto an endpoint; the true contribution is below the tail bound
        return None;
    }
    let scale = Float::with_val(64, Float::with_val(prec, &s.scale * &jac).abs());
    Some(Term { value, scale })
}

/// Level-by-level driver shared by kernels and plain closures.
fn run_levels<F>(transform: Transform, prec: u32, digits: u32, eval: F) -> Result<QuadratureResult>
where
    F: Fn(&Node) -> Option<Term> + Sync,
{
    let tol = ten_pow_neg(digits + 1);
    let mut raw = Float::new(prec);
    let mut scale_sum = Float::new(64);
    let mut nodes_used = 0usize;
    let mut history: Vec<Float> = Vec::new();
    let mut diffs: Vec<Float> = Vec::new();
    for level in 0..=MAX_LEVEL {
        let set = level_nodes(transform, prec, level);
        let terms: Vec<Option<Term>> = set.nodes.par_iter().map(&eval).collect();
        nodes_used += terms.len();
        let mut tail = Float::new(64);
        for (i, t) in terms.iter().enumerate() {
            if let Some(t) = t {
                raw += &t.value;
                scale_sum.add_assign_round_up(&t.scale);
                if set.outermost.contains(&i) {
                    let m = Float::with_val(64, t.value.abs_ref());
                    if m > tail {
                        tail = m;
                    }
                }
            }
        }
        let h = Float::with_val(prec, 1) >> level as i32;
        let s = Float::with_val(prec, &raw * &h);
        if let Some(prev) = history.last() {
            diffs.push(Float::with_val(64, Float::with_val(prec, &s - prev).abs()));
        }
        history.push(s.clone());

        if diverging(&history, &diffs) {
            return Err(Error::Divergent(format!("level estimates keep growing ({})", format_sig(&s, 6))));
        }
        // the outermost nodes sit where the integrand should be negligible
        let tail_est = Float::with_val(64, &tail * &h) * 4u32;
        if level >= 3 {
            let d = diffs.last().expect("at least two levels");
            if *d <= tol && tail_est <= tol {
                // EVAL_ULPS per sample from rounding_bound, plus one ulp of the running sum per addition
                let hs = Float::with_val(64, &scale_sum * &h);
                let mut rounding = rounding_bound(&hs, prec);
                rounding.add_assign_round_up(&(Float::with_val(64, &hs * nodes_used as u64) >> (prec as i32 - 1)));
                let mut err = Float::with_val(64, d);
                err.add_assign_round_up(&tail_est);
                err.add_assign_round_up(&rounding);
                let value = PrecisionReal::new(Float::with_val(prec, s), err, digits);
                return Ok(QuadratureResult { value, nodes_used, levels: level + 1, transform });
            }
        }
    }
    let last = history.last().cloned().unwrap_or_else(|| Float::new(prec));
    Err(Error::PrecisionFailure {
        levels: MAX_LEVEL + 1,
        estimate: format_sig(&last, digits as usize),
        difference: diffs.last().map_or(f64::INFINITY, |d| d.to_f64()),
    })
}

/// Three successive levels with growing magnitude and non-shrinking differences.
fn diverging(history: &[Float], diffs: &[Float]) -> bool {
    let n = history.len();
    if n < 6 || diffs.len() < 3 {
        return false;
    }
    let grow = (n - 3..n).all(|i| history[i].clone().abs() > history[i - 1].clone().abs());
    let stuck = (diffs.len() - 2..diffs.len()).all(|i| diffs[i] >= diffs[i - 1]);
    grow && stuck
}

trait AddUp {
    fn add_assign_round_up(&mut self, o: &Float);
}

impl AddUp for Float {
    fn add_assign_round_up(&mut self, o: &Float) {
        use rug::ops::AddAssignRound;
        self.add_assign_round(o, Round::Up);
    }
}

/// Integral of a catalog kernel over its interval to `digits` certified digits.
pub fn integrate(spec: &KernelSpec, digits: u32) -> Result<QuadratureResult> {
    if !spec.is_integrable() {
        let ends: Vec<String> = spec
            .singularities()
            .iter()
            .filter(|s| s.class == SingularityClass::NonIntegrable)
            .map(|s| format!("{:?}", s.side).to_lowercase())
            .collect();
        return Err(Error::Divergent(format!("{spec} is not integrable at the {} endpoint", ends.join(" and "))));
    }
    let ev = spec.evaluator()?;
    let transform = transform_for(spec);
    let interval = spec.interval();
    let prec = working_prec(digits);
    run_levels(transform, prec, digits, |node| sample(&ev, transform, interval, node, prec))
}

/// `int_a^b f` by tanh-sinh for a closure evaluated at the working precision.
///
/// `f` receives the abscissa together with its distances to `a` and `b`.
pub fn integrate_fn<F>(f: F, a: &Float, b: &Float, digits: u32) -> Result<QuadratureResult>
where
    F: Fn(&Float, &Float, &Float) -> Float + Sync,
{
    if a >= b {
        return Err(Error::Domain("integrate_fn needs a < b".into()));
    }
    let prec = working_prec(digits);
    let a = Float::with_val(prec, a);
    let b = Float::with_val(prec, b);
    let c = Float::with_val(prec, &b - &a) / 2u32;
    run_levels(Transform::TanhSinh, prec, digits, |node| {
        let Node::Tanh { ct, w, upper } = node else { unreachable!("tanh-sinh node") };
        let near = Float::with_val(prec, &c * ct);
        let far = Float::with_val(prec, &c * Float::with_val(prec, 2 - ct));
        let (x, lo, hi) = if *upper {
            (Float::with_val(prec, &b - &near), far, near)
        } else {
            (Float::with_val(prec, &a + &near), near, far)
        };
        let v = f(&x, &lo, &hi);
        let value = Float::with_val(prec, &v * Float::with_val(prec, &c * w));
        if !value.is_finite() {
            return None;
        }
        Some(Term { scale: Float::with_val(64, value.abs_ref()), value })
    })
}

/// `sum_i c_i int K_i`, with kernels integrated in parallel and bounds combined.
pub fn integrate_combination(terms: &[(Rational, KernelSpec)], digits: u32) -> Result<PrecisionReal> {
    let parts: Vec<Result<QuadratureResult>> = terms.par_iter().map(|(_, k)| integrate(k, digits)).collect();
    let mut acc = PrecisionReal::zero(digits);
    for ((c, _), r) in terms.iter().zip(parts) {
        acc = acc.add(&r?.value.scale(c));
    }
    Ok(acc)
}

/// `sum_i c_i b_i` over basis constants.
pub fn combine_constants(terms: &[(Rational, crate::constants::ConstantId)], digits: u32) -> Result<PrecisionReal> {
    let mut acc = PrecisionReal::zero(digits);
    for (c, id) in terms {
        acc = acc.add(&constant(*id, digits)?.scale(c));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub id: String,
    pub lhs: PrecisionReal,
    pub rhs: PrecisionReal,
    /// `lhs - rhs` with the combined bound.
    pub residual: PrecisionReal,
    /// Decimal upper bound on `|lhs - rhs|`.
    pub residual_bound: String,
    pub threshold: String,
    pub pass: bool,
}

/// Certified upper bound on `|r|` for a residual.
pub fn residual_upper(r: &PrecisionReal) -> Float {
    let mut b = Float::with_val_round(64, r.value().abs_ref(), Round::Up).0;
    b.add_assign_round_up(r.error_bound());
    b
}

/// Compare the quadrature of an identity's left side with its constants.
pub fn verify_identity(id: &str, digits: u32) -> Result<IdentityCheck> {
    let spec = lookup_identity(id)?;
    let lhs = integrate_combination(&spec.lhs, digits)?;
    let rhs = combine_constants(&spec.rhs, digits + GUARD_DIGITS)?.with_digits(digits);
    let residual = lhs.sub(&rhs);
    let bound = residual_upper(&residual);
    let threshold = ten_pow_neg(digits.saturating_sub(VERIFY_SLACK));
    Ok(IdentityCheck {
        id: id.to_string(),
        pass: bound < threshold,
        residual_bound: format_sig(&bound, 3),
        threshold: format_sig(&threshold, 1),
        lhs,
        rhs,
        residual,
    })
}
