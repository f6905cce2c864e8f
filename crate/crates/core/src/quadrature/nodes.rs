//! Abscissa/weight tables per (precision, level, transform), built once and shared.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::Float;

use super::Transform;

/// One node of the `t`-grid.
///
/// `Tanh`: `ct = 1 - |xhat|` on the reference interval (-1,1), with `upper` selecting the sign.
/// `Exp`: `s = exp(pi/2 sinh t)` with weight `ds/dt`.
#[derive(Clone, Debug)]
pub(crate) enum Node {
    Tanh { ct: Float, w: Float, upper: bool },
    Exp { s: Float, w: Float },
}

/// New nodes of one level and the indices of the outermost ones on each side.
pub(crate) struct NodeSet {
    pub nodes: Vec<Node>,
    pub outermost: Vec<usize>,
}

type Key = (u32, u32, Transform);
type Slot = Arc<OnceLock<Arc<NodeSet>>>;

fn cache() -> &'static Mutex<HashMap<Key, Slot>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Slot>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Drop every cached table.
pub fn clear_node_cache() {
    cache().lock().expect("node cache poisoned").clear();
}

pub(crate) fn level_nodes(transform: Transform, prec: u32, level: u32) -> Arc<NodeSet> {
    let slot = {
        let mut map = cache().lock().expect("node cache poisoned");
        map.entry((prec, level, transform)).or_default().clone()
    };
    // the lock is released before building, so distinct tables build concurrently
    slot.get_or_init(|| Arc::new(build(transform, prec, level))).clone()
}

/// `(t_min, t_max)` of the truncated grid.
///
/// tanh-sinh stops once `1 - |xhat|` is near `2^-2prec`. exp-sinh spans `s` from `2^-2prec` to
/// `2^2prec`. The pullback only needs `s` up to `4 prec ln 2`, since `e^-s` is then negligible.
fn t_range(transform: Transform, prec: u32) -> (f64, f64) {
    let pl = prec as f64 * std::f64::consts::LN_2;
    let pi = std::f64::consts::PI;
    match transform {
        Transform::TanhSinh => (0.0, (2.0 * pl / pi).asinh()),
        Transform::ExpSinh => {
            let t = (4.0 * pl / pi).asinh();
            (-t, t)
        }
        Transform::LogPullback => (-(4.0 * pl / pi).asinh(), (2.0 * (4.0 * pl).ln() / pi).asinh()),
    }
}

fn build(transform: Transform, prec: u32, level: u32) -> NodeSet {
    let (t_min, t_max) = t_range(transform, prec);
    let scale = (1u64 << level) as f64;
    let k_min = (t_min * scale).ceil() as i64;
    let k_max = (t_max * scale).floor() as i64;
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let ks: Vec<i64> = (k_min..=k_max).filter(|k| level == 0 || k % 2 != 0).collect();
    let mut nodes = Vec::new();
    let mut outermost = Vec::new();
    let (first, last) = (ks.first().copied(), ks.last().copied());
    for &k in &ks {
        let t = Float::with_val(prec, k) >> level as i32;
        let (sh, ch) = t.sinh_cosh(Float::new(prec));
        let v = Float::with_val(prec, &half_pi * &sh);
        let dv = Float::with_val(prec, &half_pi * &ch);
        // tanh-sinh is symmetric in t, so only the largest k is extreme
        let extreme = Some(k) == last || (transform != Transform::TanhSinh && Some(k) == first);
        match transform {
            Transform::TanhSinh => {
                // ct = 2/(1 + e^{2v}), weight = v' sech^2 v
                let e = Float::with_val(prec, Float::with_val(prec, &v * 2u32).exp_ref());
                let ct = Float::with_val(prec, 2u32) / (e + 1u32);
                let sech = Float::with_val(prec, v.cosh_ref()).recip();
                let w = dv * Float::with_val(prec, sech.square_ref());
                if extreme {
                    outermost.push(nodes.len());
                }
                if k == 0 {
                    nodes.push(Node::Tanh { ct, w, upper: true });
                } else {
                    if extreme {
                        outermost.push(nodes.len() + 1);
                    }
                    nodes.push(Node::Tanh { ct: ct.clone(), w: w.clone(), upper: true });
                    nodes.push(Node::Tanh { ct, w, upper: false });
                }
            }
            Transform::ExpSinh | Transform::LogPullback => {
                let s = Float::with_val(prec, v.exp_ref());
                let w = dv * &s;
                if extreme {
                    outermost.push(nodes.len());
                }
                nodes.push(Node::Exp { s, w });
            }
        }
    }
    NodeSet { nodes, outermost }
}
