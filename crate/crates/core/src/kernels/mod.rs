//! Integrand families with their intervals, endpoint behaviour and point evaluation.
//!
//! Every family is reduced to one of a few evaluation shapes. Each shape is written so that
//! the distance to a singular endpoint enters directly instead of through `1 - x`, which
//! keeps relative accuracy at the nodes that crowd the endpoints.

pub mod polylog;
pub mod registry;

use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::numbers::binomial;
use crate::exact::RationalPolynomial;
use crate::precision::{bits_for_digits, PrecisionReal};

pub use polylog::{p_poly, p_poly_exact, polylog_neg, polylog_neg_exact};
pub use registry::{identity_registry, lookup_identity, IdentitySpec};

/// Rounding budget of one kernel evaluation, in ulps of its magnitude scale.
const EVAL_ULPS: u32 = 256;

/// Below this distance to an endpoint the complement-based formulas are used.
const HALF: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Interval {
    /// `(0, 1)`
    Unit,
    /// `(0, pi/4)`
    QuarterPi,
    /// `(0, inf)`
    HalfLine,
    /// `(1, inf)`
    AboveOne,
}

impl Interval {
    pub fn lower(&self) -> u32 {
        match self {
            Interval::AboveOne => 1,
            _ => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Interval::Unit | Interval::QuarterPi)
    }

    /// Upper endpoint at precision `prec`; `None` for infinity.
    pub fn upper(&self, prec: u32) -> Option<Float> {
        match self {
            Interval::Unit => Some(Float::with_val(prec, 1)),
            Interval::QuarterPi => Some(Float::with_val(prec, Constant::Pi) / 4u32),
            _ => None,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Interval::Unit => "(0,1)",
            Interval::QuarterPi => "(0,pi/4)",
            Interval::HalfLine => "(0,inf)",
            Interval::AboveOne => "(1,inf)",
        })
    }
}

/// Behaviour of an integrand at one endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularityClass {
    /// Grows like `ln ln` or `ln` of the distance.
    LogLog,
    /// Vanishes like `1 / ln` of the distance.
    OneOverLog,
    /// Finite limit reached through a cancelling quotient.
    Removable,
    None,
    /// Grows like the inverse square root of the distance.
    InverseSqrt,
    /// Decays exponentially at infinity.
    ExponentialDecay,
    /// Decays at least like `x^-2` (up to `ln ln x`) at infinity.
    AlgebraicDecay,
    /// The integral diverges at this endpoint.
    NonIntegrable,
}

impl SingularityClass {
    /// Weight `w(d)` such that `|f| w(d)` stays bounded as the distance `d` to the endpoint
    /// goes to zero; for infinite endpoints `d = 1/x`.
    pub fn counter_weight(&self, d: &Float) -> Option<Float> {
        let p = d.prec();
        let lnd = Float::with_val(p, d.ln_ref()).abs();
        match self {
            SingularityClass::LogLog => Some(Float::with_val(p, 1u32) / (lnd + 1u32)),
            SingularityClass::OneOverLog => Some(lnd),
            SingularityClass::Removable | SingularityClass::None => Some(Float::with_val(p, 1)),
            SingularityClass::InverseSqrt => Some(Float::with_val(p, d.sqrt_ref())),
            SingularityClass::ExponentialDecay => {
                let x = Float::with_val(p, d.recip_ref());
                Some(Float::with_val(p, x / 2u32).exp())
            }
            SingularityClass::AlgebraicDecay => {
                let x = Float::with_val(p, d.recip_ref());
                Some(Float::with_val(p, x.pow(1.5f64)))
            }
            SingularityClass::NonIntegrable => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Singularity {
    pub side: Side,
    pub class: SingularityClass,
}

/// A catalog integrand. The string form (see `Display`) is the stable id used by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KernelSpec {
    /// `x(x^4-4x^2+1) lnln(1/x) / (1+x^2)^4` on (0,1).
    F1,
    /// `x(x^2-1) / ((1+x^2)^3 ln x)` on (0,1).
    F2,
    /// `sin(4nx) / ln tan x` on (0,pi/4).
    F3(u32),
    /// `cos((4n-2)x) / ln tan x` on (0,pi/4).
    F4(u32),
    /// `sin(mx)` or `cos(mx)` over `ln tan x` on (0,pi/4); converges only when the numerator
    /// vanishes at pi/4.
    Trig { cosine: bool, m: u32 },
    /// `sinh((2k+1)x) / (x cosh^m x)` on (0,inf).
    F5 { k: u32, m: u32 },
    /// `sinh(2kx) / (x cosh^m x)` on (0,inf).
    F6 { k: u32, m: u32 },
    /// `Li_{-2n-1}(-x^2) lnln(1/x) / x` on (0,1).
    F7(u32),
    /// `Im Li_{-2n}(ix) lnln(1/x) / x` on (0,1).
    F8(u32),
    /// `x^{2n-1} / artanh x` on (0,1).
    F9(u32),
    /// `x^{2n-1} / (sqrt(1-x^2) artanh x)` on (0,1).
    F10(u32),
    /// `tanh^{2n} x / x^2` on (0,inf).
    F11a(u32),
    /// `tanh^{n+1} x / x^{n+1}` on (0,inf).
    F11b(u32),
    /// `x^{n-1} lnln(1/x) / (1+x^2)^n` on (0,1).
    F12(u32),
    /// Kyrion double-sum integrand times `ln ln x` on (1,inf), beta or zeta variant.
    F13 { zeta: bool, n: u32 },
    /// `x^s lnln(1/x)` on (0,1).
    F14(u32),
    /// `x P(x) / artanh x` on (0,1).
    F15a(RationalPolynomial),
    /// `x P(x) / (sqrt(1-x^2) artanh x)` on (0,1).
    F15b(RationalPolynomial),
    /// `N(x) lnln(1/x) / (1+x^2)^m` on (0,1) for an arbitrary rational numerator.
    LnLn { m: u32, num: RationalPolynomial },
}

/// Largest Kyrion order accepted.
pub const MAX_KYRION: u32 = 6;

impl KernelSpec {
    pub fn interval(&self) -> Interval {
        use KernelSpec::*;
        match self {
            F3(_) | F4(_) | Trig { .. } => Interval::QuarterPi,
            F5 { .. } | F6 { .. } | F11a(_) | F11b(_) => Interval::HalfLine,
            F13 { .. } => Interval::AboveOne,
            _ => Interval::Unit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use KernelSpec::*;
        let bad = |msg: &str| Err(Error::Domain(format!("{self}: {msg}")));
        match self {
            F3(0) | F4(0) | F7(0) | F8(0) | F9(0) | F10(0) | F11a(0) | F11b(0) | F12(0) => {
                bad("index must be at least 1")
            }
            Trig { m: 0, .. } => bad("frequency must be at least 1"),
            F5 { m: 0, .. } | F6 { m: 0, .. } => bad("cosh power must be at least 1"),
            F6 { k: 0, .. } => bad("k must be at least 1"),
            F13 { n, .. } if *n == 0 || *n > MAX_KYRION => bad("order must be in 1..=6"),
            _ => Ok(()),
        }
    }

    /// Numerator of the trigonometric family, as `(cosine, frequency)`.
    fn trig(&self) -> Option<(bool, u32)> {
        match *self {
            KernelSpec::F3(n) => Some((false, 4 * n)),
            KernelSpec::F4(n) => Some((true, (4 * n).saturating_sub(2))),
            KernelSpec::Trig { cosine, m } => Some((cosine, m)),
            _ => None,
        }
    }

    /// `(a, m)` for `sinh(ax) / (x cosh^m x)`.
    fn hyper(&self) -> Option<(u32, u32)> {
        match *self {
            KernelSpec::F5 { k, m } => Some((2 * k + 1, m)),
            KernelSpec::F6 { k, m } => Some((2 * k, m)),
            _ => None,
        }
    }

    /// Endpoint behaviour, lower end first.
    pub fn singularities(&self) -> Vec<Singularity> {
        use SingularityClass as C;
        let (lo, hi) = match self {
            KernelSpec::F1
            | KernelSpec::F7(_)
            | KernelSpec::F8(_)
            | KernelSpec::F12(_)
            | KernelSpec::F14(_)
            | KernelSpec::LnLn { .. } => (C::LogLog, C::LogLog),
            KernelSpec::F2 => (C::OneOverLog, C::Removable),
            KernelSpec::F3(_) | KernelSpec::F4(_) | KernelSpec::Trig { .. } => {
                let (cosine, m) = self.trig().expect("trigonometric family");
                let vanishes = if cosine { m % 4 == 2 } else { m % 4 == 0 };
                (C::OneOverLog, if vanishes { C::Removable } else { C::NonIntegrable })
            }
            KernelSpec::F5 { .. } | KernelSpec::F6 { .. } => {
                let (a, m) = self.hyper().expect("hyperbolic family");
                (C::Removable, if m > a { C::ExponentialDecay } else { C::NonIntegrable })
            }
            KernelSpec::F9(_) | KernelSpec::F15a(_) => (C::Removable, C::OneOverLog),
            KernelSpec::F10(_) | KernelSpec::F15b(_) => (C::Removable, C::InverseSqrt),
            KernelSpec::F11a(_) | KernelSpec::F11b(_) => (C::Removable, C::AlgebraicDecay),
            KernelSpec::F13 { .. } => (C::LogLog, C::AlgebraicDecay),
        };
        vec![Singularity { side: Side::Lower, class: lo }, Singularity { side: Side::Upper, class: hi }]
    }

    pub fn has_loglog(&self) -> bool {
        self.singularities().iter().any(|s| s.class == SingularityClass::LogLog)
    }

    pub fn is_integrable(&self) -> bool {
        self.singularities().iter().all(|s| s.class != SingularityClass::NonIntegrable)
    }

    /// Human-readable formula.
    pub fn describe(&self) -> String {
        use KernelSpec::*;
        match self {
            F1 => "x(x^4-4x^2+1) lnln(1/x)/(1+x^2)^4 on (0,1)".into(),
            F2 => "x(x^2-1)/((1+x^2)^3 ln x) on (0,1)".into(),
            F3(n) => format!("sin({}x)/ln(tan x) on (0,pi/4)", 4 * n),
            F4(n) => format!("cos({}x)/ln(tan x) on (0,pi/4)", (4 * n).saturating_sub(2)),
            Trig { cosine, m } => {
                format!("{}({m}x)/ln(tan x) on (0,pi/4)", if *cosine { "cos" } else { "sin" })
            }
            F5 { k: 0, m } => format!("sinh(x)/(x cosh^{m} x) on (0,inf)"),
            F5 { k, m } => format!("sinh({}x)/(x cosh^{m} x) on (0,inf)", 2 * k + 1),
            F6 { k, m } => format!("sinh({}x)/(x cosh^{m} x) on (0,inf)", 2 * k),
            F7(n) => format!("Li_{{-{}}}(-x^2) lnln(1/x)/x on (0,1)", 2 * n + 1),
            F8(n) => format!("Im Li_{{-{}}}(ix) lnln(1/x)/x on (0,1)", 2 * n),
            F9(n) => format!("x^{}/artanh x on (0,1)", (2 * n).saturating_sub(1)),
            F10(n) => format!("x^{}/(sqrt(1-x^2) artanh x) on (0,1)", (2 * n).saturating_sub(1)),
            F11a(n) => format!("tanh^{} x/x^2 on (0,inf)", 2 * n),
            F11b(n) => format!("tanh^{0} x/x^{0} on (0,inf)", n + 1),
            F12(n) => format!("x^{} lnln(1/x)/(1+x^2)^{n} on (0,1)", n.saturating_sub(1)),
            F13 { zeta, n } => {
                format!("Kyrion {} integrand, N={n}, times ln ln x on (1,inf)", if *zeta { "zeta" } else { "beta" })
            }
            F14(s) => format!("x^{s} lnln(1/x) on (0,1)"),
            F15a(p) => format!("x ({p})/artanh x on (0,1)"),
            F15b(p) => format!("x ({p})/(sqrt(1-x^2) artanh x) on (0,1)"),
            LnLn { m, num } => format!("({num}) lnln(1/x)/(1+x^2)^{m} on (0,1)"),
        }
    }

    /// Build the point evaluator. Exact numerators are expanded once here.
    pub fn evaluator(&self) -> Result<Evaluator> {
        self.validate()?;
        use KernelSpec::*;
        let shape = match self {
            F1 => Shape::lnln(RationalPolynomial::from_integers([0, 1, 0, -4, 0, 1]), 4),
            F7(n) => Shape::lnln(polylog::f7_numerator(*n), 2 * n + 2),
            F8(n) => Shape::lnln(polylog::f8_numerator(*n), 2 * n + 1),
            F12(n) => Shape::lnln(RationalPolynomial::monomial(1, *n as usize - 1), *n),
            F14(s) => Shape::lnln(RationalPolynomial::monomial(1, *s as usize), 0),
            LnLn { m, num } => Shape::lnln(num.clone(), *m),
            F13 { zeta, n } => {
                let (num, m) = kyrion_numerator(*zeta, *n);
                Shape::above(num, m)
            }
            F2 => Shape::LogRatio,
            F3(_) | F4(_) | Trig { .. } => {
                let (cosine, m) = self.trig().expect("trigonometric family");
                Shape::Trig { cosine, m }
            }
            F5 { .. } | F6 { .. } => {
                let (a, m) = self.hyper().expect("hyperbolic family");
                Shape::Hyper { a, m }
            }
            F11a(n) => Shape::TanhPow { p: 2 * n, q: 2 },
            F11b(n) => Shape::TanhPow { p: n + 1, q: n + 1 },
            F9(n) => Shape::atanh(RationalPolynomial::monomial(1, 2 * *n as usize - 2), false),
            F10(n) => Shape::atanh(RationalPolynomial::monomial(1, 2 * *n as usize - 2), true),
            F15a(p) => Shape::atanh(p.clone(), false),
            F15b(p) => Shape::atanh(p.clone(), true),
        };
        Ok(Evaluator { shape })
    }
}

/// Kyrion numerator over `(1+x^2)^m`, with the inner `j`-sum done in integers first.
pub fn kyrion_numerator(zeta: bool, big_n: u32) -> (RationalPolynomial, u32) {
    let one_plus_x2 = RationalPolynomial::from_integers([1, 0, 1]);
    let mut total = RationalPolynomial::zero();
    let (ks, m) = if zeta { (1..=big_n, 2 * big_n + 2) } else { (0..=big_n - 1, 2 * big_n + 1) };
    for k in ks {
        let mut c = Integer::new();
        if zeta {
            for j in 1..=k {
                let t = binomial(2 * k, k - j) * Integer::from(2 * j).pow(2 * big_n);
                if j % 2 == 0 {
                    c += t;
                } else {
                    c -= t;
                }
            }
        } else {
            for j in 0..=k {
                let t = binomial(2 * k + 1, k - j) * Integer::from(2 * j + 1).pow(2 * big_n - 1);
                if j % 2 == 1 {
                    c += t;
                } else {
                    c -= t;
                }
            }
        }
        // inner factor and the power of x
        let (quartic, shift, own) = if zeta {
            let a = 2 * k as i64;
            ([a, 0, -2 * (a + 2), 0, a], 2 * k as usize - 1, 2 * k + 2)
        } else {
            let a = 2 * k as i64 + 1;
            ([a, 0, -2 * (a + 2), 0, a], 2 * k as usize, 2 * k + 3)
        };
        let term = &(&RationalPolynomial::from_integers(quartic)
            * &RationalPolynomial::monomial(Rational::from(c), shift))
            * &one_plus_x2.pow(m - own);
        total = &total + &term;
    }
    (total, m)
}

fn abs_poly(p: &RationalPolynomial) -> RationalPolynomial {
    RationalPolynomial::new(p.coeffs().iter().map(|c| Rational::from(c.abs_ref())).collect())
}

#[derive(Clone, Debug)]
enum Shape {
    /// `num(x) lnln(1/x) / (1+x^2)^m` on (0,1).
    LnLnBelow {
        num: RationalPolynomial,
        abs: RationalPolynomial,
        m: u32,
    },
    /// `num(x) ln ln x / (1+x^2)^m` on (1,inf); `rev` is `num` reversed against its degree.
    LnLnAbove {
        num: RationalPolynomial,
        abs: RationalPolynomial,
        rev: RationalPolynomial,
        abs_rev: RationalPolynomial,
        degree: i32,
        m: u32,
    },
    Trig {
        cosine: bool,
        m: u32,
    },
    LogRatio,
    /// `sinh(ax) / (x cosh^m x)`.
    Hyper {
        a: u32,
        m: u32,
    },
    /// `tanh^p x / x^q`, `p >= q`.
    TanhPow {
        p: u32,
        q: u32,
    },
    /// `x P(x) / artanh x`, optionally over `sqrt(1-x^2)`.
    Atanh {
        poly: RationalPolynomial,
        abs: RationalPolynomial,
        sqrt: bool,
    },
}

impl Shape {
    fn lnln(num: RationalPolynomial, m: u32) -> Shape {
        let abs = abs_poly(&num);
        Shape::LnLnBelow { num, abs, m }
    }

    fn above(num: RationalPolynomial, m: u32) -> Shape {
        let degree = num.degree().unwrap_or(0);
        let rev = num.reversed(degree);
        Shape::LnLnAbove { abs: abs_poly(&num), abs_rev: abs_poly(&rev), rev, num, degree: degree as i32, m }
    }

    fn atanh(poly: RationalPolynomial, sqrt: bool) -> Shape {
        let abs = abs_poly(&poly);
        Shape::Atanh { poly, abs, sqrt }
    }
}

/// An abscissa together with exactly computed companions.
///
/// `lo` is the distance to the lower endpoint and `hi` the distance to a finite upper one.
/// Transforms that know `|ln x|` or `1/x` exactly pass them along; `x` itself may then have
/// underflowed to 0 or overflowed.
#[derive(Clone, Debug)]
pub struct Point {
    pub x: Float,
    pub lo: Float,
    pub hi: Option<Float>,
    pub abs_ln: Option<Float>,
    pub recip: Option<Float>,
}

impl Point {
    /// Point strictly inside `interval`, with distances computed from `x`.
    pub fn interior(x: Float, interval: Interval) -> Point {
        let p = x.prec();
        let lo = Float::with_val(p, &x - interval.lower());
        let hi = interval.upper(p + 64).map(|b| Float::with_val(p, b - &x));
        Point { x, lo, hi, abs_ln: None, recip: None }
    }

    fn prec(&self) -> u32 {
        self.lo.prec()
    }

    /// `-ln x` for `x` in (0,1).
    fn neg_ln(&self) -> Float {
        let p = self.prec();
        if let Some(a) = &self.abs_ln {
            return a.clone();
        }
        match &self.hi {
            Some(h) if *h < HALF => -Float::with_val(p, (-h.clone()).ln_1p_ref()),
            _ => -Float::with_val(p, self.x.ln_ref()),
        }
    }

    /// `1 - x` on (0,1).
    fn one_minus(&self) -> Float {
        match &self.hi {
            Some(h) => h.clone(),
            None => Float::with_val(self.prec(), 1 - &self.x),
        }
    }
}

/// Compiled point evaluator for one kernel.
#[derive(Clone, Debug)]
pub struct Evaluator {
    shape: Shape,
}

/// Value and a magnitude scale; the rounding error is at most `EVAL_ULPS` ulps of `scale`.
#[derive(Clone, Debug)]
pub struct Sample {
    pub value: Float,
    pub scale: Float,
}

fn sin_cos_eighth(r: u32, p: u32) -> (Float, Float) {
    let h = Float::with_val(p, 2u32).sqrt() / 2u32;
    let z = Float::new(p);
    let one = Float::with_val(p, 1);
    let neg = |f: &Float| Float::with_val(p, -f);
    match r % 8 {
        0 => (z, one),
        1 => (h.clone(), h),
        2 => (one, z),
        3 => (h.clone(), neg(&h)),
        4 => (z, neg(&one)),
        5 => (neg(&h), neg(&h)),
        6 => (neg(&one), z),
        _ => (neg(&h), h),
    }
}

impl Evaluator {
    pub fn eval(&self, pt: &Point) -> Sample {
        let p = pt.prec();
        match &self.shape {
            Shape::LnLnBelow { num, abs, m } => {
                let x = &pt.x;
                let lnln = Float::with_val(p, pt.neg_ln().ln_ref());
                let den = Float::with_val(p, Float::with_val(p, x * x) + 1u32).pow(*m);
                let r = Float::with_val(p, num.eval_float(x) / &den);
                let mag = Float::with_val(p, abs.eval_float(&Float::with_val(p, x.abs_ref())) / &den);
                let scale = mag * (Float::with_val(p, lnln.abs_ref()) + 1u32);
                Sample { value: r * lnln, scale }
            }
            Shape::LnLnAbove { num, abs, rev, abs_rev, degree, m } => {
                let lnx = match (&pt.abs_ln, pt.lo < HALF) {
                    (Some(a), _) => a.clone(),
                    (None, true) => Float::with_val(p, pt.lo.ln_1p_ref()),
                    (None, false) => Float::with_val(p, pt.x.ln_ref()),
                };
                let lnln = Float::with_val(p, lnx.ln_ref());
                let far = pt.recip.is_some() || pt.x >= 2;
                let (r, mag) = if far {
                    // num(1/u)/(1+1/u^2)^m = u^{2m-d} rev(u)/(1+u^2)^m
                    let u = pt.recip.clone().unwrap_or_else(|| Float::with_val(p, pt.x.recip_ref()));
                    let den = Float::with_val(p, Float::with_val(p, &u * &u) + 1u32).pow(*m);
                    let lead = Float::with_val(p, (&u).pow(2 * *m as i32 - degree));
                    let r = Float::with_val(p, rev.eval_float(&u) * &lead) / &den;
                    let mag = Float::with_val(p, abs_rev.eval_float(&u) * &lead) / &den;
                    (r, mag)
                } else {
                    let x = &pt.x;
                    let den = Float::with_val(p, Float::with_val(p, x * x) + 1u32).pow(*m);
                    (Float::with_val(p, num.eval_float(x) / &den), Float::with_val(p, abs.eval_float(x) / &den))
                };
                let scale = mag * (Float::with_val(p, lnln.abs_ref()) + 1u32);
                Sample { value: r * lnln, scale }
            }
            Shape::Trig { cosine, m } => {
                let x = &pt.x;
                let d = match &pt.hi {
                    Some(h) => h.clone(),
                    None => Float::with_val(p, Float::with_val(p + 64, Constant::Pi) / 4u32 - x),
                };
                let (f, lt) = if d < *x {
                    // x = pi/4 - d: ln tan x = -2 artanh(tan d), and m x = (m mod 8) pi/4 - m d
                    let t = Float::with_val(p, d.tan_ref());
                    let lt = Float::with_val(p, t.atanh_ref()) * -2i32;
                    let y = Float::with_val(p, &d * *m);
                    let (s, c) = sin_cos_eighth(*m % 8, p);
                    let (sy, cy) = y.sin_cos(Float::new(p));
                    let f = if *cosine {
                        Float::with_val(p, &c * &cy) + Float::with_val(p, &s * &sy)
                    } else {
                        Float::with_val(p, &s * &cy) - Float::with_val(p, &c * &sy)
                    };
                    (f, lt)
                } else {
                    let y = Float::with_val(p, x * *m);
                    let f = if *cosine { y.cos() } else { y.sin() };
                    let lt = Float::with_val(p, x.tan_ref()).ln();
                    (f, lt)
                };
                let scale = Float::with_val(p, *m + 2) / Float::with_val(p, lt.abs_ref());
                Sample { value: f / lt, scale }
            }
            Shape::LogRatio => {
                let x = &pt.x;
                let (x2m1, lnx) = match &pt.hi {
                    Some(h) if *h < HALF => (
                        -Float::with_val(p, h * Float::with_val(p, x + 1u32)),
                        Float::with_val(p, (-h.clone()).ln_1p_ref()),
                    ),
                    _ => (Float::with_val(p, x * x) - 1u32, Float::with_val(p, x.ln_ref())),
                };
                let den = Float::with_val(p, Float::with_val(p, x * x) + 1u32).pow(3u32) * lnx;
                let value = Float::with_val(p, x * x2m1) / den;
                Sample { scale: Float::with_val(p, value.abs_ref()), value }
            }
            Shape::Hyper { a, m } => {
                // 2^{m-1} e^{(a-m)x} (1 - e^{-2ax}) / ((1 + e^{-2x})^m x)
                let x = &pt.x;
                let e1 = Float::with_val(p, x * (*a as i64 - *m as i64)).exp();
                let g = -Float::with_val(p, Float::with_val(p, x * (-2 * *a as i64)).exp_m1_ref());
                let h = (Float::with_val(p, Float::with_val(p, x * -2i32).exp_ref()) + 1u32).pow(*m);
                let mut value = e1 * g / h / x;
                value <<= *m as i32 - 1;
                Sample { scale: Float::with_val(p, value.abs_ref()), value }
            }
            Shape::TanhPow { p: tp, q } => {
                let x = &pt.x;
                let t = Float::with_val(p, x.tanh_ref());
                let r = Float::with_val(p, &t / x).pow(*q);
                let value = r * t.pow(*tp - *q);
                Sample { scale: Float::with_val(p, value.abs_ref()), value }
            }
            Shape::Atanh { poly, abs, sqrt } => {
                let x = &pt.x;
                let h = pt.one_minus();
                let at = if h < HALF {
                    (Float::with_val(p, x.ln_1p_ref()) - Float::with_val(p, h.ln_ref())) / 2u32
                } else {
                    Float::with_val(p, x.atanh_ref())
                };
                let mut den = at;
                if *sqrt {
                    den *= Float::with_val(p, &h * Float::with_val(p, x + 1u32)).sqrt();
                }
                let value = Float::with_val(p, x * poly.eval_float(x)) / &den;
                let scale = Float::with_val(p, x * abs.eval_float(x)) / den;
                Sample { value, scale: scale.abs() }
            }
        }
    }
}

/// `EVAL_ULPS` ulps of `scale` at precision `prec`.
pub fn rounding_bound(scale: &Float, prec: u32) -> Float {
    let mut e = Float::with_val(64, scale.abs_ref()) * EVAL_ULPS;
    e >>= prec as i32 - 1;
    e
}

/// Integrand value at an interior point with a certified bound.
///
/// The bound combines the rounding budget with a first-order term for the error already
/// present in `x`, using a symmetric difference over that error window.
pub fn eval_integrand(spec: &KernelSpec, x: &PrecisionReal, digits: u32) -> Result<PrecisionReal> {
    let interval = spec.interval();
    let prec = x.prec().max(bits_for_digits(digits) + 32);
    let xv = Float::with_val(prec, x.value());
    let e = Float::with_val(prec, x.error_bound());
    let lo_ok = Float::with_val(prec, &xv - &e) > interval.lower();
    let hi_ok = interval.upper(prec + 64).is_none_or(|b| Float::with_val(prec + 64, &xv + &e) < b);
    if !(lo_ok && hi_ok) {
        return Err(Error::Domain(format!("{} is not strictly inside {interval}", x.to_decimal(20))));
    }
    let ev = spec.evaluator()?;
    let at = |v: Float| ev.eval(&Point::interior(v, interval));
    let s = at(xv.clone());
    if !s.value.is_finite() {
        return Err(Error::Domain(format!("{spec} is not finite at {}", x.to_decimal(20))));
    }
    let mut err = rounding_bound(&s.scale, prec);
    if !e.is_zero() {
        let a = at(Float::with_val(prec, &xv - &e)).value;
        let b = at(Float::with_val(prec, &xv + &e)).value;
        // the half-difference is slope times e; the full difference leaves room for curvature
        let slope_term = Float::with_val(64, Float::with_val(prec, b - a).abs());
        err += slope_term;
    }
    Ok(PrecisionReal::new(s.value, err, digits))
}

fn fmt_poly(p: &RationalPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use KernelSpec::*;
        match self {
            F1 => write!(f, "F1"),
            F2 => write!(f, "F2"),
            F3(n) => write!(f, "F3:{n}"),
            F4(n) => write!(f, "F4:{n}"),
            Trig { cosine, m } => write!(f, "trig:{}:{m}", if *cosine { "cos" } else { "sin" }),
            F5 { k, m } => write!(f, "F5:{k}:{m}"),
            F6 { k, m } => write!(f, "F6:{k}:{m}"),
            F7(n) => write!(f, "F7:{n}"),
            F8(n) => write!(f, "F8:{n}"),
            F9(n) => write!(f, "F9:{n}"),
            F10(n) => write!(f, "F10:{n}"),
            F11a(n) => write!(f, "F11a:{n}"),
            F11b(n) => write!(f, "F11b:{n}"),
            F12(n) => write!(f, "F12:{n}"),
            F13 { zeta, n } => write!(f, "F13{}:{n}", if *zeta { "z" } else { "b" }),
            F14(s) => write!(f, "F14:{s}"),
            F15a(p) => write!(f, "F15a:{}", fmt_poly(p)),
            F15b(p) => write!(f, "F15b:{}", fmt_poly(p)),
            LnLn { m, num } => write!(f, "lnln:{m}:{}", fmt_poly(num)),
        }
    }
}

fn parse_u32(s: &str, id: &str) -> Result<u32> {
    s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("{id}: expected a non-negative integer, got {s:?}")))
}

impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        let id = raw.trim();
        let (head, rest) = match id.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (id, None),
        };
        let one = |name: &str| -> Result<u32> {
            let r = rest.ok_or_else(|| Error::Parse(format!("{id}: {name} needs a parameter")))?;
            parse_u32(r, id)
        };
        let two = || -> Result<(u32, u32)> {
            let r = rest.ok_or_else(|| Error::Parse(format!("{id}: expected two parameters")))?;
            let (a, b) = r.split_once(':').ok_or_else(|| Error::Parse(format!("{id}: expected two parameters")))?;
            Ok((parse_u32(a, id)?, parse_u32(b, id)?))
        };
        let poly = || -> Result<RationalPolynomial> {
            rest.ok_or_else(|| Error::Parse(format!("{id}: expected coefficients")))?.parse()
        };
        let spec = match head.to_ascii_uppercase().as_str() {
            "F1" if rest.is_none() => KernelSpec::F1,
            "F2" if rest.is_none() => KernelSpec::F2,
            "F3" => KernelSpec::F3(one("F3")?),
            "F4" => KernelSpec::F4(one("F4")?),
            "F5" => {
                let (k, m) = two()?;
                KernelSpec::F5 { k, m }
            }
            "F6" => {
                let (k, m) = two()?;
                KernelSpec::F6 { k, m }
            }
            "F7" => KernelSpec::F7(one("F7")?),
            "F8" => KernelSpec::F8(one("F8")?),
            "F9" => KernelSpec::F9(one("F9")?),
            "F10" => KernelSpec::F10(one("F10")?),
            "F11A" => KernelSpec::F11a(one("F11a")?),
            "F11B" => KernelSpec::F11b(one("F11b")?),
            "F12" => KernelSpec::F12(one("F12")?),
            "F13B" => KernelSpec::F13 { zeta: false, n: one("F13b")? },
            "F13Z" => KernelSpec::F13 { zeta: true, n: one("F13z")? },
            "F14" => KernelSpec::F14(one("F14")?),
            "F15A" => KernelSpec::F15a(poly()?),
            "F15B" => KernelSpec::F15b(poly()?),
            "TRIG" => {
                let r = rest.ok_or_else(|| Error::Parse(format!("{id}: expected trig:sin:m")))?;
                let (kind, m) = r.split_once(':').ok_or_else(|| Error::Parse(format!("{id}: expected trig:sin:m")))?;
                let cosine = match kind {
                    "sin" => false,
                    "cos" => true,
                    _ => return Err(Error::Parse(format!("{id}: expected sin or cos"))),
                };
                KernelSpec::Trig { cosine, m: parse_u32(m, id)? }
            }
            "LNLN" => {
                let r = rest.ok_or_else(|| Error::Parse(format!("{id}: expected lnln:m:coeffs")))?;
                let (m, c) = r.split_once(':').ok_or_else(|| Error::Parse(format!("{id}: expected lnln:m:coeffs")))?;
                KernelSpec::LnLn { m: parse_u32(m, id)?, num: c.parse()? }
            }
            _ => return Err(Error::UnknownId(id.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl Serialize for KernelSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for KernelSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
