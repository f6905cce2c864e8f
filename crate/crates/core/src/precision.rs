//! Arbitrary-precision reals carrying a worst-case absolute error bound.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AddAssignRound, MulAssignRound, PowAssignRound, SubAssignRound};
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Precision of the error-bound field itself; bounds are always rounded up.
const ERR_PREC: u32 = 64;

/// Binary precision used for a request of `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// `10^-digits` as a 64-bit float (rounded down, so it is a safe threshold).
pub fn ten_pow_neg(digits: u32) -> Float {
    let mut t = Float::with_val(ERR_PREC, 10);
    t.pow_assign_round(-(digits as i32), Round::Down);
    t
}

/// `|true value - value| <= err`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionReal {
    value: Float,
    err: Float,
    digits: u32,
}

fn up(x: Float) -> Float {
    let (f, _) = Float::with_val_round(ERR_PREC, x, Round::Up);
    f
}

/// Upper bound on `|x|` at error precision.
fn abs_up(x: &Float) -> Float {
    Float::with_val_round(ERR_PREC, x.abs_ref(), Round::Up).0
}

fn sum_up(terms: &[&Float]) -> Float {
    let mut acc = Float::new(ERR_PREC);
    for t in terms {
        acc.add_assign_round(*t, Round::Up);
    }
    acc
}

fn prod_up(a: &Float, b: &Float) -> Float {
    let mut acc = Float::with_val(ERR_PREC, a);
    acc.mul_assign_round(b, Round::Up);
    acc
}

/// Bound on the rounding error committed when `v` was produced at its precision.
fn ulp_bound(v: &Float) -> Float {
    if v.is_zero() {
        return Float::new(ERR_PREC);
    }
    let mut u = abs_up(v);
    u >>= v.prec() as i32 - 1;
    u
}

impl PrecisionReal {
    pub fn new(value: Float, err: Float, digits: u32) -> Self {
        let err = up(err.abs());
        PrecisionReal { value, err, digits }
    }

    /// Value produced by one correctly rounded operation; the bound is one ulp.
    pub fn rounded(value: Float, digits: u32) -> Self {
        let err = ulp_bound(&value);
        PrecisionReal { value, err, digits }
    }

    pub fn exact(value: Float, digits: u32) -> Self {
        PrecisionReal { value, err: Float::new(ERR_PREC), digits }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        Self::rounded(Float::with_val(bits_for_digits(digits) + 32, q), digits)
    }

    pub fn zero(digits: u32) -> Self {
        Self::exact(Float::new(bits_for_digits(digits) + 32), digits)
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn error_bound(&self) -> &Float {
        &self.err
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }

    /// Enlarge the bound by `extra`.
    pub fn widen(mut self, extra: &Float) -> Self {
        self.err = sum_up(&[&self.err, &abs_up(extra)]);
        self
    }

    /// `err < 10^-digits`.
    pub fn is_certified(&self) -> bool {
        self.err < ten_pow_neg(self.digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn error_f64(&self) -> f64 {
        self.err.to_f64()
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec().max(o.prec());
        let v = Float::with_val(prec, &self.value + &o.value);
        let err = sum_up(&[&self.err, &o.err, &ulp_bound(&v)]);
        PrecisionReal::new(v, err, self.digits.min(o.digits))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        PrecisionReal { value: Float::with_val(self.prec(), -&self.value), err: self.err.clone(), digits: self.digits }
    }

    pub fn abs(&self) -> Self {
        PrecisionReal {
            value: Float::with_val(self.prec(), self.value.abs_ref()),
            err: self.err.clone(),
            digits: self.digits,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.prec().max(o.prec());
        let v = Float::with_val(prec, &self.value * &o.value);
        let e1 = prod_up(&abs_up(&self.value), &o.err);
        let e2 = prod_up(&abs_up(&o.value), &self.err);
        let e3 = prod_up(&self.err, &o.err);
        let err = sum_up(&[&e1, &e2, &e3, &ulp_bound(&v)]);
        PrecisionReal::new(v, err, self.digits.min(o.digits))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let prec = self.prec().max(o.prec());
        let b_low = Float::with_val_round(ERR_PREC, o.value.abs_ref(), Round::Down).0;
        let mut denom_low = b_low.clone();
        denom_low.sub_assign_round(&o.err, Round::Down);
        if denom_low <= 0 {
            return Err(Error::Domain("division by an interval containing zero".into()));
        }
        let v = Float::with_val(prec, &self.value / &o.value);
        // |a/b - A/B| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
        let num = sum_up(&[&prod_up(&abs_up(&self.value), &o.err), &prod_up(&abs_up(&o.value), &self.err)]);
        let mut den = denom_low;
        den.mul_assign_round(&b_low, Round::Down);
        let e = Float::with_val_round(ERR_PREC, &num / &den, Round::Up).0;
        let err = sum_up(&[&e, &ulp_bound(&v)]);
        Ok(PrecisionReal::new(v, err, self.digits.min(o.digits)))
    }

    /// Multiply by an exact rational.
    pub fn scale(&self, q: &Rational) -> Self {
        let v = Float::with_val(self.prec(), &self.value * q);
        let qa = abs_up(&Float::with_val(ERR_PREC + 64, q));
        let err = sum_up(&[&prod_up(&qa, &self.err), &ulp_bound(&v)]);
        PrecisionReal::new(v, err, self.digits)
    }

    /// Integer power by repeated multiplication, so the bound propagates.
    pub fn powi(&self, e: u32) -> Self {
        let mut out = PrecisionReal::exact(Float::with_val(self.prec(), 1), self.digits);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Certified upper bound on `|self - other|`.
    pub fn residual(&self, o: &Self) -> Float {
        let d = self.sub(o);
        sum_up(&[&abs_up(&d.value), &d.err])
    }

    /// Decimal rendering with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        format_sig(&self.value, sig)
    }

    /// Short scientific rendering of the error bound.
    pub fn error_string(&self) -> String {
        format_sig(&self.err, 3)
    }

    /// Whether both values round to the same `digits` decimal digits up to a tolerance of
    /// `10^-digits` relative to max(1, |value|).
    pub fn agrees_with(&self, o: &Self, digits: u32) -> bool {
        let scale = abs_up(&self.value).max(&Float::with_val(ERR_PREC, 1));
        let tol = prod_up(&ten_pow_neg(digits), &scale);
        let d = Float::with_val(self.prec().max(o.prec()), &self.value - &o.value);
        d.abs() <= tol
    }

    pub fn cmp_value(&self, o: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&o.value)
    }
}

/// Scientific-notation string with `sig` significant digits (no binary-float detour).
pub fn format_sig(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sig = sig.max(1);
    format!("{:.*e}", sig, x)
}

impl fmt::Display for PrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.to_decimal(self.digits as usize), self.error_string())
    }
}

/// Wire form: decimal strings only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalValue {
    pub value: String,
    pub error_bound: String,
    pub digits: u32,
}

impl From<&PrecisionReal> for DecimalValue {
    fn from(p: &PrecisionReal) -> Self {
        DecimalValue { value: p.to_decimal(p.digits as usize + 5), error_bound: p.error_string(), digits: p.digits }
    }
}

impl DecimalValue {
    pub fn parse(&self) -> Result<PrecisionReal> {
        let prec = bits_for_digits(self.digits) + 32;
        let v = Float::parse(&self.value).map_err(|e| Error::Parse(format!("{}: {e}", self.value)))?;
        let e = Float::parse(&self.error_bound).map_err(|e| Error::Parse(format!("{}: {e}", self.error_bound)))?;
        Ok(PrecisionReal::new(Float::with_val(prec, v), Float::with_val(ERR_PREC, e), self.digits))
    }
}

impl Serialize for PrecisionReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecimalValue::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrecisionReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DecimalValue::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
