//! Certified values of pi, gamma, logarithms, zeta and beta at integers, and the derivative
//! values at negative integers that appear in the lnln integrals.

pub mod alternating;
pub mod gamma;

use std::fmt;
use std::str::FromStr;

use rug::float::{Constant, Round};
use rug::ops::PowAssignRound;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::numbers::{bernoulli, euler_number, factorial};
use crate::precision::{bits_for_digits, PrecisionReal};

pub use gamma::euler_gamma;

/// Smallest precision accepted by the public entry points.
pub const MIN_DIGITS: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstantId {
    Pi,
    Gamma,
    Ln2,
    LnPi,
    /// `zeta(s)`, `s >= 2`.
    Zeta(u32),
    /// `beta(s)`, `s >= 1`.
    Beta(u32),
    /// `zeta'(-2n)`, `n >= 1`.
    ZetaPrimeNegEven(u32),
    /// `beta'(1-2n)`, `n >= 1`.
    BetaPrimeNegOdd(u32),
    /// `eta'(-2n)`, `n >= 1`.
    EtaPrimeNegEven(u32),
    /// `zeta(2p+1) / pi^{2p}`, `p >= 1`.
    ZetaOverPi(u32),
    /// `beta(2p) / pi^{2p-1}`, `p >= 1`.
    BetaOverPi(u32),
}

impl ConstantId {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Domain(format!("{what} out of range in {self}")));
        match *self {
            ConstantId::Zeta(s) if s < 2 => bad("zeta argument"),
            ConstantId::Beta(s) if s < 1 => bad("beta argument"),
            ConstantId::ZetaPrimeNegEven(0)
            | ConstantId::BetaPrimeNegOdd(0)
            | ConstantId::EtaPrimeNegEven(0)
            | ConstantId::ZetaOverPi(0)
            | ConstantId::BetaOverPi(0) => bad("index"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ConstantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConstantId::Pi => write!(f, "pi"),
            ConstantId::Gamma => write!(f, "gamma"),
            ConstantId::Ln2 => write!(f, "ln2"),
            ConstantId::LnPi => write!(f, "lnpi"),
            ConstantId::Zeta(s) => write!(f, "zeta({s})"),
            ConstantId::Beta(s) => write!(f, "beta({s})"),
            ConstantId::ZetaPrimeNegEven(n) => write!(f, "zeta'(-{})", 2 * n),
            ConstantId::BetaPrimeNegOdd(n) => write!(f, "beta'({})", 1 - 2 * n as i64),
            ConstantId::EtaPrimeNegEven(n) => write!(f, "eta'(-{})", 2 * n),
            ConstantId::ZetaOverPi(p) => write!(f, "zeta{}-over-pi{}", 2 * p + 1, 2 * p),
            ConstantId::BetaOverPi(p) => write!(f, "beta{}-over-pi{}", 2 * p, 2 * p - 1),
        }
    }
}

fn parse_call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim().parse::<i64>().map_err(|_| Error::Parse(format!("expected an integer, got {s:?}")))
}

impl FromStr for ConstantId {
    type Err = Error;

    /// Accepted forms: `pi`, `gamma`, `ln2`, `lnpi`, `zeta(s)`, `beta(s)`, `zeta'(-2n)`,
    /// `beta'(1-2n)` written as e.g. `beta'(-3)`, `eta'(-2n)`, `zeta{2p+1}-over-pi{2p}`,
    /// `beta{2p}-over-pi{2p-1}`.
    fn from_str(raw: &str) -> Result<Self> {
        let s = raw.trim().to_ascii_lowercase();
        let id = match s.as_str() {
            "pi" => ConstantId::Pi,
            "gamma" => ConstantId::Gamma,
            "ln2" => ConstantId::Ln2,
            "lnpi" => ConstantId::LnPi,
            _ => {
                if let Some(a) = parse_call(&s, "zeta'") {
                    let v = parse_int(a)?;
                    if v >= 0 || v % 2 != 0 {
                        return Err(Error::Unsupported(format!("{raw}: only zeta'(-2n)")));
                    }
                    ConstantId::ZetaPrimeNegEven((-v / 2) as u32)
                } else if let Some(a) = parse_call(&s, "beta'") {
                    let v = parse_int(a)?;
                    if v >= 0 || v % 2 == 0 {
                        return Err(Error::Unsupported(format!("{raw}: only beta'(1-2n)")));
                    }
                    ConstantId::BetaPrimeNegOdd(((1 - v) / 2) as u32)
                } else if let Some(a) = parse_call(&s, "eta'") {
                    let v = parse_int(a)?;
                    if v >= 0 || v % 2 != 0 {
                        return Err(Error::Unsupported(format!("{raw}: only eta'(-2n)")));
                    }
                    ConstantId::EtaPrimeNegEven((-v / 2) as u32)
                } else if let Some(a) = parse_call(&s, "zeta") {
                    ConstantId::Zeta(nonneg(parse_int(a)?, raw)?)
                } else if let Some(a) = parse_call(&s, "beta") {
                    ConstantId::Beta(nonneg(parse_int(a)?, raw)?)
                } else if let Some((num, den)) = s.split_once("-over-pi") {
                    let pw = parse_int(den)?;
                    if let Some(z) = num.strip_prefix("zeta") {
                        let s_arg = parse_int(z)?;
                        if s_arg < 3 || s_arg % 2 == 0 || pw != s_arg - 1 {
                            return Err(Error::Parse(format!("{raw}: expected zeta(2p+1)-over-pi(2p)")));
                        }
                        ConstantId::ZetaOverPi(((s_arg - 1) / 2) as u32)
                    } else if let Some(b) = num.strip_prefix("beta") {
                        let s_arg = parse_int(b)?;
                        if s_arg < 2 || s_arg % 2 != 0 || pw != s_arg - 1 {
                            return Err(Error::Parse(format!("{raw}: expected beta(2p)-over-pi(2p-1)")));
                        }
                        ConstantId::BetaOverPi((s_arg / 2) as u32)
                    } else {
                        return Err(Error::UnknownId(raw.to_string()));
                    }
                } else {
                    return Err(Error::UnknownId(raw.to_string()));
                }
            }
        };
        id.validate()?;
        Ok(id)
    }
}

fn nonneg(v: i64, raw: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Domain(format!("{raw}: argument must be positive")))
}

/// Evaluate at `digits` correct digits with a certified bound below `10^-digits`.
pub fn constant(id: ConstantId, digits: u32) -> Result<PrecisionReal> {
    if digits < MIN_DIGITS {
        return Err(Error::Domain(format!("at least {MIN_DIGITS} digits are required")));
    }
    id.validate()?;
    certify(digits, |wd| raw_constant(id, wd))
}

/// Run `f` at increasing working precision until its bound certifies `digits`.
fn certify(digits: u32, f: impl Fn(u32) -> Result<PrecisionReal>) -> Result<PrecisionReal> {
    let mut wd = digits + 5;
    for _ in 0..6 {
        let v = f(wd)?.with_digits(digits);
        if v.is_certified() {
            return Ok(v);
        }
        wd += wd / 2 + 10;
    }
    Err(Error::InsufficientPrecision(format!("could not certify {digits} digits")))
}

fn raw_constant(id: ConstantId, wd: u32) -> Result<PrecisionReal> {
    Ok(match id {
        ConstantId::Pi => pi(wd),
        ConstantId::Gamma => euler_gamma(wd),
        ConstantId::Ln2 => ln2(wd),
        ConstantId::LnPi => ln_pi(wd),
        ConstantId::Zeta(s) if s % 2 == 0 => {
            let (r, p) = zeta_even_exact(s / 2);
            pi(wd).powi(p).scale(&r)
        }
        ConstantId::Zeta(s) => zeta_odd_raw((s - 1) / 2, wd),
        ConstantId::Beta(s) if s % 2 == 1 => {
            let (r, p) = beta_odd_exact((s - 1) / 2);
            pi(wd).powi(p).scale(&r)
        }
        ConstantId::Beta(s) => beta_even_raw(s / 2, wd),
        ConstantId::ZetaPrimeNegEven(n) => zeta_prime_raw(n, wd)?,
        ConstantId::BetaPrimeNegOdd(n) => beta_prime_raw(n, wd)?,
        ConstantId::EtaPrimeNegEven(n) => {
            let factor = Integer::from(1) - (Integer::from(1) << (1 + 2 * n));
            zeta_prime_raw(n, wd)?.scale(&Rational::from(factor))
        }
        ConstantId::ZetaOverPi(p) => zeta_odd_raw(p, wd).div(&pi(wd).powi(2 * p))?,
        ConstantId::BetaOverPi(p) => beta_even_raw(p, wd).div(&pi(wd).powi(2 * p - 1))?,
    })
}

fn work_prec(digits: u32) -> u32 {
    bits_for_digits(digits) + 32
}

/// MPFR's correctly rounded pi.
pub fn pi(digits: u32) -> PrecisionReal {
    PrecisionReal::rounded(Float::with_val(work_prec(digits), Constant::Pi), digits)
}

pub fn ln2(digits: u32) -> PrecisionReal {
    PrecisionReal::rounded(Float::with_val(work_prec(digits), Constant::Log2), digits)
}

/// `ln(pi)` from a pi carried with extra bits; the bound absorbs both roundings.
pub fn ln_pi(digits: u32) -> PrecisionReal {
    let p = work_prec(digits);
    let pi_hi = Float::with_val(p + 16, Constant::Pi);
    let v = Float::with_val(p, pi_hi.ln());
    PrecisionReal::rounded(v, digits).widen(&ulp_abs(p + 8))
}

/// `2^-bits`.
fn ulp_abs(bits: u32) -> Float {
    let mut u = Float::with_val(64, 2);
    u.pow_assign_round(-(bits as i32), Round::Up);
    u
}

/// `zeta(2n) = r pi^{2n}` with `r = (-1)^{n+1} B_{2n} 2^{2n} / (2 (2n)!)`; returns `(r, 2n)`.
pub fn zeta_even_exact(n: u32) -> (Rational, u32) {
    assert!(n >= 1, "zeta_even_exact needs n >= 1");
    let b = bernoulli(2 * n);
    let mut r = b * (Integer::from(1) << (2 * n)) / (factorial(2 * n) * 2u32);
    if n.is_multiple_of(2) {
        r = -r;
    }
    (r, 2 * n)
}

/// `beta(2n+1) = s pi^{2n+1}` with `s = (-1)^n E_{2n} / (2^{2n+2} (2n)!)`; returns `(s, 2n+1)`.
pub fn beta_odd_exact(n: u32) -> (Rational, u32) {
    let e = euler_number(2 * n).expect("even index");
    let mut s = Rational::from((e, factorial(2 * n) << (2 * n + 2)));
    if n % 2 == 1 {
        s = -s;
    }
    (s, 2 * n + 1)
}

/// Accelerated `sum_k (-1)^k (c k + 1)^-s` at `wd` digits, with its certified bound.
fn alternating_power_sum(c: u32, s: u32, wd: u32) -> PrecisionReal {
    let prec = work_prec(wd);
    let n = alternating::terms_for_bits(prec);
    let (v, round_err) = alternating::accelerate(
        n,
        prec,
        |k| {
            let base = Float::with_val(prec, c * k + 1);
            let mut t = base;
            t.pow_assign_round(-(s as i32), Round::Nearest);
            t
        },
        &Float::with_val(64, 1),
    );
    let err = round_err + alternating::truncation_bound(n);
    PrecisionReal::new(v, err, wd)
}

/// `eta(s) = sum_{k>=1} (-1)^{k-1} k^-s` for integer `s >= 1`.
pub fn eta_int(s: u32, digits: u32) -> PrecisionReal {
    alternating_power_sum(1, s, digits)
}

fn zeta_odd_raw(n: u32, wd: u32) -> PrecisionReal {
    let eta = eta_int(2 * n + 1, wd);
    // zeta = eta / (1 - 2^{-2n})
    let four_n = Integer::from(1) << (2 * n);
    eta.scale(&Rational::from((four_n.clone(), four_n - 1u32)))
}

fn beta_even_raw(n: u32, wd: u32) -> PrecisionReal {
    alternating_power_sum(2, 2 * n, wd)
}

/// `zeta(2n+1)`, `n >= 1`.
pub fn zeta_odd(n: u32, digits: u32) -> Result<PrecisionReal> {
    constant(ConstantId::Zeta(2 * n + 1), digits)
}

/// `beta(2n)`, `n >= 1`.
pub fn beta_even(n: u32, digits: u32) -> Result<PrecisionReal> {
    constant(ConstantId::Beta(2 * n), digits)
}

/// Decimal digits lost to the size of `x`, so absolute bounds still meet the request.
fn magnitude_digits(x: &Rational) -> u32 {
    let f = Float::with_val(64, x).abs();
    if f <= 1 {
        0
    } else {
        f.log10().to_f64().ceil() as u32 + 1
    }
}

/// `zeta'(-2n) = (-1)^n (2n)! / (2 (2 pi)^{2n}) zeta(2n+1)`.
fn zeta_prime_raw(n: u32, wd: u32) -> Result<PrecisionReal> {
    let mut c = Rational::from((factorial(2 * n), Integer::from(1) << (2 * n + 1)));
    if n % 2 == 1 {
        c = -c;
    }
    let inner = wd + magnitude_digits(&c);
    Ok(zeta_odd_raw(n, inner).div(&pi(inner).powi(2 * n))?.scale(&c).with_digits(wd))
}

/// `beta'(1-2n) = (-1)^{n+1} 2^{2n-1} (2n-1)! / pi^{2n-1} beta(2n)`.
fn beta_prime_raw(n: u32, wd: u32) -> Result<PrecisionReal> {
    let mut c = Rational::from(factorial(2 * n - 1) << (2 * n - 1));
    if n.is_multiple_of(2) {
        c = -c;
    }
    let inner = wd + magnitude_digits(&c);
    Ok(beta_even_raw(n, inner).div(&pi(inner).powi(2 * n - 1))?.scale(&c).with_digits(wd))
}

pub fn zeta_prime_neg_even(n: u32, digits: u32) -> Result<PrecisionReal> {
    constant(ConstantId::ZetaPrimeNegEven(n), digits)
}

pub fn beta_prime_neg_odd(n: u32, digits: u32) -> Result<PrecisionReal> {
    constant(ConstantId::BetaPrimeNegOdd(n), digits)
}

/// `eta'(s)` on the lattice `s = -2n`, where `eta(-2n) = 0` leaves
/// `eta'(-2n) = (1 - 2^{1+2n}) zeta'(-2n)`.
pub fn eta_prime(s: i64, digits: u32) -> Result<PrecisionReal> {
    if s >= 0 || s % 2 != 0 {
        return Err(Error::Unsupported(format!("eta'({s}) is only available at negative even integers")));
    }
    constant(ConstantId::EtaPrimeNegEven((-s / 2) as u32), digits)
}

/// `zeta(2p+1)/pi^{2p}` (zeta basis) or `beta(2p)/pi^{2p-1}` (beta basis).
pub fn basis_value(zeta: bool, p: u32, digits: u32) -> Result<PrecisionReal> {
    constant(if zeta { ConstantId::ZetaOverPi(p) } else { ConstantId::BetaOverPi(p) }, digits)
}

/// Uncertified accelerated value of `sum_k (-1)^k a_k` with `a_k = (c k + 1)^-s` for real `s`.
///
/// For `s <= 0` the series diverges and the accelerated sum returns its Abel value, which is
/// the analytic continuation; the extra precision covers the polynomial growth of `a_k`.
pub fn alternating_real(c: u32, s: &Float, digits: u32) -> Float {
    let prec = work_prec(digits);
    let growth = if *s < 0 { (-s.to_f64() * 12.0).ceil() as u32 } else { 0 };
    let n = alternating::terms_for_bits(prec + growth) + growth / 2;
    let wprec = prec + 2 * growth + 32;
    let (v, _) = alternating::accelerate(
        n,
        wprec,
        |k| {
            let base = Float::with_val(wprec, c * k + 1);
            let neg = Float::with_val(wprec, -s);
            base.pow(neg)
        },
        &Float::with_val(64, 1),
    );
    Float::with_val(prec, v)
}

/// Dirichlet eta at real `s` (see [`alternating_real`]).
pub fn dirichlet_eta_real(s: &Float, digits: u32) -> Float {
    alternating_real(1, s, digits)
}

/// Dirichlet beta at real `s` (see [`alternating_real`]).
pub fn dirichlet_beta_real(s: &Float, digits: u32) -> Float {
    alternating_real(2, s, digits)
}

use rug::ops::Pow;
