//! Recovery of exact rational structure from certified numerics.
//!
//! Coefficient rows come from an integer relation between one integral and its basis
//! constants. Each row is then re-checked at twice the precision.

mod pslq;
mod rational;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::constants::{basis_value, constant, ConstantId};
use crate::error::{Error, Result};
use crate::exact::{triangular_invert, RationalMatrix, RationalPolynomial};
use crate::kernels::{KernelSpec, MAX_KYRION};
use crate::precision::{format_sig, ten_pow_neg, PrecisionReal};
use crate::quadrature::{integrate, residual_upper};

pub use pslq::{digits_needed, height_for_digits, pslq, relation_residual, RelationResult, RelationStatus};
pub use rational::{rational_reconstruct, simplest_in};

/// Slack, in digits, between the doubled-precision recheck and its threshold.
pub const CERT_SLACK: u32 = 10;
/// The relation search escalates precision up to this multiple of the request.
pub const MAX_ESCALATION: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `zeta(2p+1) / pi^{2p}`
    Zeta,
    /// `beta(2p) / pi^{2p-1}`
    Beta,
}

impl Basis {
    pub fn constant(self, p: u32) -> ConstantId {
        match self {
            Basis::Zeta => ConstantId::ZetaOverPi(p),
            Basis::Beta => ConstantId::BetaOverPi(p),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Zeta => "zeta",
            Basis::Beta => "beta",
        })
    }
}

/// Integral families whose `n`-th member is a rational combination of the first `n` basis
/// constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffFamily {
    /// `sin(4nx)/ln tan x`
    Sin4n,
    /// `cos((4n-2)x)/ln tan x`
    Cos4n2,
    F7,
    F8,
    F9,
    F10,
    F11a,
    F11b,
    /// `sinh((2k+1)x)/(x cosh^{2n+1} x)`, zeta basis, `n > k`.
    F5Zeta(u32),
    /// `sinh((2k+1)x)/(x cosh^{2n} x)`, beta basis, `n > k`.
    F5Beta(u32),
    /// `sinh(2kx)/(x cosh^{2n+2} x)`, zeta basis, `n >= k >= 1`.
    F6Zeta(u32),
    /// `sinh(2kx)/(x cosh^{2n+1} x)`, beta basis, `n >= k >= 1`.
    F6Beta(u32),
}

impl CoeffFamily {
    pub fn basis(&self) -> Basis {
        use CoeffFamily::*;
        match self {
            Sin4n | F7 | F9 | F11a | F11b | F5Zeta(_) | F6Zeta(_) => Basis::Zeta,
            Cos4n2 | F8 | F10 | F5Beta(_) | F6Beta(_) => Basis::Beta,
        }
    }

    /// Smallest `n` with a convergent member.
    pub fn first_n(&self) -> u32 {
        match *self {
            CoeffFamily::F5Zeta(k) | CoeffFamily::F5Beta(k) => k + 1,
            CoeffFamily::F6Zeta(k) | CoeffFamily::F6Beta(k) => k.max(1),
            _ => 1,
        }
    }

    pub fn kernel(&self, n: u32) -> Result<KernelSpec> {
        use CoeffFamily::*;
        if n < self.first_n() {
            return Err(Error::Domain(format!("{self} starts at n = {}", self.first_n())));
        }
        Ok(match *self {
            Sin4n => KernelSpec::F3(n),
            Cos4n2 => KernelSpec::F4(n),
            F7 => KernelSpec::F7(n),
            F8 => KernelSpec::F8(n),
            F9 => KernelSpec::F9(n),
            F10 => KernelSpec::F10(n),
            F11a => KernelSpec::F11a(n),
            F11b => KernelSpec::F11b(n),
            F5Zeta(k) => KernelSpec::F5 { k, m: 2 * n + 1 },
            F5Beta(k) => KernelSpec::F5 { k, m: 2 * n },
            F6Zeta(k) => KernelSpec::F6 { k, m: 2 * n + 2 },
            F6Beta(k) => KernelSpec::F6 { k, m: 2 * n + 1 },
        })
    }
}

impl fmt::Display for CoeffFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CoeffFamily::*;
        match self {
            Sin4n => write!(f, "sin4nx"),
            Cos4n2 => write!(f, "cos"),
            F7 => write!(f, "F7"),
            F8 => write!(f, "F8"),
            F9 => write!(f, "F9"),
            F10 => write!(f, "F10"),
            F11a => write!(f, "F11a"),
            F11b => write!(f, "F11b"),
            F5Zeta(k) => write!(f, "F5z:{k}"),
            F5Beta(k) => write!(f, "F5b:{k}"),
            F6Zeta(k) => write!(f, "F6z:{k}"),
            F6Beta(k) => write!(f, "F6b:{k}"),
        }
    }
}

impl FromStr for CoeffFamily {
    type Err = Error;

    /// `sin4nx` (alias `F3`), `cos` (alias `F4`), `F7`..`F11b`, `F5z:k`, `F5b:k`, `F6z:k`, `F6b:k`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        let fam = match lower.as_str() {
            "sin4nx" | "f3" => CoeffFamily::Sin4n,
            "cos" | "cos4n2x" | "f4" => CoeffFamily::Cos4n2,
            "f7" => CoeffFamily::F7,
            "f8" => CoeffFamily::F8,
            "f9" => CoeffFamily::F9,
            "f10" => CoeffFamily::F10,
            "f11a" => CoeffFamily::F11a,
            "f11b" => CoeffFamily::F11b,
            _ => {
                let (head, k) = lower.split_once(':').ok_or_else(|| Error::UnknownId(t.into()))?;
                let k: u32 = k.parse().map_err(|_| Error::Parse(format!("{t}: bad index")))?;
                match head {
                    "f5z" => CoeffFamily::F5Zeta(k),
                    "f5b" => CoeffFamily::F5Beta(k),
                    "f6z" if k >= 1 => CoeffFamily::F6Zeta(k),
                    "f6b" if k >= 1 => CoeffFamily::F6Beta(k),
                    _ => return Err(Error::UnknownId(t.into())),
                }
            }
        };
        Ok(fam)
    }
}

/// One row `C_{1,n}, .., C_{n,n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub n: u32,
    #[serde(with = "rational_strings")]
    pub coeffs: Vec<Rational>,
    /// The doubled-precision recheck passed.
    pub certified: bool,
    /// Upper bound on `|I_n - sum_p C_{p,n} b_p|` at the recheck precision.
    pub residual_bound: String,
    pub digits_used: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub family: String,
    pub basis: Basis,
    pub rows: Vec<CoeffRow>,
}

pub(crate) mod rational_strings {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|q| q.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| crate::exact::poly::parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `I_n - sum_p C_p b_p` evaluated at `digits`.
fn row_residual(kernel: &KernelSpec, basis: Basis, coeffs: &[Rational], digits: u32) -> Result<PrecisionReal> {
    let mut acc = integrate(kernel, digits)?.value;
    for (p, c) in coeffs.iter().enumerate() {
        if *c != 0 {
            let b = basis_value(basis == Basis::Zeta, p as u32 + 1, digits)?;
            acc = acc.sub(&b.scale(c));
        }
    }
    Ok(acc)
}

/// Search for the relation `c_0 I_n + sum_p c_p b_p = 0` at `digits`.
fn search_row(kernel: &KernelSpec, basis: Basis, n: u32, digits: u32) -> Result<Option<Vec<Rational>>> {
    let mut values = vec![integrate(kernel, digits)?.value];
    for p in 1..=n {
        values.push(basis_value(basis == Basis::Zeta, p, digits)?);
    }
    let height = height_for_digits(values.len(), digits);
    let rel = pslq(&values, digits, height)?;
    if rel.status != RelationStatus::Found || rel.coefficients[0] == 0 {
        return Ok(None);
    }
    let c0 = Rational::from(&rel.coefficients[0]);
    Ok(Some(rel.coefficients[1..].iter().map(|c| -Rational::from(c) / &c0).collect()))
}

/// Coefficients of the `n`-th member of `family` in its basis.
///
/// The relation search starts at `digits` and doubles up to `MAX_ESCALATION` times the request
/// when no relation fits the height that precision supports. A found row is certified when the
/// residual recomputed at twice the precision used is below `10^-(2 d - CERT_SLACK)`.
pub fn solve_coeffs(family: &CoeffFamily, n: u32, digits: u32) -> Result<CoeffRow> {
    let kernel = family.kernel(n)?;
    let basis = family.basis();
    let mut d = digits;
    loop {
        if let Some(coeffs) = search_row(&kernel, basis, n, d)? {
            let check = row_residual(&kernel, basis, &coeffs, 2 * d)?;
            let bound = residual_upper(&check);
            let certified = bound < ten_pow_neg(2 * d - CERT_SLACK);
            if certified || d * 2 > digits * MAX_ESCALATION {
                return Ok(CoeffRow { n, coeffs, certified, residual_bound: format_sig(&bound, 3), digits_used: d });
            }
        } else if d * 2 > digits * MAX_ESCALATION {
            return Err(Error::NoRational(format!("no relation for {family} n={n} up to {d} digits")));
        }
        d *= 2;
    }
}

/// Rows `first_n..=n_max`, computed in parallel and returned in order.
pub fn coeff_table(family: &CoeffFamily, n_max: u32, digits: u32) -> Result<CoeffTable> {
    let rows: Vec<Result<CoeffRow>> =
        (family.first_n()..=n_max).into_par_iter().map(|n| solve_coeffs(family, n, digits)).collect();
    Ok(CoeffTable { family: family.to_string(), basis: family.basis(), rows: rows.into_iter().collect::<Result<_>>()? })
}

/// Lower-triangular matrix of a table starting at `n = 1`.
pub fn table_matrix(table: &CoeffTable) -> Result<RationalMatrix> {
    RationalMatrix::from_rows(table.rows.iter().map(|r| r.coeffs.clone()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyFamily {
    /// `beta(2n)/pi^{2n-1} = int_0^1 x Xi_n(x) / (sqrt(1-x^2) artanh x) dx`
    Xi,
    /// `zeta(2n+1)/pi^{2n} = int_0^1 x Lambda_n(x) / artanh x dx`
    Lambda,
}

impl PolyFamily {
    pub fn monomial_family(self) -> CoeffFamily {
        match self {
            PolyFamily::Xi => CoeffFamily::F10,
            PolyFamily::Lambda => CoeffFamily::F9,
        }
    }

    /// Kernel integrating `x P(x)` against this family's weight.
    pub fn kernel(self, p: RationalPolynomial) -> KernelSpec {
        match self {
            PolyFamily::Xi => KernelSpec::F15b(p),
            PolyFamily::Lambda => KernelSpec::F15a(p),
        }
    }
}

impl fmt::Display for PolyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolyFamily::Xi => "xi",
            PolyFamily::Lambda => "lambda",
        })
    }
}

impl FromStr for PolyFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "xi" => Ok(PolyFamily::Xi),
            "lambda" => Ok(PolyFamily::Lambda),
            _ => Err(Error::UnknownId(s.into())),
        }
    }
}

/// `sum_p y_p x^{2p-2}` from inverted row coefficients.
fn even_poly(y: &[Rational]) -> RationalPolynomial {
    let mut c = vec![Rational::new(); 2 * y.len() - 1];
    for (p, v) in y.iter().enumerate() {
        c[2 * p] = v.clone();
    }
    RationalPolynomial::new(c)
}

/// `Xi_1..Xi_{n_max}` or `Lambda_1..`, by inverting the monomial table.
///
/// Fails with `InsufficientPrecision` if any row of the monomial table is uncertified.
pub fn poly_table(family: PolyFamily, n_max: u32, digits: u32) -> Result<Vec<RationalPolynomial>> {
    if n_max == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let table = coeff_table(&family.monomial_family(), n_max, digits)?;
    if let Some(r) = table.rows.iter().find(|r| !r.certified) {
        return Err(Error::InsufficientPrecision(format!(
            "row {} of {} is uncertified (residual {})",
            r.n, table.family, r.residual_bound
        )));
    }
    let m = table_matrix(&table)?;
    (1..=n_max as usize).map(|n| Ok(even_poly(&triangular_invert(&m, n)?))).collect()
}

pub fn poly_family(family: PolyFamily, n: u32, digits: u32) -> Result<RationalPolynomial> {
    Ok(poly_table(family, n, digits)?.pop().expect("n >= 1"))
}

/// `-2 sum_{k<K} int cos((4k+2)x)/ln tan x / (2k+1)`, which tends to `pi/4`.
pub fn fourier_partial_sum(big_k: u32, digits: u32) -> Result<PrecisionReal> {
    Ok(fourier_table(big_k, digits)?.pop().map_or_else(|| PrecisionReal::zero(digits), |r| r.partial_sum))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierRow {
    pub k: u32,
    pub partial_sum: PrecisionReal,
    /// `partial_sum - pi/4`
    pub delta: PrecisionReal,
    pub error_bound: String,
}

/// Partial sums for `K = 1..=big_k` against `pi/4`.
pub fn fourier_table(big_k: u32, digits: u32) -> Result<Vec<FourierRow>> {
    let terms: Vec<Result<PrecisionReal>> = (0..big_k)
        .into_par_iter()
        .map(|k| {
            let v = integrate(&KernelSpec::F4(k + 1), digits)?.value;
            Ok(v.scale(&Rational::from((-2, 2 * k + 1))))
        })
        .collect();
    let quarter_pi = constant(ConstantId::Pi, digits)?.scale(&Rational::from((1, 4)));
    let mut acc = PrecisionReal::zero(digits);
    let mut rows = Vec::with_capacity(big_k as usize);
    for (k, t) in terms.into_iter().enumerate() {
        acc = acc.add(&t?);
        let delta = acc.sub(&quarter_pi);
        rows.push(FourierRow { k: k as u32 + 1, error_bound: acc.error_string(), partial_sum: acc.clone(), delta });
    }
    Ok(rows)
}

/// `(-1)^N / (2^{2N-1} (2N-1)!)` for beta, `(-1)^N 2 / ((2^{2N+1}-1) (2N)!)` for zeta.
pub fn kyrion_prefactor(target: Basis, big_n: u32) -> Rational {
    let sign = if big_n.is_multiple_of(2) { 1 } else { -1 };
    let den = match target {
        Basis::Beta => (Integer::from(1) << (2 * big_n - 1)) * Integer::from(Integer::factorial(2 * big_n - 1)),
        Basis::Zeta => {
            let f = Integer::from(Integer::factorial(2 * big_n));
            ((Integer::from(1) << (2 * big_n + 1)) - 1u32) * f / 2u32
        }
    };
    Rational::from((Integer::from(sign), den))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KyrionCheck {
    pub target: Basis,
    pub n: u32,
    /// `prefactor * pi^{power} * int F13`
    pub value: PrecisionReal,
    /// `beta(2N)` or `zeta(2N+1)`
    pub expected: PrecisionReal,
    pub residual_bound: String,
}

/// Compare the Kyrion representation with `beta(2N)` or `zeta(2N+1)` directly.
pub fn verify_kyrion(target: Basis, big_n: u32, digits: u32) -> Result<KyrionCheck> {
    if big_n == 0 || big_n > MAX_KYRION {
        return Err(Error::Domain(format!("N must be in 1..={MAX_KYRION}")));
    }
    let zeta = target == Basis::Zeta;
    let integral = integrate(&KernelSpec::F13 { zeta, n: big_n }, digits)?.value;
    let power = if zeta { 2 * big_n } else { 2 * big_n - 1 };
    let pi_pow = constant(ConstantId::Pi, digits)?.powi(power);
    let value = integral.mul(&pi_pow).scale(&kyrion_prefactor(target, big_n));
    let expected = constant(if zeta { ConstantId::Zeta(2 * big_n + 1) } else { ConstantId::Beta(2 * big_n) }, digits)?;
    let bound = residual_upper(&value.sub(&expected));
    Ok(KyrionCheck { target, n: big_n, value, expected, residual_bound: format_sig(&bound, 3) })
}

/// Upper bound of a check's residual as a float.
pub fn bound_value(s: &str) -> Float {
    Float::with_val(64, Float::parse(s).expect("bound strings are produced by format_sig"))
}
