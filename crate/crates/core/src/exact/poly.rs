use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense polynomial with exact rational coefficients; `coeffs()[i]` multiplies `x^i`.
///
/// The highest stored coefficient is never zero; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Self::new(vec![c.into()])
    }

    pub fn monomial(c: impl Into<Rational>, degree: usize) -> Self {
        let mut coeffs = vec![Rational::new(); degree + 1];
        coeffs[degree] = c.into();
        Self::new(coeffs)
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(it: I) -> Self {
        Self::new(it.into_iter().map(Rational::from).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation in the precision of `x`.
    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficients reversed against `degree`: `x^degree p(1/x)`.
    pub fn reversed(&self, degree: usize) -> Self {
        assert!(self.coeffs.len() <= degree + 1, "reversal degree too small");
        let mut coeffs = vec![Rational::new(); degree + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[degree - i] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(1);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Substitute `x -> x^2`.
    pub fn compose_square(&self) -> Self {
        let mut coeffs = vec![Rational::new(); self.coeffs.len() * 2];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        Self::new(coeffs)
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut coeffs = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += Rational::from(a * b);
            }
        }
        RationalPolynomial::new(coeffs)
    }
}

impl fmt::Display for RationalPolynomial {
    /// Highest degree first, e.g. `-1/16 x^2 + 5/96`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag} x")?,
                _ => write!(f, "{mag} x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Comma-separated coefficient list, lowest degree first: `"5/96,0,-1/16"`.
impl FromStr for RationalPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s).map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
}

impl Serialize for RationalPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs =
            v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>().map_err(serde::de::Error::custom)?;
        Ok(Self::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = RationalPolynomial::from_integers([1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(RationalPolynomial::from_integers([0, 0]).is_zero());
        assert_eq!(RationalPolynomial::zero().degree(), None);
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = RationalPolynomial::from_integers([1, 1]);
        let q = RationalPolynomial::from_integers([1, -1]);
        assert_eq!(&p * &q, RationalPolynomial::from_integers([1, 0, -1]));
        assert_eq!((&p + &q), RationalPolynomial::constant(2));
        assert!((&p - &p).is_zero());
        assert_eq!(p.pow(3).eval(&Rational::from(1)), 8);
        assert_eq!(p.compose_square(), RationalPolynomial::from_integers([1, 0, 1]));
        assert_eq!(
            RationalPolynomial::from_integers([1, 2, 3]).reversed(3),
            RationalPolynomial::from_integers([0, 3, 2, 1])
        );
    }

    #[test]
    fn display_and_parse() {
        let p: RationalPolynomial = "5/96, 0, -1/16".parse().unwrap();
        assert_eq!(p.to_string(), "-1/16 x^2 + 5/96");
        assert!("1/0".parse::<RationalPolynomial>().is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<RationalPolynomial>(&json).unwrap(), p);
    }
}
