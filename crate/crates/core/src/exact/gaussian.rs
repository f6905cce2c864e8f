//! Gaussian rationals `a + bi` and finite sums `sum c_q pi^q` with Gaussian-rational
//! coefficients. Residues at the poles `(2l+1)i pi/2` live in the latter.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use super::series::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        GaussianRational { re: re.into(), im: im.into() }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        Self::new(re, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::new(1, 0),
            1 => Self::new(0, 1),
            2 => Self::new(-1, 0),
            _ => Self::new(0, -1),
        }
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: Rational::from(-&self.im) }
    }

    pub fn norm(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GaussianRational { re: Rational::from(&self.re * c), im: Rational::from(&self.im * c) }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul_ref(self);
        }
        out
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (Float::with_val(prec, &self.re), Float::with_val(prec, &self.im)))
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::new(1, 0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }
    fn add_ref(&self, o: &Self) -> Self {
        GaussianRational { re: Rational::from(&self.re + &o.re), im: Rational::from(&self.im + &o.im) }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        GaussianRational { re: Rational::from(&self.re - &o.re), im: Rational::from(&self.im - &o.im) }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        GaussianRational { re, im }
    }
    fn neg_ref(&self) -> Self {
        GaussianRational { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }
}

impl Field for GaussianRational {
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0 {
            return None;
        }
        let r = n.recip();
        Some(self.conj().scale(&r))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re == 0, self.im == 0) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im < 0 => {
                write!(f, "{} - {}i", self.re, Rational::from(-&self.im))
            }
            _ => write!(f, "{} + {}i", self.re, self.im),
        }
    }
}

/// Finite Laurent polynomial in `pi`: key = power of pi. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PiLaurent {
    terms: BTreeMap<i32, GaussianRational>,
}

impl PiLaurent {
    pub fn term(c: GaussianRational, pi_power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(pi_power, c);
        }
        PiLaurent { terms }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, 0)
    }

    /// `(coefficient, pi power)` pairs in increasing power.
    pub fn terms(&self) -> Vec<(GaussianRational, i32)> {
        self.terms.iter().map(|(p, c)| (c.clone(), *p)).collect()
    }

    pub fn coeff(&self, pi_power: i32) -> GaussianRational {
        self.terms.get(&pi_power).cloned().unwrap_or_default()
    }

    fn accumulate(&mut self, p: i32, c: GaussianRational) {
        let slot = self.terms.entry(p).or_default();
        *slot = slot.add_ref(&c);
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        let mut acc = Complex::new(prec);
        for (p, c) in &self.terms {
            let w = Float::with_val(prec, (&pi).pow(*p));
            acc += c.to_complex(prec) * w;
        }
        acc
    }
}

impl Scalar for PiLaurent {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(GaussianRational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.accumulate(*p, c.clone());
        }
        out
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let mut out = Self::default();
        for (p, a) in &self.terms {
            for (q, b) in &o.terms {
                out.accumulate(p + q, a.mul_ref(b));
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        PiLaurent { terms: self.terms.iter().map(|(p, c)| (*p, c.neg_ref())).collect() }
    }
}

impl fmt::Display for PiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| match p {
                0 => format!("({c})"),
                _ => format!("({c})*pi^{p}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_field_ops() {
        let a = GaussianRational::new(1, 2);
        let b = GaussianRational::new(3, -1);
        assert_eq!(a.mul_ref(&b), GaussianRational::new(5, 5));
        let inv = a.inv().unwrap();
        assert_eq!(a.mul_ref(&inv), GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
        assert_eq!(GaussianRational::i_pow(-1), GaussianRational::new(0, -1));
        assert_eq!(GaussianRational::i().pow(4), GaussianRational::one());
    }

    #[test]
    fn pi_laurent_cancels_and_multiplies() {
        let a = PiLaurent::term(GaussianRational::real(2), -1);
        let b = PiLaurent::term(GaussianRational::real(3), 2);
        assert_eq!(a.mul_ref(&b).terms(), vec![(GaussianRational::real(6), 1)]);
        assert!(a.sub_ref(&a).is_zero());
        let z = a.to_complex(128);
        let want = Float::with_val(128, 2) / Float::with_val(128, rug::float::Constant::Pi);
        assert!(Float::with_val(128, z.real() - &want).abs() < 1e-35);
    }
}
