//! Truncated Laurent/Taylor series `sum_{k=lead}^{trunc} c_k w^k + O(w^{trunc+1})`.

use std::fmt::{self, Debug, Display};

use rug::ops::Pow;
use rug::Rational;

use super::numbers::{binomial, factorial};
use crate::error::{Error, Result};

/// Commutative ring used as series coefficients.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

pub trait Field: Scalar {
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_ref(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn neg_ref(&self) -> Self {
        Rational::from(-self)
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if *self == 0 {
            None
        } else {
            Some(Rational::from(self.recip_ref()))
        }
    }
}

/// `coeffs.len() == trunc - lead + 1`; every coefficient of order `<= trunc` is known.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    lead: i32,
    coeffs: Vec<C>,
}

impl<C: Scalar> TruncatedSeries<C> {
    /// `coeffs[i]` multiplies `w^(lead + i)`; the truncation order is `lead + len - 1`.
    ///
    /// Panics on an empty coefficient list.
    pub fn new(lead: i32, coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { lead, coeffs }
    }

    /// Series with every coefficient from `lead` through `trunc` zero.
    pub fn zeros(lead: i32, trunc: i32) -> Self {
        assert!(trunc >= lead);
        Self::new(lead, vec![C::zero(); (trunc - lead + 1) as usize])
    }

    /// `c w^k`, known exactly through order `trunc`.
    pub fn monomial(c: C, k: i32, trunc: i32) -> Self {
        let mut s = Self::zeros(k, trunc.max(k));
        s.coeffs[0] = c;
        s
    }

    pub fn one(trunc: i32) -> Self {
        Self::monomial(C::one(), 0, trunc)
    }

    pub fn leading_order(&self) -> i32 {
        self.lead
    }

    pub fn truncation_order(&self) -> i32 {
        self.lead + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `w^k`; zero below the leading order, `None` beyond truncation.
    pub fn coeff(&self, k: i32) -> Option<C> {
        if k < self.lead {
            Some(C::zero())
        } else {
            self.coeffs.get((k - self.lead) as usize).cloned()
        }
    }

    /// Drop orders above `trunc`.
    pub fn truncate(&self, trunc: i32) -> Self {
        assert!(trunc >= self.lead, "cannot truncate below the leading order");
        let keep = ((trunc - self.lead + 1) as usize).min(self.coeffs.len());
        Self::new(self.lead, self.coeffs[..keep].to_vec())
    }

    /// Move the leading order past any zero coefficients; an all-zero series is unchanged.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) | None => self.clone(),
            Some(i) => Self::new(self.lead + i as i32, self.coeffs[i..].to_vec()),
        }
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries::new(self.lead, self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.mul_ref(c))
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg_ref)
    }

    /// Sum known through the smaller truncation order.
    pub fn add(&self, o: &Self) -> Self {
        let lead = self.lead.min(o.lead);
        let trunc = self.truncation_order().min(o.truncation_order());
        if trunc < lead {
            return Self::zeros(trunc, trunc);
        }
        let coeffs = (lead..=trunc)
            .map(|k| {
                let a = self.coeff(k).expect("within truncation");
                let b = o.coeff(k).expect("within truncation");
                a.add_ref(&b)
            })
            .collect();
        Self::new(lead, coeffs)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Cauchy product.
    ///
    /// Leading orders add. The product is known through
    /// `min(trunc_a + lead_b, trunc_b + lead_a)`, which equals the smaller truncation order
    /// whenever both series start at order 0.
    pub fn mul(&self, o: &Self) -> Self {
        let lead = self.lead + o.lead;
        let trunc = (self.truncation_order() + o.lead).min(o.truncation_order() + self.lead);
        let len = (trunc - lead + 1) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(lead, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.truncation_order() - self.lead);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

impl<C: Field> TruncatedSeries<C> {
    /// Multiplicative inverse; the leading order negates and the relative precision
    /// (`trunc - lead`) is preserved.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.coeffs[0].inv().ok_or_else(|| Error::Singular("series has a zero leading coefficient".into()))?;
        let n = self.coeffs.len();
        let mut b: Vec<C> = Vec::with_capacity(n);
        b.push(a0.clone());
        for m in 1..n {
            let mut acc = C::zero();
            for j in 1..=m {
                acc = acc.add_ref(&self.coeffs[j].mul_ref(&b[m - j]));
            }
            b.push(acc.mul_ref(&a0).neg_ref());
        }
        Ok(Self::new(-self.lead, b))
    }
}

impl TruncatedSeries<Rational> {
    /// Taylor series of `sinh(alpha w)` through order `trunc >= 0`.
    pub fn sinh(alpha: &Rational, trunc: i32) -> Self {
        Self::exp_like(alpha, trunc, |m| m % 2 == 1)
    }

    /// Taylor series of `cosh(alpha w)` through order `trunc >= 0`.
    pub fn cosh(alpha: &Rational, trunc: i32) -> Self {
        Self::exp_like(alpha, trunc, |m| m % 2 == 0)
    }

    fn exp_like(alpha: &Rational, trunc: i32, keep: impl Fn(u32) -> bool) -> Self {
        assert!(trunc >= 0);
        let coeffs = (0..=trunc as u32)
            .map(|m| {
                if keep(m) {
                    let p = Rational::from(alpha.pow(m));
                    p / factorial(m)
                } else {
                    Rational::new()
                }
            })
            .collect();
        Self::new(0, coeffs)
    }

    /// `sinh^n w` through order `trunc`, from the linearisation
    /// `sinh^n w = 2^-n sum_j C(n,j) (-1)^j e^{(n-2j) w}`.
    pub fn sinh_pow(n: u32, trunc: i32) -> Self {
        assert!(trunc >= n as i32, "sinh^n w starts at order n");
        let scale = Rational::from((1, 1)) >> n;
        let coeffs = (n..=trunc as u32)
            .map(|m| {
                let mut acc = rug::Integer::new();
                for j in 0..=n {
                    let base = rug::Integer::from(n as i64 - 2 * j as i64);
                    let term = binomial(n, j) * base.pow(m);
                    if j % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                Rational::from((acc, factorial(m))) * &scale
            })
            .collect();
        Self::new(n as i32, coeffs)
    }
}

impl<C: Scalar + Display> Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*w^{}", self.lead + i as i32)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(w^{})", self.truncation_order() + 1)
    }
}

pub fn series_mul<C: Scalar>(a: &TruncatedSeries<C>, b: &TruncatedSeries<C>) -> TruncatedSeries<C> {
    a.mul(b)
}

pub fn series_invert<C: Field>(a: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
    a.invert()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn ints(lead: i32, v: &[i64]) -> TruncatedSeries<Rational> {
        TruncatedSeries::new(lead, v.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn products() {
        let a = ints(0, &[1, 1, 0]);
        let b = ints(0, &[1, -1, 0]);
        assert_eq!(a.mul(&b), ints(0, &[1, 0, -1]));

        let winv = ints(-1, &[1, 0, 0]);
        let w = ints(1, &[1, 0, 0]);
        let p = winv.mul(&w);
        assert_eq!(p.leading_order(), 0);
        assert_eq!(p.coeff(0), Some(q(1, 1)));
        assert!(p.coeffs()[1..].iter().all(|c| *c == 0));

        let s = TruncatedSeries::sinh(&q(1, 1), 5);
        let s2 = s.mul(&s);
        assert_eq!(s2.coeff(2), Some(q(1, 1)));
        assert_eq!(s2.coeff(3), Some(q(0, 1)));
        assert_eq!(s2.coeff(4), Some(q(1, 3)));
    }

    #[test]
    fn inverses() {
        let g = ints(0, &[1, -1, 0, 0, 0]).invert().unwrap();
        assert_eq!(g, ints(0, &[1, 1, 1, 1, 1]));

        let w2 = ints(2, &[1]).invert().unwrap();
        assert_eq!(w2.leading_order(), -2);

        let s2 = TruncatedSeries::sinh_pow(2, 6);
        let inv = s2.invert().unwrap();
        assert_eq!(inv.leading_order(), -2);
        assert_eq!(inv.coeff(-2), Some(q(1, 1)));
        assert_eq!(inv.coeff(0), Some(q(-1, 3)));
        let back = s2.mul(&inv);
        assert_eq!(back.coeff(0), Some(q(1, 1)));
        assert!(back.coeffs()[1..].iter().all(|c| *c == 0));

        assert!(matches!(ints(0, &[0, 1]).invert(), Err(Error::Singular(_))));
    }

    #[test]
    fn sinh_pow_matches_repeated_product() {
        let s = TruncatedSeries::sinh(&q(1, 1), 12);
        for n in 1..=5u32 {
            let direct = TruncatedSeries::sinh_pow(n, 12);
            let mut prod = s.clone();
            for _ in 1..n {
                prod = prod.mul(&s);
            }
            let prod = prod.normalized().truncate(12);
            assert_eq!(direct, prod, "n = {n}");
        }
    }
}
