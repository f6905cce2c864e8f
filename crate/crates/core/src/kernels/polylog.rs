//! Negative-order polylogarithms and the odd-power series `P_n`, as rational functions whose
//! numerators are Eulerian rows.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::numbers::{eulerian_a_row, eulerian_b_row};
use crate::exact::{Field, GaussianRational, RationalPolynomial, Scalar};
use crate::precision::PrecisionReal;

/// `N_n(z) = sum_{k<n} A(n,k) z^{n-k}`, so that `Li_{-n}(z) = N_n(z) / (1-z)^{n+1}`.
pub fn polylog_neg_numerator(n: u32) -> RationalPolynomial {
    let mut coeffs = vec![Rational::new(); n as usize + 1];
    for (k, a) in eulerian_a_row(n).into_iter().enumerate() {
        coeffs[n as usize - k] = Rational::from(a);
    }
    RationalPolynomial::new(coeffs)
}

/// `Q_n(x) = sum_{k<=n} B(n,k) x^k`, so that `P_n(x) = Q_n(x) / (1-x)^{n+1}`.
pub fn p_poly_numerator(n: u32) -> RationalPolynomial {
    RationalPolynomial::new(eulerian_b_row(n).into_iter().map(Rational::from).collect())
}

fn horner(p: &RationalPolynomial, x: &PrecisionReal) -> PrecisionReal {
    let mut acc = PrecisionReal::zero(x.digits());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&PrecisionReal::from_rational(c, x.digits()));
    }
    acc
}

fn rational_function(num: &RationalPolynomial, pow: u32, z: &PrecisionReal) -> Result<PrecisionReal> {
    if z.value() == &1 && z.error_bound().is_zero() {
        return Err(Error::Pole);
    }
    let one = PrecisionReal::exact(Float::with_val(z.prec(), 1), z.digits());
    let den = one.sub(z).powi(pow);
    horner(num, z).div(&den).map_err(|_| Error::Pole)
}

/// `Li_{-n}(z)` for real `z != 1`, `n >= 1`, with propagated error bound.
pub fn polylog_neg(n: u32, z: &PrecisionReal) -> Result<PrecisionReal> {
    if n == 0 {
        return Err(Error::Domain("polylog_neg needs n >= 1".into()));
    }
    rational_function(&polylog_neg_numerator(n), n + 1, z)
}

/// `P_n(x)` for real `x != 1`.
pub fn p_poly(n: u32, x: &PrecisionReal) -> Result<PrecisionReal> {
    rational_function(&p_poly_numerator(n), n + 1, x)
}

/// Exact `Li_{-n}(z)` at a Gaussian rational `z != 1`.
pub fn polylog_neg_exact(n: u32, z: &GaussianRational) -> Result<GaussianRational> {
    if n == 0 {
        return Err(Error::Domain("polylog_neg needs n >= 1".into()));
    }
    let num = polylog_neg_numerator(n);
    let mut acc = GaussianRational::zero();
    for c in num.coeffs().iter().rev() {
        acc = acc.mul_ref(z).add_ref(&GaussianRational::real(c.clone()));
    }
    let den = GaussianRational::one().sub_ref(z).pow(n + 1);
    let inv = den.inv().ok_or(Error::Pole)?;
    Ok(acc.mul_ref(&inv))
}

/// Exact `P_n(x)` at a rational `x != 1`.
pub fn p_poly_exact(n: u32, x: &Rational) -> Result<Rational> {
    if *x == 1 {
        return Err(Error::Pole);
    }
    let den = Rational::from(1 - x).pow(n + 1);
    Ok(p_poly_numerator(n).eval(x) / den)
}

/// Numerator of `Li_{-(2n+1)}(-x^2) / x` over `(1+x^2)^{2n+2}`.
pub fn f7_numerator(n: u32) -> RationalPolynomial {
    let m = 2 * n + 1;
    // N_m(-x^2) has only even powers starting at x^2, so dividing by x is exact
    let base = polylog_neg_numerator(m);
    let mut coeffs = vec![Rational::new(); 2 * m as usize];
    for (j, c) in base.coeffs().iter().enumerate().skip(1) {
        let signed = if j % 2 == 0 { c.clone() } else { Rational::from(-c) };
        coeffs[2 * j - 1] = signed;
    }
    RationalPolynomial::new(coeffs)
}

/// Numerator of `Im Li_{-2n}(ix) / x = P_{2n}(-x^2)` over `(1+x^2)^{2n+1}`.
pub fn f8_numerator(n: u32) -> RationalPolynomial {
    let q = p_poly_numerator(2 * n);
    let mut coeffs = vec![Rational::new(); 2 * q.coeffs().len()];
    for (k, c) in q.coeffs().iter().enumerate() {
        coeffs[2 * k] = if k % 2 == 0 { c.clone() } else { Rational::from(-c) };
    }
    RationalPolynomial::new(coeffs)
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn small_values() {
        let half = PrecisionReal::from_rational(&q(1, 2), 30);
        let v = polylog_neg(1, &half).unwrap();
        assert!(v.agrees_with(&PrecisionReal::from_rational(&q(2, 1), 30), 28));
        assert_eq!(p_poly_exact(0, &q(0, 1)).unwrap(), 1);
        let one = PrecisionReal::from_rational(&q(1, 1), 30);
        assert_eq!(polylog_neg(3, &one), Err(Error::Pole));
        assert_eq!(p_poly_exact(2, &q(1, 1)), Err(Error::Pole));
    }

    #[test]
    fn malmsten_link() {
        // Li_{-3}(-x^2)/x = -x(x^4 - 4x^2 + 1)/(1+x^2)^4
        assert_eq!(f7_numerator(1), RationalPolynomial::from_integers([0, -1, 0, 4, 0, -1]));
        // P_2(-x^2) = (1 - 6x^2 + x^4)/(1+x^2)^3
        assert_eq!(f8_numerator(1), RationalPolynomial::from_integers([1, 0, -6, 0, 1]));
    }

    #[test]
    fn imaginary_part_of_li_at_ix() {
        for n in 1..=4 {
            for (a, b) in [(1, 2), (1, 3), (2, 7), (5, 11)] {
                let x = q(a, b);
                let li = polylog_neg_exact(2 * n, &GaussianRational::new(0, x.clone())).unwrap();
                let lhs = li.im / &x;
                let rhs = p_poly_exact(2 * n, &(-Rational::from(&x * &x))).unwrap();
                assert_eq!(lhs, rhs, "n={n} x={x}");
            }
        }
    }
}
