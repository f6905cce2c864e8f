//! Continued-fraction recovery of a small-denominator rational from a certified real.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::PrecisionReal;

/// Simplest rational (smallest denominator, then smallest numerator) in `[lo, hi]`, `0 < lo <= hi`.
fn simplest_positive(mut lo: Rational, mut hi: Rational) -> Rational {
    // continued-fraction expansion of both ends until they part; keeps the convergent pair
    let (mut p0, mut q0, mut p1, mut q1) = (Integer::from(0), Integer::from(1), Integer::from(1), Integer::from(0));
    loop {
        let f = lo.clone().floor();
        let fi = f.numer().clone();
        let done = if lo == f {
            Some(fi.clone())
        } else if Rational::from(&f + 1u32) <= hi {
            Some(fi.clone() + 1u32)
        } else {
            None
        };
        if let Some(a) = done {
            let p = Integer::from(&a * &p1) + &p0;
            let q = Integer::from(&a * &q1) + &q0;
            return Rational::from((p, q));
        }
        let p2 = Integer::from(&fi * &p1) + &p0;
        let q2 = Integer::from(&fi * &q1) + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        // both ends lie in (f, f+1): recurse on the reciprocals of the fractional parts
        let nlo = (hi - &f).recip();
        let nhi = (lo - &f).recip();
        lo = nlo;
        hi = nhi;
    }
}

/// Simplest rational in the closed interval `[lo, hi]`.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if *lo <= 0 && *hi >= 0 {
        Rational::new()
    } else if *lo > 0 {
        simplest_positive(lo.clone(), hi.clone())
    } else {
        -simplest_positive(Rational::from(-hi), Rational::from(-lo))
    }
}

/// The unique `p/q` with `q <= max_den` inside `x`'s error window.
///
/// Requires `err < 1/(2 max_den^2)`: two distinct such fractions differ by at least
/// `1/max_den^2`, so at most one fits.
pub fn rational_reconstruct(x: &PrecisionReal, max_den: &Integer) -> Result<Rational> {
    if *max_den < 1 {
        return Err(Error::Domain("max_denominator must be positive".into()));
    }
    let err = x.error_bound().to_rational().ok_or_else(|| Error::Domain("non-finite error bound".into()))?;
    let q2 = Rational::from(Integer::from(max_den.square_ref()) * 2u32);
    if Rational::from(&err * &q2) >= 1 {
        return Err(Error::InsufficientPrecision(format!(
            "error {} is too wide to isolate a denominator <= {max_den}",
            x.error_string()
        )));
    }
    let v = x.value().to_rational().ok_or_else(|| Error::Domain("non-finite value".into()))?;
    let r = simplest_in(&Rational::from(&v - &err), &Rational::from(&v + &err));
    if r.denom() > max_den {
        return Err(Error::NoRational(max_den.to_string()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn pr(v: &Rational, err: f64) -> PrecisionReal {
        PrecisionReal::new(Float::with_val(256, v), Float::with_val(64, err), 30)
    }

    #[test]
    fn spec_examples() {
        let m = Integer::from(1_000_000);
        assert_eq!(rational_reconstruct(&pr(&Rational::from((1, 4)), 1e-30), &m).unwrap(), Rational::from((1, 4)));
        let third = pr(&Rational::from((1, 3)), 1e-2);
        assert!(matches!(rational_reconstruct(&third, &m), Err(Error::InsufficientPrecision(_))));
        let neg = pr(&Rational::from((-563, 225)), 1e-40);
        assert_eq!(rational_reconstruct(&neg, &m).unwrap(), Rational::from((-563, 225)));
    }

    #[test]
    fn denominator_above_bound() {
        let x = pr(&Rational::from((1, 1_000_003)), 1e-40);
        assert!(matches!(rational_reconstruct(&x, &Integer::from(1000)), Err(Error::NoRational(_))));
    }

    #[test]
    fn simplest_prefers_small_denominators() {
        let r = simplest_in(&Rational::from((3, 10)), &Rational::from((4, 10)));
        assert_eq!(r, Rational::from((1, 3)));
        assert_eq!(simplest_in(&Rational::from((7, 2)), &Rational::from((7, 2))), Rational::from((7, 2)));
        assert_eq!(simplest_in(&Rational::from(-3), &Rational::from((-5, 2))), Rational::from(-3));
    }
}
