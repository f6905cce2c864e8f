//! Laurent data of `sinh((2k+1)z) / (z cosh^n z)` at the poles `z_l = (2l+1) i pi / 2`.
//!
//! With `z = z_l + w`, `cosh z = sinh(z_l) sinh(w)` and `sinh(z_l) = i (-1)^l`.

use rug::Rational;

use super::gaussian::{GaussianRational, PiLaurent};
use super::numbers::factorial;
use super::series::{Scalar, TruncatedSeries};

/// Laurent series of `1 / cosh^n(z_l + w)` through order `order >= -n`.
pub fn laurent_inverse_cosh_pow(n: u32, l: i64, order: i32) -> TruncatedSeries<GaussianRational> {
    assert!(n >= 1, "n must be positive");
    assert!(order >= -(n as i32), "order must be at least -n");
    let sinh_n = TruncatedSeries::sinh_pow(n, order + 2 * n as i32);
    let inv = sinh_n.invert().expect("sinh^n w has leading coefficient 1");
    // (i (-1)^l)^-n = (-i)^n (-1)^{ln}
    let mut factor = GaussianRational::i_pow(-(n as i64));
    if (l.rem_euclid(2) == 1) && n % 2 == 1 {
        factor = factor.neg_ref();
    }
    inv.map(|c| factor.scale(c))
}

/// `sin(m pi / 2)` for odd `m`.
fn sin_half_pi_odd(m: i64) -> i64 {
    debug_assert!(m.rem_euclid(2) == 1);
    if (m - 1).div_euclid(2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Taylor series of `sinh((2k+1)(z_l + w)) / (z_l + w)` through order `order >= 0`.
///
/// Coefficient of `w^M` is `sum_{j even <= M} a^j/j! sinh(a z_l) (-1)^{M-j} z_l^{-(M-j+1)}`
/// with `a = 2k+1`; the odd-`j` terms carry `cosh(a z_l) = 0`. Coefficients are sums of
/// Gaussian rationals times powers of pi, since `z_l^-q = (2/(2l+1))^q (-i)^q pi^-q`.
pub fn taylor_sinh_ratio(k: u32, l: i64, order: i32) -> TruncatedSeries<PiLaurent> {
    assert!(order >= 0, "order must be non-negative");
    let a = 2 * k as i64 + 1;
    let odd = 2 * l + 1;
    let sinh_az = GaussianRational::new(0, sin_half_pi_odd(a * odd));
    let coeffs = (0..=order as u32)
        .map(|m_ord| {
            let mut acc = PiLaurent::zero();
            for j in (0..=m_ord).step_by(2) {
                let q = m_ord - j + 1;
                let aj = Rational::from(rug::Integer::from(a).pow(j)) / factorial(j);
                let zinv = Rational::from((rug::Integer::from(2).pow(q), rug::Integer::from(odd).pow(q)));
                let sign = if (m_ord - j) % 2 == 0 { 1 } else { -1 };
                let c = sinh_az.mul_ref(&GaussianRational::i_pow(-(q as i64))).scale(&(aj * zinv * sign));
                acc = acc.add_ref(&PiLaurent::term(c, -(q as i32)));
            }
            acc
        })
        .collect();
    TruncatedSeries::new(0, coeffs)
}

/// Residue of `sinh((2k+1)z) / (z cosh^n z)` at `z_l`, as `(coefficient, pi power)` pairs
/// in increasing pi power.
pub fn residue_at_pole(n: u32, k: u32, l: i64) -> Vec<(GaussianRational, i32)> {
    residue_pi_laurent(n, k, l).terms()
}

pub fn residue_pi_laurent(n: u32, k: u32, l: i64) -> PiLaurent {
    let laurent = laurent_inverse_cosh_pow(n, l, -1).map(|c| PiLaurent::constant(c.clone()));
    let taylor = taylor_sinh_ratio(k, l, n as i32 - 1);
    let prod = laurent.mul(&taylor);
    prod.coeff(-1).expect("product known through order -1")
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_cosh_examples() {
        let s = laurent_inverse_cosh_pow(1, 0, 1);
        assert_eq!(s.leading_order(), -1);
        assert_eq!(s.coeff(-1), Some(GaussianRational::new(0, -1)));
        assert_eq!(s.coeff(0), Some(GaussianRational::zero()));
        assert_eq!(s.coeff(1), Some(GaussianRational::new(0, Rational::from((1, 6)))));
        assert_eq!(s.truncation_order(), 1);

        let s = laurent_inverse_cosh_pow(2, 0, 0);
        assert_eq!(s.coeff(-2), Some(GaussianRational::real(-1)));
        assert_eq!(s.coeff(0), Some(GaussianRational::real(Rational::from((1, 3)))));

        for n in 1..=6 {
            for l in -2..=2 {
                let s = laurent_inverse_cosh_pow(n, l, 0);
                assert_eq!(s.coeff(-(n as i32)).unwrap().norm(), 1);
            }
        }
    }

    #[test]
    fn taylor_constant_term() {
        let t = taylor_sinh_ratio(0, 0, 2);
        let c0 = t.coeff(0).unwrap();
        assert_eq!(c0.terms(), vec![(GaussianRational::real(2), -1)]);
    }

    #[test]
    fn simple_pole_residue() {
        let r = residue_at_pole(1, 0, 0);
        assert_eq!(r, vec![(GaussianRational::new(0, -2), -1)]);
    }

    #[test]
    fn residues_are_purely_imaginary() {
        for n in 1..=5 {
            for k in 0..=2 {
                for l in -1..=2 {
                    for (c, _) in residue_at_pole(n, k, l) {
                        assert_eq!(c.re, 0, "n={n} k={k} l={l}");
                    }
                }
            }
        }
    }
}
