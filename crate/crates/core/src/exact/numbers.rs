//! Combinatorial number sequences: Bernoulli, Euler (secant) and the type A / type B
//! Eulerian triangles.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::ZERO;
    }
    Integer::from(Integer::binomial_u(n, k))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
///
/// Uses the double sum `B_n = sum_{k=0}^{n} 1/(k+1) sum_{j=0}^{k} (-1)^j C(k,j) j^n`
/// (with `0^0 = 1`), which needs no previously computed values.
pub fn bernoulli(n: u32) -> Rational {
    let mut total = Rational::new();
    for k in 0..=n {
        let mut inner = Integer::new();
        for j in 0..=k {
            let term = binomial(k, j) * Integer::from(j).pow(n);
            if j % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        total += Rational::from((inner, k + 1));
    }
    total
}

/// Euler number `E_n` in the secant convention `sech x = sum E_n x^n / n!`.
///
/// Computed from the boustrophedon (Seidel) triangle, which yields the zigzag numbers
/// `|E_n|`; the sign is `(-1)^{n/2}`.
pub fn euler_number(n: u32) -> Result<Integer> {
    if n % 2 == 1 {
        return Err(Error::Domain(format!("euler_number is defined here for even n only (got {n})")));
    }
    let zigzag = zigzag_numbers(n as usize);
    let magnitude = zigzag[n as usize].clone();
    Ok(if (n / 2).is_multiple_of(2) { magnitude } else { -magnitude })
}

/// Entringer/boustrophedon construction of the zigzag numbers `A_0..=A_n`.
fn zigzag_numbers(n: usize) -> Vec<Integer> {
    let mut out = vec![Integer::from(1)];
    let mut row = vec![Integer::from(1)];
    for i in 1..=n {
        let mut next = Vec::with_capacity(i + 1);
        next.push(Integer::ZERO);
        for j in 0..i {
            let v = Integer::from(&next[j] + &row[i - 1 - j]);
            next.push(v);
        }
        out.push(next[i].clone());
        row = next;
    }
    out
}

fn check_range(n: u32, k: i64, hi: i64, what: &str) -> Result<u32> {
    if n == 0 {
        return Err(Error::Domain(format!("{what}: n must be positive")));
    }
    if k < 0 || k > hi {
        return Err(Error::Domain(format!("{what}({n}, {k}): k must lie in 0..={hi}")));
    }
    Ok(k as u32)
}

/// Type A Eulerian number `<n, k>`: `Li_{-n}(z) (1-z)^{n+1} = sum_{k=0}^{n-1} <n,k> z^{n-k}`.
///
/// Explicit alternating sum `sum_{j=0}^{k+1} (-1)^j C(n+1, j) (k+1-j)^n`.
pub fn eulerian_a(n: u32, k: i64) -> Result<Integer> {
    let k = check_range(n, k, n as i64 - 1, "eulerian_A")?;
    let mut total = Integer::new();
    for j in 0..=k + 1 {
        let term = binomial(n + 1, j) * Integer::from(k + 1 - j).pow(n);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Type B Eulerian number: `P_n(x) (1-x)^{n+1} = sum_{k=0}^{n} B(n,k) x^k` where
/// `P_n(x) = sum_{j>=0} (2j+1)^n x^j`.
///
/// Explicit sum `sum_{j=0}^{k} (-1)^{k-j} C(n+1, k-j) (2j+1)^n`.
pub fn eulerian_b(n: u32, k: i64) -> Result<Integer> {
    let k = check_range(n, k, n as i64, "eulerian_B")?;
    Ok(eulerian_b_unchecked(n, k))
}

pub(crate) fn eulerian_b_unchecked(n: u32, k: u32) -> Integer {
    let mut total = Integer::new();
    for j in 0..=k {
        let term = binomial(n + 1, k - j) * Integer::from(2 * j + 1).pow(n);
        if (k - j).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Row `n` of the type A triangle, `k = 0..n-1`.
pub fn eulerian_a_row(n: u32) -> Vec<Integer> {
    (0..n as i64).map(|k| eulerian_a(n, k).expect("k in range")).collect()
}

/// Row `n` of the type B triangle, `k = 0..=n`. Row 0 is `[1]`.
pub fn eulerian_b_row(n: u32) -> Vec<Integer> {
    (0..=n).map(|k| eulerian_b_unchecked(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn euler_small_values() {
        assert_eq!(euler_number(0).unwrap(), 1);
        assert_eq!(euler_number(2).unwrap(), -1);
        assert_eq!(euler_number(4).unwrap(), 5);
        assert_eq!(euler_number(6).unwrap(), -61);
        assert!(matches!(euler_number(3), Err(Error::Domain(_))));
    }

    #[test]
    fn eulerian_rows() {
        assert_eq!(eulerian_a(1, 0).unwrap(), 1);
        assert_eq!(eulerian_a(2, 1).unwrap(), 1);
        assert_eq!(eulerian_a_row(3), vec![1, 4, 1]);
        assert_eq!(eulerian_a_row(7), vec![1, 120, 1191, 2416, 1191, 120, 1]);
        assert_eq!(eulerian_b(1, 0).unwrap(), 1);
        assert_eq!(eulerian_b(2, 1).unwrap(), 6);
        assert_eq!(eulerian_b(2, 2).unwrap(), 1);
        assert_eq!(eulerian_b_row(0), vec![1]);
    }

    #[test]
    fn eulerian_out_of_range() {
        assert!(matches!(eulerian_a(3, 3), Err(Error::Domain(_))));
        assert!(matches!(eulerian_a(3, -1), Err(Error::Domain(_))));
        assert!(matches!(eulerian_b(2, 3), Err(Error::Domain(_))));
        assert!(matches!(eulerian_a(0, 0), Err(Error::Domain(_))));
    }
}
