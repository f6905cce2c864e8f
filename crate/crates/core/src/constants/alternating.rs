//! Acceleration of alternating series `sum_{k>=0} (-1)^k a_k`.
//!
//! With the integer weights `d_k = N sum_{i<=k} (N+i-1)! 4^i / ((N-i)! (2i)!)`,
//! `S ~ (1/d_N) sum_{k<N} (-1)^k (d_N - d_k) a_k`. When `a_k` is a moment sequence of a
//! positive measure on `[0,1]` with `a_0 <= 1` the truncation error is at most
//! `3 / (3 + sqrt 8)^N`.

use rug::float::Round;
use rug::ops::PowAssignRound;
use rug::{Float, Integer, Rational};

/// `log2(3 + sqrt 8)`.
const LOG2_RATE: f64 = 2.543_106_606_327_581;

/// Number of terms so that `3 (3+sqrt 8)^-N < 2^-bits`.
pub fn terms_for_bits(bits: u32) -> u32 {
    ((bits as f64 + 2.0) / LOG2_RATE).ceil() as u32 + 1
}

/// Upper bound `3 (3 + sqrt 8)^-N` as a 64-bit float.
pub fn truncation_bound(n: u32) -> Float {
    // (3+sqrt 8)^-N <= 2^-(N * 2.5431) since log2(3+sqrt 8) > 2.5431
    let mut b = Float::with_val(64, 2);
    b.pow_assign_round(-(n as f64 * 2.5431).floor() as i32, Round::Up);
    b * 3u32
}

/// `(d_0, ..., d_N)`.
pub fn weights(n: u32) -> Vec<Integer> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut term = Rational::from((1, n.max(1)));
    let mut acc = Rational::new();
    for i in 0..=n {
        if i > 0 {
            // t_i / t_{i-1} = 4 (N+i-1)(N-i+1) / ((2i)(2i-1))
            let num = Integer::from(4) * (n + i - 1) * (n - i + 1);
            let den = Integer::from(2 * i) * (2 * i - 1);
            term *= Rational::from((num, den));
        }
        acc += &term;
        let d = Rational::from(&acc * n);
        debug_assert!(*d.denom() == 1, "Borwein weights are integers");
        out.push(d.numer().clone());
    }
    if n == 0 {
        out[0] = Integer::from(1);
    }
    out
}

/// Accelerated alternating sum at precision `prec` using `n` terms.
///
/// Returns the value together with a bound on the floating-point error committed, assuming
/// each `a_k` is supplied with relative error at most `2^-prec` and `|a_k| <= a_max`.
pub fn accelerate(n: u32, prec: u32, a: impl Fn(u32) -> Float, a_max: &Float) -> (Float, Float) {
    let d = weights(n);
    let dn = &d[n as usize];
    let mut sum = Float::new(prec);
    for k in 0..n {
        let w = Integer::from(dn - &d[k as usize]);
        let t = Float::with_val(prec, a(k) * &w);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    let value = Float::with_val(prec, sum / dn);
    // each term has |weight|/d_N <= 1 and at most 3 roundings; each of the n partial sums
    // is bounded by n a_max d_N and rounds once
    let mut err = Float::with_val(64, a_max);
    err *= n * n + 4 * n + 8;
    let mut ulp = Float::with_val(64, 2);
    ulp.pow_assign_round(-(prec as i32) + 1, Round::Up);
    err *= ulp;
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn small_weights() {
        let d = weights(3);
        assert_eq!(d, vec![1, 19, 67, 99].into_iter().map(Integer::from).collect::<Vec<_>>());
    }

    #[test]
    fn ln2_from_alternating_harmonic() {
        let prec = 200;
        let n = terms_for_bits(prec);
        let (v, _) = accelerate(n, prec, |k| Float::with_val(prec, k + 1).recip(), &Float::with_val(64, 1));
        let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
        let diff = Float::with_val(prec, &v - &ln2).abs();
        assert!(diff < Float::with_val(64, 2).pow(-190i32), "{diff}");
    }
}
