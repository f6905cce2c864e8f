//! Euler's constant by the Brent-McMillan formula
//! `gamma = U/V`, `U = sum_k (N^k/k!)^2 (H_k - ln N)`, `V = sum_k (N^k/k!)^2`,
//! whose truncation error for an infinite sum is below `pi e^{-4N}`.

use rug::float::Round;
use rug::ops::{AddAssignRound, PowAssignRound};
use rug::Float;

use crate::precision::{bits_for_digits, PrecisionReal};

pub fn euler_gamma(digits: u32) -> PrecisionReal {
    let target = bits_for_digits(digits) + 8;
    let n = ((target as f64) * std::f64::consts::LN_2 / 4.0).ceil() as u32 + 2;
    // the k-sum is cut at K = 4N + 10; the dropped terms are below e^{-4N} relative to V
    let kmax = 4 * n + 10;
    // terms peak near e^{2N}; carry those bits plus the harmonic growth
    let prec = target + (2.9 * n as f64) as u32 + 64;

    let nn = Float::with_val(prec, n);
    let n2 = Float::with_val(prec, &nn * &nn);
    let mut a = -Float::with_val(prec, nn.ln_ref());
    let mut b = Float::with_val(prec, 1);
    let mut u = a.clone();
    let mut v = b.clone();
    // magnitudes at 64 bits, rounded up, for the rounding-error bound
    let mut abs_sum = Float::with_val_round(64, a.abs_ref(), Round::Up).0;
    abs_sum.add_assign_round(1u32, Round::Up);
    for k in 1..=kmax {
        b *= &n2;
        b /= k * k;
        a *= &n2;
        a /= k;
        a += &b;
        a /= k;
        u += &a;
        v += &b;
        abs_sum.add_assign_round(&Float::with_val_round(64, a.abs_ref(), Round::Up).0, Round::Up);
    }
    let gamma = Float::with_val(prec, &u / &v);

    // each a_k, b_k carries relative error <= 6k 2^-prec, accumulation adds K more ulps
    let mut ulp = Float::with_val(64, 2);
    ulp.pow_assign_round(1 - prec as i32, Round::Up);
    let mut err_u = Float::with_val(64, &abs_sum);
    err_u *= 7 * kmax + 8;
    err_u *= &ulp;
    // V >= (e^{2N}) / (4 sqrt(pi N)) for the full sum; the partial sum is within e^{-4N} of it.
    // Use the computed V, reduced by one percent, as a safe lower bound.
    let v_low = Float::with_val_round(64, &v * 0.99f64, Round::Down).0;
    let mut err = Float::with_val_round(64, &err_u / &v_low, Round::Up).0;
    err *= 2u32;
    // pi e^{-4N} < 2^{2 - 5.77 N}
    let mut trunc = Float::with_val(64, 2);
    trunc.pow_assign_round(2 - (5.77 * n as f64).floor() as i32, Round::Up);
    err += trunc;
    // final rounding to target + 32 bits, |gamma| < 1
    let mut last = Float::with_val(64, 2);
    last.pow_assign_round(-(target as i32 + 31), Round::Up);
    err += last;

    PrecisionReal::new(Float::with_val(target + 32, gamma), err, digits)
}
