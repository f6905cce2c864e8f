use malmsten::constants::{constant, ConstantId};
use malmsten::error::Error;
use malmsten::kernels::KernelSpec;
use malmsten::precision::PrecisionReal;
use malmsten::quadrature::{integrate, integrate_fn, residual_upper, verify_identity};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};

fn q(p: i64, d: i64) -> Rational {
    Rational::from((p, d))
}

/// `|a - b| <= err(a) + err(b) + extra`.
fn consistent(a: &PrecisionReal, b: &PrecisionReal, extra: f64) -> bool {
    Float::with_val(64, a.sub(b).value().abs_ref()) <= Float::with_val(64, a.error_bound() + b.error_bound()) + extra
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn polynomials_integrate_exactly(
        coeffs in prop::collection::vec((-30i64..=30, 1i64..=7), 1..9),
        a in -8i64..=4,
        width in 1i64..=6,
    ) {
        let cs: Vec<Rational> = coeffs.iter().map(|&(p, d)| q(p, d)).collect();
        let (lo, hi) = (Rational::from(a), Rational::from(a + width));
        // exact antiderivative
        let anti = |x: &Rational| -> Rational {
            cs.iter().enumerate().map(|(i, c)| (c * x.clone().pow(i as u32 + 1)) / (i as u32 + 1)).sum()
        };
        let exact = anti(&hi) - anti(&lo);
        let f = |x: &Float, _: &Float, _: &Float| {
            let mut acc = Float::new(x.prec());
            for c in cs.iter().rev() {
                acc = acc * x + c;
            }
            acc
        };
        let r = integrate_fn(f, &Float::with_val(64, &lo), &Float::with_val(64, &hi), 30).unwrap();
        let diff = Float::with_val(256, r.value.value() - &exact).abs();
        prop_assert!(diff <= *r.value.error_bound(), "{} vs {}", r.value.to_decimal(35), exact);
        let scale = Float::with_val(64, exact.clone().abs()).max(&Float::with_val(64, 1));
        prop_assert!(*r.value.error_bound() < Float::with_val(64, 1e-29) * scale);
    }
}

/// `sinh(a x) / (x cosh^m x)`, even in `x`, with the removable point at 0 filled in.
fn f5_even(a: u32, m: i32) -> impl Fn(&Float, &Float, &Float) -> Float + Sync {
    move |x: &Float, _: &Float, _: &Float| {
        let p = x.prec();
        if x.is_zero() {
            return Float::with_val(p, a);
        }
        let num = Float::with_val(p, Float::with_val(p, x * a).sinh()) / x;
        num / Float::with_val(p, x.cosh_ref()).pow(m)
    }
}

#[test]
fn half_line_matches_symmetric_truncation() {
    // (k, m): integrand decays like 2^{m-1} e^{-(m-2k-1) x} / x
    for (k, m) in [(0u32, 2i32), (1, 4), (2, 7)] {
        let a = 2 * k + 1;
        let t = 70;
        let half = integrate(&KernelSpec::F5 { k, m: m as u32 }, 30).unwrap().value;
        let full = integrate_fn(f5_even(a, m), &Float::with_val(64, -t), &Float::with_val(64, t), 28).unwrap().value;
        let gap = (m - a as i32) as f64;
        let tail = 2f64.powi(m - 1) * (-gap * t as f64).exp() / (gap * t as f64);
        let halved = full.scale(&q(1, 2));
        let d = Float::with_val(64, half.sub(&halved).value().abs_ref());
        assert!(
            consistent(&half, &halved, tail),
            "k={k} m={m}: diff {d}, bounds {} {} tail {tail:e}",
            half.error_string(),
            halved.error_string()
        );
    }
}

#[test]
fn results_are_deterministic_and_nested() {
    for spec in ["F3:2", "F5:1:4", "F7:2", "F10:2", "F13b:1"] {
        let spec: KernelSpec = spec.parse().unwrap();
        let a = integrate(&spec, 30).unwrap();
        let b = integrate(&spec, 30).unwrap();
        assert_eq!(a.value, b.value, "{spec}");
        assert_eq!(a.nodes_used, b.nodes_used);
        let coarse = integrate(&spec, 15).unwrap();
        assert!(consistent(&a.value, &coarse.value, 0.0), "{spec}");
    }
}

#[test]
fn divergent_kernels_are_refused() {
    for spec in ["trig:sin:2", "trig:cos:8", "F5:2:3", "F6:1:2"] {
        let spec: KernelSpec = spec.parse().unwrap();
        assert!(matches!(integrate(&spec, 20), Err(Error::Divergent(_))), "{spec}");
    }
    assert!(matches!(verify_identity("no-such-identity", 20), Err(Error::UnknownId(_))));
}

#[test]
fn quarter_pi_moment_is_minus_seven_zeta3_over_pi2() {
    // first sine kernel against its closed form, at three precisions
    for digits in [20, 40, 60] {
        let got = integrate(&KernelSpec::F3(1), digits).unwrap().value;
        let want = constant(ConstantId::ZetaOverPi(1), digits + 10).unwrap().scale(&Rational::from(-7));
        let r = residual_upper(&got.sub(&want));
        assert!(r < Float::with_val(64, 10f64.powi(-(digits as i32) + 2)), "digits {digits}: {r}");
    }
}
