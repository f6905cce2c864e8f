use malmsten::exact::GaussianRational;
use malmsten::kernels::{
    eval_integrand, p_poly, p_poly_exact, polylog_neg, polylog_neg_exact, Interval, KernelSpec, Point, Side,
    SingularityClass,
};
use malmsten::precision::PrecisionReal;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

const PREC: u32 = 320;

/// `sum_{k=lo}^{terms} w(k) z^k` and a bound on the dropped tail plus rounding, `|z| <= 1/2`.
fn power_sum(z: &Rational, terms: u32, lo: u32, w: impl Fn(u32) -> Integer) -> (Float, Float) {
    let zf = Float::with_val(PREC, z);
    let mut acc = Float::new(PREC);
    let mut mass = Float::new(PREC);
    for k in lo..=terms {
        let t = Float::with_val(PREC, w(k)) * Float::with_val(PREC, (&zf).pow(k));
        mass += Float::with_val(PREC, t.abs_ref());
        acc += t;
    }
    // ratio of consecutive tail terms stays below 3/4 once w(k+1)/w(k) < 3/2
    let first = Float::with_val(PREC, w(terms + 1)) * Float::with_val(PREC, (&zf).pow(terms + 1)).abs();
    // each term and each addition rounds once; 2^10 > 3 * 600 / 2
    let rounding = mass >> (PREC as i32 - 10);
    (acc, first * 4u32 + rounding)
}

fn small_z() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 121i64..=400).prop_map(|(p, q)| Rational::from((p, q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polylog_two_routes(n in 1u32..=12, z in small_z()) {
        let exact = polylog_neg_exact(n, &GaussianRational::real(z.clone())).unwrap();
        prop_assert_eq!(&exact.im, &Rational::new());
        let (sum, tail) = power_sum(&z, 600, 1, |k| Integer::from(k).pow(n));
        let diff = Float::with_val(PREC, Float::with_val(PREC, &exact.re) - &sum).abs();
        prop_assert!(diff <= tail);
        let approx = polylog_neg(n, &PrecisionReal::from_rational(&z, 60)).unwrap();
        let gap = Float::with_val(PREC, Float::with_val(PREC, &exact.re) - approx.value()).abs();
        prop_assert!(gap <= *approx.error_bound());
    }

    #[test]
    fn odd_power_series_two_routes(n in 0u32..=12, x in small_z()) {
        let exact = p_poly_exact(n, &x).unwrap();
        let (sum, tail) = power_sum(&x, 600, 0, |j| Integer::from(2 * j + 1).pow(n));
        let diff = Float::with_val(PREC, Float::with_val(PREC, &exact) - &sum).abs();
        prop_assert!(diff <= tail);
        let approx = p_poly(n, &PrecisionReal::from_rational(&x, 60)).unwrap();
        let gap = Float::with_val(PREC, Float::with_val(PREC, &exact) - approx.value()).abs();
        prop_assert!(gap <= *approx.error_bound());
    }
}

#[test]
fn f1_is_minus_f7_at_twenty_points() {
    let f1 = KernelSpec::F1;
    let f7 = KernelSpec::F7(1);
    for j in 1..=20 {
        let x = PrecisionReal::from_rational(&Rational::from((j, 21)), 40);
        let a = eval_integrand(&f1, &x, 40).unwrap();
        let b = eval_integrand(&f7, &x, 40).unwrap();
        let sum = a.add(&b);
        let r = Float::with_val(64, sum.value().abs_ref());
        assert!(r <= *sum.error_bound(), "x = {j}/21");
    }
}

fn catalog() -> Vec<KernelSpec> {
    [
        "F1",
        "F2",
        "F3:1",
        "F3:4",
        "F4:1",
        "F4:3",
        "F5:0:2",
        "F5:1:4",
        "F5:2:7",
        "F6:1:3",
        "F6:2:5",
        "F7:1",
        "F7:3",
        "F8:1",
        "F8:3",
        "F9:1",
        "F9:4",
        "F10:1",
        "F10:3",
        "F11a:1",
        "F11a:3",
        "F11b:1",
        "F11b:4",
        "F12:1",
        "F12:3",
        "F13b:1",
        "F13z:2",
        "F14:0",
        "F14:3",
        "F15a:1,0,-2",
        "F15b:3,1",
        "lnln:2:0,1",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

/// Point at distance `d` from one endpoint; for infinite endpoints `d = 1/x`.
fn probe_point(interval: Interval, side: Side, d: &Float) -> Point {
    let p = d.prec();
    let lower = Float::with_val(p, interval.lower());
    match (side, interval.upper(p)) {
        (Side::Lower, upper) => Point {
            x: Float::with_val(p, &lower + d),
            lo: d.clone(),
            hi: upper.map(|u| Float::with_val(p, u - &lower) - d),
            abs_ln: None,
            recip: None,
        },
        (Side::Upper, Some(u)) => Point {
            x: Float::with_val(p, &u - d),
            lo: Float::with_val(p, u - &lower) - d,
            hi: Some(d.clone()),
            abs_ln: None,
            recip: None,
        },
        (Side::Upper, None) => {
            let x = Float::with_val(p, d.recip_ref());
            Point { lo: Float::with_val(p, &x - &lower), x, hi: None, abs_ln: None, recip: Some(d.clone()) }
        }
    }
}

#[test]
fn singularity_classes_hold_between_1e5_and_1e25() {
    for spec in catalog() {
        let ev = spec.evaluator().unwrap();
        let interval = spec.interval();
        for s in spec.singularities() {
            let infinite = s.side == Side::Upper && !interval.is_finite();
            let weighted: Vec<Float> = (5..=25)
                .map(|k| {
                    // infinite ends are probed at x = 2^k
                    let d = if infinite {
                        Float::with_val(PREC, 1) >> k
                    } else {
                        Float::with_val(PREC, Float::parse(format!("1e-{k}")).unwrap())
                    };
                    let v = ev.eval(&probe_point(interval, s.side, &d)).value;
                    assert!(v.is_finite(), "{spec} {:?} at k={k}", s.side);
                    let w = s.class.counter_weight(&d).unwrap();
                    Float::with_val(PREC, v.abs() * w)
                })
                .collect();
            let cap = Float::with_val(PREC, weighted[0].clone().max(&Float::with_val(PREC, 1))) * 100u32;
            for (k, v) in weighted.iter().enumerate() {
                assert!(*v <= cap, "{spec} {:?} ({:?}) grows at k={}: {v}", s.side, s.class, k + 5);
            }
        }
    }
}

#[test]
fn non_integrable_end_is_detected() {
    for spec in ["trig:sin:2", "trig:cos:4", "F5:1:2", "F6:2:3"] {
        let spec: KernelSpec = spec.parse().unwrap();
        assert!(!spec.is_integrable(), "{spec}");
        let upper = spec.singularities()[1];
        assert_eq!(upper.class, SingularityClass::NonIntegrable);
        assert!(upper.class.counter_weight(&Float::with_val(64, 0.5)).is_none());
    }
    // sin(2x)/ln tan x ~ 1/(2d) at pi/4
    let ev = "trig:sin:2".parse::<KernelSpec>().unwrap().evaluator().unwrap();
    for k in [5, 15, 25] {
        let d = Float::with_val(PREC, Float::parse(format!("1e-{k}")).unwrap());
        let v = ev.eval(&probe_point(Interval::QuarterPi, Side::Upper, &d)).value;
        let scaled = Float::with_val(PREC, v.abs() * &d);
        assert!((scaled - 0.5f64).abs() < 1e-3, "k={k}");
    }
}
