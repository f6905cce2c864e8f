mod common;

use common::*;
use malmsten::exact::numbers::{eulerian_a_row, eulerian_b_row, factorial};
use malmsten::exact::residue::residue_pi_laurent;
use malmsten::exact::{bernoulli, euler_number, series_invert, series_mul, TruncatedSeries};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};

#[test]
fn bernoulli_matches_recurrence() {
    let want = bernoulli_recurrence(30);
    for (n, b) in want.iter().enumerate() {
        assert_eq!(&bernoulli(n as u32), b, "B_{n}");
    }
}

#[test]
fn euler_matches_recurrence() {
    let want = euler_recurrence(30);
    for n in (0..=30).step_by(2) {
        assert_eq!(euler_number(n as u32).unwrap(), want[n], "E_{n}");
    }
    assert!(euler_number(3).is_err());
}

#[test]
fn eulerian_rows_match_recurrences() {
    let a = eulerian_a_recurrence(30);
    let b = eulerian_b_recurrence(30);
    for n in 1..=30u32 {
        assert_eq!(eulerian_a_row(n), a[n as usize], "A row {n}");
        let total: Integer = a[n as usize].iter().sum();
        assert_eq!(total, factorial(n));
    }
    for n in 0..=30u32 {
        assert_eq!(eulerian_b_row(n), b[n as usize], "B row {n}");
        let total: Integer = b[n as usize].iter().sum();
        assert_eq!(total, (Integer::from(1) << n) * factorial(n));
    }
}

#[test]
fn fifty_series_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e12);
    for _ in 0..50 {
        let a = random_series(&mut rng);
        let b = random_series(&mut rng);
        let ab = series_mul(&a, &b);
        let back = series_mul(&ab, &series_invert(&b).unwrap());
        assert!(agree_where_known(&back, &a), "a={a} b={b} back={back}");
        assert!(back.truncation_order() <= a.truncation_order());
        let one = series_mul(&a, &series_invert(&a).unwrap());
        assert!(agree_where_known(&one, &TruncatedSeries::one(one.truncation_order())));
    }
}

#[test]
fn residues_match_contour_integrals() {
    let prec = 256;
    let tol = Float::with_val(prec, Float::parse("1e-25").unwrap());
    for n in 1..=5 {
        for k in 0..=3 {
            for l in [-2, -1, 0, 1, 2] {
                let exact = residue_pi_laurent(n, k, l).to_complex(prec);
                let contour = contour_residue(n, k, l, prec, 192);
                let diff = complex_abs(&(exact.clone() - &contour));
                let size = complex_abs(&exact).max(&Float::with_val(prec, 1));
                assert!(diff <= Float::with_val(prec, &tol * &size), "n={n} k={k} l={l}: {exact} vs {contour}");
            }
        }
    }
}

fn arb_series() -> impl Strategy<Value = TruncatedSeries<Rational>> {
    (-3i32..=3, prop::collection::vec((-40i64..=40, 1i64..=9), 1..8)).prop_filter_map(
        "leading coefficient must be nonzero",
        |(lead, cs)| {
            let coeffs: Vec<Rational> = cs.into_iter().map(|(p, q)| Rational::from((p, q))).collect();
            (coeffs[0] != 0).then(|| TruncatedSeries::new(lead, coeffs))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_of_inverse(a in arb_series()) {
        let twice = series_invert(&series_invert(&a).unwrap()).unwrap();
        prop_assert!(agree_where_known(&twice, &a));
    }

    #[test]
    fn product_commutes(a in arb_series(), b in arb_series()) {
        prop_assert_eq!(series_mul(&a, &b), series_mul(&b, &a));
    }
}
