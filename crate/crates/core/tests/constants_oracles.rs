use malmsten::constants::{constant, euler_gamma, ConstantId};
use malmsten::precision::PrecisionReal;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

const PREC: u32 = 400;

// 50 significant digits from an outside reference implementation (Hurwitz-zeta routes for
// beta, numerical differentiation for the derivatives).
const REFERENCE: &[(&str, &str)] = &[
    ("pi", "3.1415926535897932384626433832795028841971693993751"),
    ("gamma", "0.57721566490153286060651209008240243104215933593992"),
    ("ln2", "0.69314718055994530941723212145817656807550013436026"),
    ("lnpi", "1.1447298858494001741434273513530587116472948129153"),
    ("zeta(3)", "1.2020569031595942853997381615114499907649862923405"),
    ("zeta(5)", "1.0369277551433699263313654864570341680570809195019"),
    ("zeta(7)", "1.0083492773819228268397975498497967595998635605652"),
    ("zeta(11)", "1.0004941886041194645587022825264699364686064357582"),
    ("beta(1)", "0.78539816339744830961566084581987572104929234984378"),
    ("beta(2)", "0.91596559417721901505460351493238411077414937428167"),
    ("beta(3)", "0.96894614625936938048363484584691860006954026768391"),
    ("beta(4)", "0.98894455174110533610842263322837782131586088706273"),
    ("beta(6)", "0.99868522221843813544160078786020654967836454612651"),
    ("zeta'(-2)", "-0.030448457058393270780251530471154776647000483544974"),
    ("zeta'(-4)", "0.0079838114502686242806966707987893039052376933622989"),
    ("beta'(-1)", "0.58312180806163756027676891293678983772813230797167"),
    ("eta'(-2)", "0.21313919940875289546176071329808343652900338481482"),
    ("zeta3-over-pi2", "0.1217938282335730831210061218846191065880019341799"),
    ("beta4-over-pi3", "0.031894979263003292591046296366542617573716167682306"),
];

fn parse(s: &str) -> Float {
    Float::with_val(PREC, Float::parse(s).unwrap())
}

/// `|x - want| <= err(x) + slack` and `err(x) <= 10^-digits |want|`.
fn encloses(x: &PrecisionReal, want: &Float, digits: i32, slack: &Float) -> bool {
    let diff = Float::with_val(PREC, x.value() - want).abs();
    let room = Float::with_val(PREC, x.error_bound() + slack);
    let scale = Float::with_val(PREC, want.abs_ref()).max(&Float::with_val(PREC, 1e-3));
    let tight = Float::with_val(PREC, x.error_bound()) <= scale * Float::with_val(PREC, 10).pow(-digits);
    diff <= room && tight
}

#[test]
fn reference_values_at_45_digits() {
    for (id, want) in REFERENCE {
        let want = parse(want);
        // 50 significant digits: half a unit in the 50th place
        let slack = Float::with_val(PREC, want.abs_ref()) * parse("5e-50");
        let v = constant(id.parse::<ConstantId>().unwrap(), 45).unwrap();
        assert!(encloses(&v, &want, 45, &slack), "{id}: {} +- {}", v.to_decimal(50), v.error_string());
    }
}

#[test]
fn gamma_at_many_precisions_agrees_with_mpfr() {
    for digits in [10, 31, 64, 150, 400] {
        let g = euler_gamma(digits);
        let mpfr = Float::with_val(2000, rug::float::Constant::Euler);
        let diff = Float::with_val(2000, g.value() - &mpfr).abs();
        assert!(diff <= *g.error_bound(), "digits {digits}");
    }
}

#[test]
fn rejects_out_of_range() {
    for id in ["zeta(1)", "beta(0)", "zeta'(-3)", "beta'(-2)"] {
        let bad = id.parse::<ConstantId>().map(|c| c.validate());
        assert!(!matches!(bad, Ok(Ok(()))), "{id}");
    }
    assert!(constant(ConstantId::Pi, 5).is_err());
}

/// `sum_{m < terms} (-1)^m / (2m+1)^s` with the alternating-series remainder.
fn beta_direct(s: u32, prec: u32, terms: u32) -> (Float, Float) {
    let mut acc = Float::new(prec);
    for m in 0..terms {
        let t = Float::with_val(prec, Integer::from(2 * m + 1).pow(s)).recip();
        if m % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    let rem = Float::with_val(prec, Integer::from(2 * terms + 1).pow(s)).recip();
    (acc, rem)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zeta_agrees_with_mpfr(s in 2u32..80, digits in 20u32..90) {
        let v = constant(ConstantId::Zeta(s), digits).unwrap();
        let want = Float::with_val(PREC, Float::zeta_u(s));
        prop_assert!(encloses(&v, &want, digits as i32, &parse("1e-110")));
    }

    #[test]
    fn even_beta_agrees_with_direct_sum(half in 5u32..40, digits in 20u32..40) {
        let s = 2 * half;
        // (2N+1)^-s < 10^-(digits+5)
        let terms = (10f64.powf((digits + 5) as f64 / s as f64) / 2.0).ceil() as u32 + 1;
        let (direct, rem) = beta_direct(s, PREC, terms);
        let v = constant(ConstantId::Beta(s), digits).unwrap();
        prop_assert!(encloses(&v, &direct, digits as i32, &rem));
    }
}
