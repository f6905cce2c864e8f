//! Oracles shared by the integration tests. Each one reaches its answer by a route that
//! the library does not use.
#![allow(dead_code)]

use malmsten::exact::TruncatedSeries;
use malmsten::precision::PrecisionReal;
use malmsten::reconstruct::{pslq, RelationStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

/// `B_0..=B_max` from `sum_{k<=n} C(n+1,k) B_k = 0`.
pub fn bernoulli_recurrence(max: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(1)];
    for n in 1..=max {
        let mut s = Rational::new();
        for (k, bk) in b.iter().enumerate() {
            s += Rational::from(Integer::from(Integer::binomial_u(n as u32 + 1, k as u32))) * bk;
        }
        b.push(-s / Rational::from(n as u32 + 1));
    }
    b
}

/// `E_0..=E_max` from `sech x cosh x = 1`: `sum_{k even <= n} C(n,k) E_k = 0` for even `n > 0`.
pub fn euler_recurrence(max: usize) -> Vec<Integer> {
    let mut e = vec![Integer::from(1)];
    for n in 1..=max {
        if n % 2 == 1 {
            e.push(Integer::new());
            continue;
        }
        let mut s = Integer::new();
        for k in (0..n).step_by(2) {
            s += Integer::from(Integer::binomial_u(n as u32, k as u32)) * &e[k];
        }
        e.push(-s);
    }
    e
}

/// Type A rows `1..=max` from `A(n,k) = (k+1) A(n-1,k) + (n-k) A(n-1,k-1)`.
pub fn eulerian_a_recurrence(max: usize) -> Vec<Vec<Integer>> {
    let mut rows: Vec<Vec<Integer>> = vec![vec![], vec![Integer::from(1)]];
    for n in 2..=max {
        let prev = &rows[n - 1];
        let at = |k: isize| if k < 0 || k as usize >= prev.len() { Integer::new() } else { prev[k as usize].clone() };
        let row =
            (0..n as isize).map(|k| Integer::from(k + 1) * at(k) + Integer::from(n as isize - k) * at(k - 1)).collect();
        rows.push(row);
    }
    rows
}

/// Type B rows `0..=max` from `B(n,k) = (2k+1) B(n-1,k) + (2n-2k+1) B(n-1,k-1)`.
pub fn eulerian_b_recurrence(max: usize) -> Vec<Vec<Integer>> {
    let mut rows: Vec<Vec<Integer>> = vec![vec![Integer::from(1)]];
    for n in 1..=max {
        let prev = &rows[n - 1];
        let at = |k: isize| if k < 0 || k as usize >= prev.len() { Integer::new() } else { prev[k as usize].clone() };
        let row = (0..=n as isize)
            .map(|k| Integer::from(2 * k + 1) * at(k) + Integer::from(2 * (n as isize - k) + 1) * at(k - 1))
            .collect();
        rows.push(row);
    }
    rows
}

/// Residue of `sinh((2k+1)z) / (z cosh^n z)` at `(2l+1) i pi / 2` by the trapezoid rule on a
/// circle of radius 1/2. The nearest other singularity is at distance `pi/2`, so the rule
/// converges like `(1/pi)^points`.
pub fn contour_residue(n: u32, k: u32, l: i64, prec: u32, points: u32) -> Complex {
    let pi = Float::with_val(prec, Constant::Pi);
    let centre = Complex::with_val(prec, (Float::new(prec), Float::with_val(prec, &pi * (2 * l + 1)) / 2u32));
    let r = Float::with_val(prec, 0.5);
    let mut acc = Complex::new(prec);
    for j in 0..points {
        let theta = Float::with_val(prec, &pi * (2 * j)) / points;
        let e =
            Complex::with_val(prec, (Float::with_val(prec, theta.cos_ref()), Float::with_val(prec, theta.sin_ref())));
        let dz = Complex::with_val(prec, &e * &r);
        let z = Complex::with_val(prec, &centre + &dz);
        let num = Complex::with_val(prec, Complex::with_val(prec, &z * (2 * k + 1)).sinh());
        let ch = Complex::with_val(prec, z.cosh_ref());
        let den = Complex::with_val(prec, &z * Complex::with_val(prec, ch.pow(n)));
        acc += Complex::with_val(prec, num / den) * dz;
    }
    acc / points
}

pub fn complex_abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from((rng.random_range(-50i64..=50), rng.random_range(1i64..=12)))
}

/// Random series with a nonzero leading coefficient.
pub fn random_series(rng: &mut ChaCha8Rng) -> TruncatedSeries<Rational> {
    let lead = rng.random_range(-3..=3);
    let len = rng.random_range(1..=9);
    let mut coeffs: Vec<Rational> = (0..len).map(|_| small_rational(rng)).collect();
    while coeffs[0] == 0 {
        coeffs[0] = small_rational(rng);
    }
    TruncatedSeries::new(lead, coeffs)
}

/// Every order both series know agrees.
pub fn agree_where_known(a: &TruncatedSeries<Rational>, b: &TruncatedSeries<Rational>) -> bool {
    let lo = a.leading_order().min(b.leading_order());
    let hi = a.truncation_order().min(b.truncation_order());
    (lo..=hi).all(|k| a.coeff(k) == b.coeff(k))
}

/// A random real in [1, 2) with `bits` random bits.
pub fn random_real(rng: &mut ChaCha8Rng, bits: u32) -> Float {
    let mut x = Float::with_val(bits + 64, 1);
    let mut scale = Float::with_val(bits + 64, 1);
    for _ in 0..bits.div_ceil(64) {
        scale >>= 64;
        x += Float::with_val(bits + 64, &scale * rng.random::<u64>());
    }
    x
}

pub struct Planted {
    pub values: Vec<PrecisionReal>,
    pub relation: Vec<Integer>,
}

/// `size` values obeying one random relation with entries in `-bound..=bound`; the last
/// coefficient is nonzero and the others are random.
pub fn planted_relation(rng: &mut ChaCha8Rng, size: usize, bound: i64, digits: u32) -> Planted {
    let prec = malmsten::precision::bits_for_digits(digits) + 32;
    let mut c: Vec<i64> = (0..size).map(|_| rng.random_range(-bound..=bound)).collect();
    while c[size - 1] == 0 {
        c[size - 1] = rng.random_range(-bound..=bound);
    }
    let head: Vec<Float> = (0..size - 1).map(|_| random_real(rng, prec)).collect();
    let mut sum = Float::new(prec + 128);
    for (cj, vj) in c.iter().zip(&head) {
        sum += Float::with_val(prec + 128, vj * *cj);
    }
    let last = Float::with_val(prec, -sum / c[size - 1]);
    let values = head
        .into_iter()
        .map(|v| PrecisionReal::rounded(Float::with_val(prec, v), digits))
        .chain(std::iter::once(PrecisionReal::rounded(last, digits)))
        .collect();
    Planted { values, relation: primitive(c.into_iter().map(Integer::from).collect()) }
}

/// Divide out the content and make the first nonzero entry positive.
pub fn primitive(mut c: Vec<Integer>) -> Vec<Integer> {
    let g = c.iter().fold(Integer::new(), |g, x| g.gcd(x));
    if g != 0 {
        for x in &mut c {
            *x /= &g;
        }
    }
    if c.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        for x in &mut c {
            *x = -x.clone();
        }
    }
    c
}

/// Run `trials` planted instances of sizes 3..=6 at `digits`; returns how many PSLQ found.
pub fn planted_sweep(seed: u64, trials: usize, digits: u32) -> (usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    let mut misses = Vec::new();
    for t in 0..trials {
        let size = 3 + t % 4;
        let p = planted_relation(&mut rng, size, 12, digits);
        match pslq(&p.values, digits, 1000) {
            Ok(r) if r.status == RelationStatus::Found && r.coefficients == p.relation => found += 1,
            other => misses.push(format!("trial {t}: planted {:?}, got {other:?}", p.relation)),
        }
    }
    (found, misses)
}

/// Textbook LLL with exact rational Gram-Schmidt, `delta = 3/4`. Fine for dimension <= 6.
pub fn lll(mut b: Vec<Vec<Integer>>) -> Vec<Vec<Integer>> {
    let n = b.len();
    let gso = |b: &[Vec<Integer>]| -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
        let mut star: Vec<Vec<Rational>> = Vec::new();
        let mut mu = vec![vec![Rational::new(); n]; n];
        for i in 0..n {
            let mut v: Vec<Rational> = b[i].iter().map(Rational::from).collect();
            for j in 0..i {
                let num: Rational = b[i].iter().zip(&star[j]).map(|(a, s)| Rational::from(a * s)).sum();
                let den: Rational = star[j].iter().map(|s| Rational::from(s * s)).sum();
                mu[i][j] = num / den;
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= Rational::from(&mu[i][j] * sk);
                }
            }
            star.push(v);
        }
        (star, mu)
    };
    let norm2 = |v: &[Rational]| -> Rational { v.iter().map(|s| Rational::from(s * s)).sum() };
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (_, mu) = gso(&b);
            let q = mu[k][j].clone().round();
            if q != 0 {
                let q = q.numer().clone();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= Integer::from(&q * y);
                }
            }
        }
        let (star, mu) = gso(&b);
        let lhs = norm2(&star[k]);
        let rhs = (Rational::from((3, 4)) - Rational::from(&mu[k][k - 1] * &mu[k][k - 1])) * norm2(&star[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Shortest LLL vector of `[e_i | round(2^scale x_i)]`, projected to its first `n` entries.
pub fn lll_relation(values: &[Float], scale: u32) -> Vec<Integer> {
    let n = values.len();
    let basis = (0..n)
        .map(|i| {
            let mut row = vec![Integer::new(); n + 1];
            row[i] = Integer::from(1);
            let big = Float::with_val(values[i].prec() + scale, &values[i]) << scale as i32;
            row[n] = big.round().to_integer().expect("finite");
            row
        })
        .collect();
    let reduced = lll(basis);
    primitive(reduced[0][..n].to_vec())
}
