//! PSLQ integer-relation search (one-level variant) over certified reals.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{bits_for_digits, format_sig, ten_pow_neg, PrecisionReal};

/// Iteration cap; hitting it means the precision was too low for the height asked.
pub const MAX_ITERATIONS: u64 = 500_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationStatus {
    Found,
    NoneUpToBound,
}

/// Outcome of a relation search.
///
/// `Found`: `coefficients` is primitive with a positive first nonzero entry and
/// `|sum c_i v_i| <= residual bound <= 10^-(digits_used/2)`.
/// `NoneUpToBound`: every relation has Euclidean norm at least `norm_lower_bound`, which exceeds
/// `height_bound * sqrt(n)`, so none has all `|c_i| <= height_bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationResult {
    pub status: RelationStatus,
    #[serde(with = "int_strings")]
    pub coefficients: Vec<Integer>,
    pub height_bound: u64,
    pub digits_used: u32,
    pub residual: PrecisionReal,
    pub norm_lower_bound: Option<String>,
    pub iterations: u64,
}

mod int_strings {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|i| i.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|t| t.parse::<Integer>().map_err(serde::de::Error::custom)).collect()
    }
}

/// Smallest `digits` for which a height-`h` search over `n` values is meaningful.
pub fn digits_needed(n: usize, max_height: u64) -> u32 {
    ((n as f64 - 1.0) * (max_height.max(2) as f64).log10()).ceil() as u32 + 5
}

/// Largest height `digits` supports for `n` values (inverse of `digits_needed`).
pub fn height_for_digits(n: usize, digits: u32) -> u64 {
    let e = (digits.saturating_sub(5)) as f64 / (n as f64 - 1.0).max(1.0);
    10f64.powf(e.min(18.0)).floor() as u64
}

/// `sum c_i v_i` with propagated bounds.
pub fn relation_residual(c: &[Integer], values: &[PrecisionReal], digits: u32) -> PrecisionReal {
    let mut acc = PrecisionReal::zero(digits);
    for (ci, v) in c.iter().zip(values) {
        if *ci != 0 {
            acc = acc.add(&v.scale(&rug::Rational::from(ci)));
        }
    }
    acc
}

fn primitive(mut c: Vec<Integer>) -> Vec<Integer> {
    let g = c.iter().fold(Integer::new(), |g, x| g.gcd(x));
    if g > 1 {
        for x in &mut c {
            *x /= &g;
        }
    }
    if c.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        for x in &mut c {
            *x = Integer::from(-&*x);
        }
    }
    c
}

/// Integer relation among `values` with every `|c_i| <= max_height`, or a certificate of absence.
pub fn pslq(values: &[PrecisionReal], digits: u32, max_height: u64) -> Result<RelationResult> {
    let n = values.len();
    if n < 2 {
        return Err(Error::Domain("pslq needs at least two values".into()));
    }
    let need = digits_needed(n, max_height);
    if digits < need {
        return Err(Error::InsufficientPrecision(format!(
            "height {max_height} over {n} values needs at least {need} digits; rerun with --digits {need}"
        )));
    }
    let limit = ten_pow_neg(digits);
    if let Some(v) = values.iter().find(|v| *v.error_bound() > limit) {
        return Err(Error::InsufficientPrecision(format!(
            "input {} carries error {} above 10^-{digits}",
            v.to_decimal(12),
            v.error_string()
        )));
    }
    let found = |c: Vec<Integer>, iterations| {
        let c = primitive(c);
        let residual = relation_residual(&c, values, digits);
        RelationResult {
            status: RelationStatus::Found,
            coefficients: c,
            height_bound: max_height,
            digits_used: digits,
            residual,
            norm_lower_bound: None,
            iterations,
        }
    };
    // a value indistinguishable from zero is its own relation
    for (i, v) in values.iter().enumerate() {
        let mag = Float::with_val(64, v.value().abs_ref());
        if mag <= *v.error_bound() {
            let mut c = vec![Integer::new(); n];
            c[i] = Integer::from(1);
            return Ok(found(c, 0));
        }
    }
    let prec = bits_for_digits(digits) + 32;
    let x: Vec<Float> = values.iter().map(|v| Float::with_val(prec, v.value())).collect();
    let err_max = values.iter().map(|v| v.error_bound().clone()).fold(Float::new(64), |a, b| a.max(&b));
    let mut engine = Engine::new(&x, prec);
    let height = Float::with_val(64, max_height) * Float::with_val(64, n as u32).sqrt();
    let cap = Float::with_val(64, 10u32).pow(digits / 2);
    let accept = |c: &[Integer]| {
        let r = relation_residual(c, values, digits);
        let mut up = Float::with_val_round(64, r.value().abs_ref(), Round::Up).0;
        up += r.error_bound();
        up <= ten_pow_neg(digits / 2)
    };
    let mut iterations = 0u64;
    loop {
        if let Some(c) = engine.candidate(&err_max) {
            if c.iter().all(|v| v.clone().abs() <= max_height) && accept(&c) {
                return Ok(found(c, iterations));
            }
        }
        let bound = engine.norm_bound();
        if bound > height {
            let residual = PrecisionReal::zero(digits);
            return Ok(RelationResult {
                status: RelationStatus::NoneUpToBound,
                coefficients: Vec::new(),
                height_bound: max_height,
                digits_used: digits,
                residual,
                norm_lower_bound: Some(format_sig(&bound, 6)),
                iterations,
            });
        }
        if iterations >= MAX_ITERATIONS || engine.b_max() > cap {
            return Err(Error::InsufficientPrecision(format!(
                "pslq ran out of precision after {iterations} iterations (norm bound {}); raise --digits",
                format_sig(&bound, 3)
            )));
        }
        engine.step();
        iterations += 1;
    }
}

/// State of the iteration: `y = x B`, `H` lower trapezoidal, `B` unimodular.
struct Engine {
    n: usize,
    prec: u32,
    gamma_pows: Vec<Float>,
    y: Vec<Float>,
    h: Vec<Vec<Float>>,
    b: Vec<Vec<Integer>>,
    x_norm: Float,
}

impl Engine {
    fn new(x: &[Float], prec: u32) -> Engine {
        let n = x.len();
        // s_k = |x_k..x_{n-1}|
        let mut s = vec![Float::new(prec); n];
        let mut acc = Float::new(prec);
        for k in (0..n).rev() {
            acc += Float::with_val(prec, x[k].square_ref());
            s[k] = Float::with_val(prec, acc.sqrt_ref());
        }
        let x_norm = s[0].clone();
        let y: Vec<Float> = x.iter().map(|v| Float::with_val(prec, v / &x_norm)).collect();
        let s: Vec<Float> = s.iter().map(|v| Float::with_val(prec, v / &x_norm)).collect();
        let mut h = vec![vec![Float::new(prec); n - 1]; n];
        for i in 0..n {
            for j in 0..(n - 1).min(i + 1) {
                h[i][j] = if i == j {
                    Float::with_val(prec, &s[j + 1] / &s[j])
                } else {
                    let den = Float::with_val(prec, &s[j] * &s[j + 1]);
                    -Float::with_val(prec, &y[i] * &y[j]) / den
                };
            }
        }
        let b = (0..n).map(|i| (0..n).map(|j| Integer::from((i == j) as u32)).collect()).collect();
        let gamma = Float::with_val(prec, 4u32) / 3u32;
        let gamma = gamma.sqrt();
        let mut gamma_pows = Vec::with_capacity(n);
        let mut g = gamma.clone();
        for _ in 0..n {
            gamma_pows.push(g.clone());
            g *= &gamma;
        }
        let mut e = Engine { n, prec, gamma_pows, y, h, b, x_norm };
        e.reduce(1, n, |i| i);
        e
    }

    /// Hermite reduction of rows `from..to`, columns `j < cols(i)` in decreasing order.
    fn reduce(&mut self, from: usize, to: usize, cols: impl Fn(usize) -> usize) {
        let p = self.prec;
        for i in from..to {
            for j in (0..cols(i).min(i)).rev() {
                if self.h[j][j].is_zero() {
                    continue;
                }
                let q = Float::with_val(p, &self.h[i][j] / &self.h[j][j]).round();
                let Some(t) = q.to_integer() else { continue };
                if t == 0 {
                    continue;
                }
                let dy = Float::with_val(p, &self.y[i] * &t);
                self.y[j] += dy;
                for k in 0..=j.min(self.n - 2) {
                    let d = Float::with_val(p, &self.h[j][k] * &t);
                    self.h[i][k] -= d;
                }
                for row in self.b.iter_mut() {
                    let d = Integer::from(&row[i] * &t);
                    row[j] += d;
                }
            }
        }
    }

    fn step(&mut self) {
        let n = self.n;
        let p = self.prec;
        let mut m = 0;
        let mut best = Float::with_val(p, -1);
        for i in 0..n - 1 {
            let v = Float::with_val(p, self.h[i][i].abs_ref()) * &self.gamma_pows[i];
            if v > best {
                best = v;
                m = i;
            }
        }
        self.y.swap(m, m + 1);
        self.h.swap(m, m + 1);
        for row in self.b.iter_mut() {
            row.swap(m, m + 1);
        }
        if m < n - 2 {
            let a = self.h[m][m].clone();
            let c = self.h[m][m + 1].clone();
            let t0 = Float::with_val(p, Float::with_val(p, a.square_ref()) + Float::with_val(p, c.square_ref())).sqrt();
            let t1 = Float::with_val(p, &a / &t0);
            let t2 = Float::with_val(p, &c / &t0);
            for i in m..n {
                let t3 = self.h[i][m].clone();
                let t4 = self.h[i][m + 1].clone();
                self.h[i][m] = Float::with_val(p, &t1 * &t3) + Float::with_val(p, &t2 * &t4);
                self.h[i][m + 1] = Float::with_val(p, &t1 * &t4) - Float::with_val(p, &t2 * &t3);
            }
        }
        self.reduce(m + 1, n, |i| (i - 1).min(m + 1) + 1);
    }

    /// Lower bound on the norm of any relation: `1 / max |H_jj|`.
    fn norm_bound(&self) -> Float {
        let mut mx = Float::new(64);
        for j in 0..self.n - 1 {
            let v = Float::with_val_round(64, self.h[j][j].abs_ref(), Round::Up).0;
            if v > mx {
                mx = v;
            }
        }
        if mx.is_zero() {
            return Float::with_val(64, rug::float::Special::Infinity);
        }
        Float::with_val_round(64, mx.recip_ref(), Round::Down).0
    }

    fn b_max(&self) -> Float {
        let mut mx = Integer::new();
        for row in &self.b {
            for v in row {
                if v.clone().abs() > mx {
                    mx = v.clone().abs();
                }
            }
        }
        Float::with_val(64, &mx)
    }

    /// Column of `B` whose `y` entry is within the noise of the inputs.
    fn candidate(&self, err_max: &Float) -> Option<Vec<Integer>> {
        let p = self.prec;
        let mut best: Option<(Float, usize)> = None;
        for j in 0..self.n {
            let col_l1 = self.b.iter().fold(Integer::new(), |a, row| a + row[j].clone().abs());
            // noise in x propagated through column j, plus accumulated rounding in y_j
            let mut tol = Float::with_val(64, &col_l1) * err_max / &self.x_norm;
            let round = Float::with_val(64, &col_l1) >> (p as i32 - 24);
            tol += round;
            tol *= 4u32;
            let yj = Float::with_val(64, self.y[j].abs_ref());
            if yj <= tol && best.as_ref().is_none_or(|(b, _)| yj < *b) {
                best = Some((yj, j));
            }
        }
        best.map(|(_, j)| self.b.iter().map(|row| row[j].clone()).collect())
    }
}
