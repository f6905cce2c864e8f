use std::fmt;

use rug::Rational;

use crate::error::{Error, Result};

/// Row-major rectangular matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Domain(format!(
                "a {rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    /// Build from rows; ragged input is padded with zeros to the longest row.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for mut r in rows {
            r.resize(cols, Rational::new());
            entries.extend(r);
        }
        Self::new(n, cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from(1));
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Rational::new(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, o: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != o.rows {
            return Err(Error::Domain(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if *a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = Rational::from(a * o.get(k, j));
                    out.entries[i * o.cols + j] += v;
                }
            }
        }
        Ok(out)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| *self.get(i, j) == 0))
    }

    fn check_lower_triangular(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::Domain("triangular solve needs a square matrix".into()));
        }
        if !self.is_lower_triangular() {
            return Err(Error::Domain("matrix is not lower triangular".into()));
        }
        if let Some(i) = (0..self.rows).find(|&i| *self.get(i, i) == 0) {
            return Err(Error::Singular(format!("zero diagonal entry at row {}", i + 1)));
        }
        Ok(())
    }

    /// Solve `M x = b` for lower-triangular `M` with nonzero diagonal.
    pub fn forward_substitute(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        self.check_lower_triangular()?;
        if b.len() != self.rows {
            return Err(Error::Domain("right-hand side has the wrong length".into()));
        }
        let mut x: Vec<Rational> = Vec::with_capacity(self.rows);
        for (i, bi) in b.iter().enumerate() {
            let mut acc = bi.clone();
            for (j, xj) in x.iter().enumerate() {
                acc -= Rational::from(self.get(i, j) * xj);
            }
            x.push(acc / self.get(i, i));
        }
        Ok(x)
    }

    /// Full inverse of a lower-triangular matrix; the result is lower triangular.
    pub fn lower_triangular_inverse(&self) -> Result<RationalMatrix> {
        self.check_lower_triangular()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            let d = self.get(i, i).clone();
            inv.set(i, i, d.clone().recip());
            for j in 0..i {
                let mut acc = Rational::new();
                for k in j..i {
                    acc += Rational::from(self.get(i, k) * inv.get(k, j));
                }
                inv.set(i, j, -acc / &d);
            }
        }
        Ok(inv)
    }
}

/// Given rows `I_n = sum_{k<=n} x_{k,n} J_k` (row `n-1` of `m` holds `x_{1..n,n}`),
/// return `y_{1..n,n}` with `J_n = sum_{k<=n} y_{k,n} I_k`.
pub fn triangular_invert(m: &RationalMatrix, rhs_index: usize) -> Result<Vec<Rational>> {
    if rhs_index == 0 || rhs_index > m.rows() {
        return Err(Error::Domain(format!("row index {rhs_index} outside 1..={}", m.rows())));
    }
    let inv = m.lower_triangular_inverse()?;
    Ok(inv.row(rhs_index - 1)[..rhs_index].to_vec())
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn one_by_one() {
        let m = RationalMatrix::from_rows(vec![vec![q(-7, 1)]]).unwrap();
        assert_eq!(triangular_invert(&m, 1).unwrap(), vec![q(-1, 7)]);
    }

    #[test]
    fn two_by_two_from_the_sine_table() {
        let m = RationalMatrix::from_rows(vec![vec![q(-7, 1)], vec![q(-14, 3), q(124, 1)]]).unwrap();
        assert_eq!(triangular_invert(&m, 2).unwrap(), vec![q(-1, 186), q(1, 124)]);
    }

    #[test]
    fn singular_and_shape_errors() {
        let m = RationalMatrix::from_rows(vec![vec![q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert!(matches!(triangular_invert(&m, 2), Err(Error::Singular(_))));
        let upper = RationalMatrix::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        assert!(matches!(upper.lower_triangular_inverse(), Err(Error::Domain(_))));
        assert!(RationalMatrix::new(2, 2, vec![q(1, 1)]).is_err());
    }
}
