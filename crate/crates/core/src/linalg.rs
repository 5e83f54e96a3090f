//! Dense matrices and univariate polynomials over the rationals.
//!
//! Vectors are rows; a matrix `M` acts on a row vector `v` as `v * M`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactseries::ExactRational;

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactRational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "RatMatrix{:?}", rows)
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![ExactRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ExactRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactRational>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        RatMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| ExactRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[ExactRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<ExactRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[ExactRational]) -> Vec<ExactRational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![ExactRational::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = &self[(i, j)];
                if !b.is_zero() {
                    *o += x * b;
                }
            }
        }
        out
    }

    /// Reduced row-echelon form and the pivot columns. Zero rows are dropped.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut rows = self.row_vecs();
        let pivots = rref_rows(&mut rows, self.cols);
        (Self::from_rows(rows, self.cols), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{ v : v * M = 0 }`, in reduced echelon form.
    pub fn left_kernel(&self) -> Vec<Vec<ExactRational>> {
        let t = self.transpose();
        let (r, pivots) = t.rref();
        let n = self.rows;
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![ExactRational::zero(); n];
            v[f] = ExactRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            basis.push(v);
        }
        rref_rows(&mut basis, n);
        basis
    }

    pub fn trace(&self) -> ExactRational {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .fold(ExactRational::zero(), |a, b| a + b)
    }

    /// Characteristic polynomial `det(x I - M)` by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> RatPoly {
        assert!(self.is_square(), "charpoly needs a square matrix");
        let n = self.rows;
        let mut coeffs = vec![ExactRational::zero(); n + 1];
        coeffs[n] = ExactRational::one();
        let mut m_k = Self::zeros(n, n);
        let ident = Self::identity(n);
        for k in 1..=n {
            m_k = self.mul(&m_k).add(&ident.scale(&coeffs[n - k + 1]));
            let am = self.mul(&m_k);
            coeffs[n - k] = -am.trace() / ExactRational::from_integer(BigInt::from(k));
        }
        RatPoly::new(coeffs)
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &RatPoly) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        let ident = Self::identity(n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&ident.scale(c));
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = ExactRational;
    fn index(&self, (i, j): (usize, usize)) -> &ExactRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ExactRational {
        &mut self.data[i * self.cols + j]
    }
}

/// In-place reduced row echelon form on row vectors of length `cols`.
/// Pivots are chosen left to right; zero rows are removed.
pub fn rref_rows(rows: &mut Vec<Vec<ExactRational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatPoly {
    coeffs: Vec<ExactRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(
            c.iter()
                .map(|&x| ExactRational::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn one() -> Self {
        Self::new(vec![ExactRational::one()])
    }

    /// `x - r`
    pub fn linear_root(r: &ExactRational) -> Self {
        Self::new(vec![-r.clone(), ExactRational::one()])
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> ExactRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(ExactRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![ExactRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading();
        if rem.len() <= dd {
            return (Self::new(vec![]), self.clone());
        }
        let mut quot = vec![ExactRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| acc * x + c)
    }

    /// Integer roots `r` with `|r| <= bound`, ascending, each listed once.
    /// Uses the rational root test on the integer-scaled polynomial after
    /// removing a power of `x`.
    pub fn integer_roots(&self, bound: &BigInt) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut roots = Vec::new();
        let first_nonzero = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if first_nonzero > 0 {
            roots.push(BigInt::zero());
        }
        let tail = RatPoly::new(self.coeffs[first_nonzero..].to_vec());
        let denom = tail
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let c0 = (&tail.coeffs[0] * ExactRational::from_integer(denom)).to_integer();
        let c0 = c0.abs();
        let mut r = BigInt::one();
        while &r <= bound && r <= c0 {
            if (&c0 % &r).is_zero() {
                for cand in [r.clone(), -r.clone()] {
                    if tail
                        .eval(&ExactRational::from_integer(cand.clone()))
                        .is_zero()
                    {
                        roots.push(cand);
                    }
                }
            }
            r += 1;
        }
        roots.sort();
        roots
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{}", a)?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{}*x", a)?,
                (_, true) => write!(f, "x^{}", i)?,
                (_, false) => write!(f, "{}*x^{}", a, i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> ExactRational {
        ExactRational::from_integer(x.into())
    }

    #[test]
    fn charpoly_of_small_matrix() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let m = RatMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        assert_eq!(m.charpoly(), RatPoly::from_i64(&[3, -4, 1]));
        assert_eq!(
            m.charpoly().integer_roots(&BigInt::from(10)),
            vec![BigInt::from(1), BigInt::from(3)]
        );
    }

    #[test]
    fn cayley_hamilton() {
        let m = RatMatrix::from_i64(&[&[1, 2, 0], &[0, -3, 5], &[7, 1, 1]]);
        let p = m.charpoly();
        assert_eq!(m.eval_poly(&p), RatMatrix::zeros(3, 3));
    }

    #[test]
    fn left_kernel_annihilates() {
        let m = RatMatrix::from_i64(&[&[1, 2], &[2, 4], &[0, 1]]);
        let k = m.left_kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply_row(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn poly_division_and_gcd() {
        let a = RatPoly::from_i64(&[-1, 0, 1]); // x^2 - 1
        let b = RatPoly::from_i64(&[1, 1]); // x + 1
        let (q, rem) = a.div_rem(&b);
        assert_eq!(q, RatPoly::from_i64(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(
            a.gcd(&RatPoly::from_i64(&[-1, 1])),
            RatPoly::from_i64(&[-1, 1])
        );
        assert_eq!(b.gcd(&RatPoly::from_i64(&[-1, 1])), RatPoly::one());
        assert_eq!(a.eval(&r(3)), r(8));
    }

    #[test]
    fn rref_drops_dependent_rows() {
        let m = RatMatrix::from_i64(&[&[0, 2, 4], &[0, 1, 2], &[1, 0, 1]]);
        let (e, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(e, RatMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 2]]));
    }
}
