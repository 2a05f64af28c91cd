//! Exact truncated power series and series matrices over `Q`.
//!
//! The coordinate matrices of the canonical bases have rational
//! coefficients independent of `p`.  Building them exactly and converting
//! to p-adic numbers once keeps the only precision loss at the conversion.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::PAdic;
use crate::series::{Mat, SeriesMatrix, TruncSeries};

/// Exact rationals.
pub type Q = BigRational;

/// Converts a machine rational.
pub fn q(r: &Ratio<i64>) -> Q {
    Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// The integer `n` as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A power series over `Q` modulo `z^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Q>,
}

impl QSeries {
    pub fn new(coeffs: Vec<Q>) -> Self {
        QSeries { coeffs }
    }

    pub fn zero(terms: usize) -> Self {
        QSeries { coeffs: vec![Q::zero(); terms] }
    }

    pub fn constant(c: Q, terms: usize) -> Self {
        let mut s = Self::zero(terms);
        if terms > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(terms: usize) -> Self {
        Self::constant(Q::one(), terms)
    }

    /// `c0 + c1 z` truncated.
    pub fn linear(c0: Q, c1: Q, terms: usize) -> Self {
        let mut s = Self::constant(c0, terms);
        if terms > 1 {
            s.coeffs[1] = c1;
        }
        s
    }

    /// `1/(1 − z) = Σ z^i`.
    pub fn geometric(terms: usize) -> Self {
        QSeries { coeffs: vec![Q::one(); terms] }
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, terms: usize) -> Self {
        QSeries { coeffs: (0..terms).map(|i| self.coeff(i)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let t = self.terms().min(o.terms());
        QSeries { coeffs: (0..t).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let t = self.terms().min(o.terms());
        QSeries { coeffs: (0..t).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect() }
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let t = self.terms().min(o.terms());
        let mut out = vec![Q::zero(); t];
        for (i, a) in self.coeffs.iter().take(t).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(t - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let t = self.terms();
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        let inv0 = c0.recip();
        let mut out: Vec<Q> = Vec::with_capacity(t);
        for k in 0..t {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut acc = Q::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out.push(-acc * &inv0);
        }
        Ok(QSeries { coeffs: out })
    }

    /// `D = z d/dz`.
    pub fn euler_d(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().enumerate().map(|(i, c)| c * qi(i as i64)).collect() }
    }

    /// Multiplies by `z^k` (dropping the overflow).
    pub fn shift(&self, k: usize) -> Self {
        let t = self.terms();
        QSeries { coeffs: (0..t).map(|i| if i < k { Q::zero() } else { self.coeffs[i - k].clone() }).collect() }
    }

    /// Coefficients as p-adic numbers with `prec` significant digits.
    pub fn to_padic(&self, p: u64, prec: u32) -> Result<TruncSeries<PAdic>> {
        let c = self.coeffs.iter().map(|x| PAdic::from_big_rational(p, x, prec)).collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries::new(c))
    }

    /// Smallest p-adic valuation among the nonzero coefficients.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| vp_big(c.numer(), p) - vp_big(c.denom(), p))
            .min()
    }
}

fn vp_big(n: &BigInt, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0;
    while !u.is_zero() && (&u % &pb).is_zero() {
        u /= &pb;
        v += 1;
    }
    v
}

/// An `n × n` matrix of [`QSeries`], stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    terms: usize,
    entries: Vec<QSeries>,
}

impl QMatrix {
    pub fn from_fn(n: usize, terms: usize, f: impl Fn(usize, usize) -> QSeries) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j).truncate(terms));
            }
        }
        QMatrix { n, terms, entries }
    }

    /// The matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<QSeries>], terms: usize) -> Self {
        let n = cols.len();
        Self::from_fn(n, terms, |i, j| cols[j][i].clone())
    }

    pub fn identity(n: usize, terms: usize) -> Self {
        Self::from_fn(n, terms, |i, j| if i == j { QSeries::one(terms) } else { QSeries::zero(terms) })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn get(&self, i: usize, j: usize) -> &QSeries {
        &self.entries[i * self.n + j]
    }

    pub fn column(&self, j: usize) -> Vec<QSeries> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.n, self.terms, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.n, self.terms, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, self.terms.min(o.terms), |i, j| {
            let mut acc = QSeries::zero(self.terms.min(o.terms));
            for k in 0..n {
                acc = acc.add(&self.get(i, k).mul(o.get(k, j)));
            }
            acc
        })
    }

    /// Applies the matrix to a column vector of series.
    pub fn mul_vec(&self, v: &[QSeries]) -> Vec<QSeries> {
        (0..self.n)
            .map(|i| {
                let mut acc = QSeries::zero(self.terms);
                for (k, vk) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, k).mul(vk));
                }
                acc
            })
            .collect()
    }

    pub fn euler_d(&self) -> Self {
        Self::from_fn(self.n, self.terms, |i, j| self.get(i, j).euler_d())
    }

    /// The constant term as a dense rational matrix.
    pub fn constant_term(&self) -> Vec<Vec<Q>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).coeff(0)).collect()).collect()
    }

    /// The `k`-th coefficient matrix.
    pub fn coeff(&self, k: usize) -> Vec<Vec<Q>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).coeff(k)).collect()).collect()
    }

    /// Inverse by the coefficient recursion `X_k = −M_0^{-1} Σ_{i≥1} M_i X_{k−i}`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let m0inv = dense_inverse(&self.constant_term()).ok_or(Error::SingularBasis)?;
        let mut xs: Vec<Vec<Vec<Q>>> = vec![m0inv.clone()];
        let ms: Vec<Vec<Vec<Q>>> = (0..self.terms).map(|k| self.coeff(k)).collect();
        for k in 1..self.terms {
            let mut acc = vec![vec![Q::zero(); n]; n];
            for i in 1..=k {
                let prod = dense_mul(&ms[i], &xs[k - i]);
                for r in 0..n {
                    for c in 0..n {
                        acc[r][c] += &prod[r][c];
                    }
                }
            }
            let xk = dense_mul(&m0inv, &acc);
            xs.push(xk.into_iter().map(|row| row.into_iter().map(|x| -x).collect()).collect());
        }
        Ok(Self::from_fn(n, self.terms, |i, j| QSeries::new(xs.iter().map(|x| x[i][j].clone()).collect())))
    }

    /// Entrywise conversion to p-adic series.
    pub fn to_padic(&self, p: u64, prec: u32) -> Result<SeriesMatrix<PAdic>> {
        let n = self.n;
        let mut coeffs = Vec::with_capacity(self.terms);
        for k in 0..self.terms {
            let mut vals = Vec::with_capacity(n * n);
            for e in &self.entries {
                vals.push(PAdic::from_big_rational(p, &e.coeff(k), prec)?);
            }
            coeffs.push(Mat::from_fn(n, n, |i, j| vals[i * n + j]));
        }
        Ok(SeriesMatrix::from_coefficients(coeffs))
    }

    /// Whether every entry vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(QSeries::is_zero)
    }

    /// Smallest p-adic valuation among the nonzero coefficients.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.min_valuation(p)).min()
    }
}

/// Product of dense rational matrices.
pub fn dense_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Inverse of a dense rational matrix by Gauss–Jordan elimination.
pub fn dense_inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant of a dense rational matrix.
pub fn dense_det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    det
}
