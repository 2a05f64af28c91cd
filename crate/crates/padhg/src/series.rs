//! Truncated power series, dense matrices and series matrices over a
//! [`Scalar`] coefficient ring, together with the Frobenius substitution
//! `z ↦ c z^p` and a solver for regular-singular first-order systems.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::PAdic;
use crate::par::{map_indexed, Exec};
use crate::ring::{min_opt, Scalar};

/// Default number of retained terms.
pub const DEFAULT_TERMS: usize = 64;

fn check_lift(c: &PAdic) -> Result<()> {
    let p = c.prime();
    let d = c.sub_p(&PAdic::from_int(p, 1));
    let need = if p == 2 { 2 } else { 1 };
    if d.valuation().map_or(true, |v| v >= need) {
        Ok(())
    } else {
        Err(Error::InvalidLift(format!("{c} is not in 1+{}Z_{p}", if p == 2 { 4 } else { p })))
    }
}

/// `z^offset · Σ_i coeffs[i] z^i`, known modulo `z^(offset + coeffs.len())`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C: Scalar> {
    offset: i64,
    coeffs: Vec<C>,
}

impl<C: Scalar> TruncSeries<C> {
    /// A power series from its first coefficients; `coeffs` must be nonempty.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncSeries { offset: 0, coeffs }
    }

    /// A Laurent-type series `z^offset · Σ coeffs[i] z^i`.
    pub fn with_offset(offset: i64, coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncSeries { offset, coeffs }
    }

    /// The constant `c` modulo `z^terms`.
    pub fn constant(c: C, terms: usize) -> Self {
        let z = c.zero_like();
        let mut v = vec![z; terms.max(1)];
        v[0] = c;
        Self::new(v)
    }

    pub fn zero(proto: &C, terms: usize) -> Self {
        Self::new(vec![proto.zero_like(); terms.max(1)])
    }

    pub fn one(proto: &C, terms: usize) -> Self {
        Self::constant(proto.one_like(), terms)
    }

    /// `c · z^k` modulo `z^terms`.
    pub fn monomial(c: C, k: usize, terms: usize) -> Self {
        let mut s = Self::zero(&c, terms);
        if k < terms {
            s.coeffs[k] = c;
        }
        s
    }

    /// Number of retained terms.
    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// The exponent below which the series is known.
    pub fn order_bound(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero below the offset).
    pub fn coeff(&self, k: i64) -> C {
        let i = k - self.offset;
        if i < 0 {
            return self.coeffs[0].zero_like();
        }
        self.coeffs
            .get(i as usize)
            .cloned()
            .unwrap_or_else(|| panic!("coefficient z^{k} is beyond the truncation order"))
    }

    fn proto(&self) -> &C {
        &self.coeffs[0]
    }

    /// Keeps at most `terms` coefficients.
    pub fn truncate(&self, terms: usize) -> Self {
        let n = terms.clamp(1, self.coeffs.len());
        TruncSeries { offset: self.offset, coeffs: self.coeffs[..n].to_vec() }
    }

    /// Re-expresses the series with nonnegative exponents only (fails on
    /// genuine poles).
    pub fn to_power_series(&self) -> Result<Self> {
        if self.offset >= 0 {
            let k = self.offset as usize;
            let total = self.coeffs.len() + k;
            let mut v = vec![self.proto().zero_like(); total];
            v[k..].clone_from_slice(&self.coeffs);
            return Ok(Self::new(v));
        }
        let shift = (-self.offset) as usize;
        if self.coeffs.iter().take(shift).any(|c| !c.is_zero_s()) {
            return Err(Error::InvalidInput("series has a pole at z = 0".into()));
        }
        if shift >= self.coeffs.len() {
            return Err(Error::PrecisionExhausted("no power-series terms remain".into()));
        }
        Ok(Self::new(self.coeffs[shift..].to_vec()))
    }

    fn aligned(&self, other: &Self) -> (i64, usize) {
        let off = self.offset.min(other.offset);
        let bound = self.order_bound().min(other.order_bound());
        (off, (bound - off).max(1) as usize)
    }

    fn combine(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let (off, len) = self.aligned(other);
        let coeffs = (0..len)
            .map(|i| {
                let k = off + i as i64;
                f(&self.coeff(k), &other.coeff(k))
            })
            .collect();
        TruncSeries { offset: off, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.add_s(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.sub_s(b))
    }

    pub fn neg(&self) -> Self {
        TruncSeries { offset: self.offset, coeffs: self.coeffs.iter().map(|c| c.neg_s()).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncSeries { offset: self.offset, coeffs: self.coeffs.iter().map(|x| x.mul_s(c)).collect() }
    }

    /// Product; the relative truncation is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let mut acc = self.proto().zero_like();
                for i in 0..=k {
                    acc = acc.add_s(&self.coeffs[i].mul_s(&other.coeffs[k - i]));
                }
                acc
            })
            .collect();
        TruncSeries { offset: self.offset + other.offset, coeffs }
    }

    /// Multiplicative inverse; the lowest retained coefficient must be
    /// invertible.
    pub fn inverse(&self) -> Result<Self> {
        let a0inv = self.coeffs[0].inverse_s().map_err(|_| Error::NonUnitConstantTerm)?;
        let n = self.coeffs.len();
        let mut out: Vec<C> = Vec::with_capacity(n);
        out.push(a0inv.clone());
        for k in 1..n {
            let mut acc = self.proto().zero_like();
            for i in 1..=k {
                acc = acc.add_s(&self.coeffs[i].mul_s(&out[k - i]));
            }
            out.push(acc.mul_s(&a0inv).neg_s());
        }
        Ok(TruncSeries { offset: -self.offset, coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// The Euler derivative `D = z d/dz`.
    pub fn euler_d(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul_s(&c.from_int_like(self.offset + i as i64)))
            .collect();
        TruncSeries { offset: self.offset, coeffs }
    }

    /// `f(c z^p)` for `c ∈ 1 + pZ_p` (`1 + 4Z_2` when `p = 2`), keeping the
    /// same number of terms.
    pub fn frobenius_substitute(&self, c: &PAdic) -> Result<Self> {
        check_lift(c)?;
        let p = c.prime() as i64;
        let n = self.coeffs.len();
        let mut out = vec![self.proto().zero_like(); n];
        let mut cpow = self.proto().from_padic_like(&c.pow_i(self.offset)?);
        let cc = self.proto().from_padic_like(c);
        for (i, coef) in self.coeffs.iter().enumerate() {
            let j = i * p as usize;
            if j >= n {
                break;
            }
            out[j] = coef.mul_s(&cpow);
            cpow = cpow.mul_s(&cc);
        }
        Ok(TruncSeries { offset: self.offset * p, coeffs: out })
    }

    /// Substitutes `z ↦ c·z` for a scalar `c`.
    pub fn scale_variable(&self, c: &C) -> Self {
        let mut pw = c.one_like();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x.mul_s(&pw));
            pw = pw.mul_s(c);
        }
        TruncSeries { offset: self.offset, coeffs }
    }

    /// `Σ_{i<terms} coeffs[i] x^(offset+i)` for `offset ≥ 0`.
    pub fn eval(&self, x: &C) -> C {
        self.eval_terms(x, self.coeffs.len())
    }

    /// Evaluation of the first `terms` retained coefficients.
    pub fn eval_terms(&self, x: &C, terms: usize) -> C {
        assert!(self.offset >= 0, "evaluation of a series with a pole");
        let mut acc = self.proto().zero_like();
        for c in self.coeffs[..terms.min(self.coeffs.len())].iter().rev() {
            acc = acc.mul_s(x).add_s(c);
        }
        let mut shift = x.one_like();
        for _ in 0..self.offset {
            shift = shift.mul_s(x);
        }
        acc.mul_s(&shift)
    }

    /// Whether every retained coefficient vanishes modulo `p^k`.
    pub fn vanishes_mod(&self, k: i64) -> bool {
        self.coeffs.iter().all(|c| c.min_valuation().map_or(true, |v| v >= k))
    }

    /// The smallest valuation over the coefficients (`None` if all are exact zeros).
    pub fn min_valuation(&self) -> Option<i64> {
        self.coeffs.iter().fold(None, |acc, c| min_opt(acc, c.min_valuation()))
    }

    /// The smallest absolute precision over the coefficients.
    pub fn min_abs_precision(&self) -> Option<i64> {
        self.coeffs.iter().fold(None, |acc, c| min_opt(acc, c.min_abs_precision()))
    }

    /// Maps every coefficient.
    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries { offset: self.offset, coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<C: Scalar + Serialize> Serialize for TruncSeries<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TruncSeries", 3)?;
        st.serialize_field("T", &self.coeffs.len())?;
        st.serialize_field("offset", &self.offset)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

/// A dense matrix over a [`Scalar`] ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<C: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> Mat<C> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn zeros(proto: &C, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| proto.zero_like())
    }

    pub fn identity(proto: &C, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { proto.one_like() } else { proto.zero_like() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[C] {
        &self.data
    }

    fn proto(&self) -> &C {
        &self.data[0]
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add_s(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub_s(other.get(i, j)))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul_s(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix dimensions");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = self.proto().zero_like();
            for k in 0..self.cols {
                acc = acc.add_s(&self.get(i, k).mul_s(other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        (0..self.rows)
            .map(|i| {
                let mut acc = self.proto().zero_like();
                for (k, x) in v.iter().enumerate() {
                    acc = acc.add_s(&self.get(i, k).mul_s(x));
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Index of the pivot candidate of least valuation in column `col`
    /// among rows `from..`.
    fn pivot(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter(|&r| !self.get(r, col).is_zero_s())
            .min_by_key(|&r| self.get(r, col).min_valuation().unwrap_or(i64::MAX))
    }

    /// Determinant by fraction-free elimination with valuation pivoting.
    pub fn det(&self) -> C {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.proto().one_like();
        for col in 0..n {
            let Some(r) = a.pivot(col, col) else {
                return self.proto().zero_like();
            };
            if r != col {
                a.swap_rows(r, col);
                det = det.neg_s();
            }
            let piv = a.get(col, col).clone();
            det = det.mul_s(&piv);
            let Ok(inv) = piv.inverse_s() else {
                return self.proto().zero_like();
            };
            for i in col + 1..n {
                let f = a.get(i, col).mul_s(&inv);
                for j in col..n {
                    let v = a.get(i, j).sub_s(&f.mul_s(a.get(col, j)));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    /// Inverse by Gauss–Jordan elimination with valuation pivoting.
    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = Self::identity(self.proto(), n);
        for col in 0..n {
            let r = a.pivot(col, col).ok_or(Error::SingularBasis)?;
            a.swap_rows(r, col);
            b.swap_rows(r, col);
            let inv = a.get(col, col).inverse_s().map_err(|_| Error::SingularBasis)?;
            for j in 0..n {
                let v = a.get(col, j).mul_s(&inv);
                a.set(col, j, v);
                let w = b.get(col, j).mul_s(&inv);
                b.set(col, j, w);
            }
            for i in 0..n {
                if i == col || a.get(i, col).min_valuation().is_none() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    let v = a.get(i, j).sub_s(&f.mul_s(a.get(col, j)));
                    a.set(i, j, v);
                    let w = b.get(i, j).sub_s(&f.mul_s(b.get(col, j)));
                    b.set(i, j, w);
                }
            }
        }
        Ok(b)
    }

    /// Solves `self · x = rhs`.
    pub fn solve(&self, rhs: &[C]) -> Result<Vec<C>> {
        Ok(self.inverse()?.mul_vec(rhs))
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Mat<D> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().fold(None, |acc, c| min_opt(acc, c.min_valuation()))
    }

    pub fn min_abs_precision(&self) -> Option<i64> {
        self.data.iter().fold(None, |acc, c| min_opt(acc, c.min_abs_precision()))
    }
}

impl<C: Scalar + Serialize> Serialize for Mat<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[C]> = self.data.chunks(self.cols).collect();
        rows.serialize(s)
    }
}

/// A square matrix of truncated power series, stored as the series of its
/// coefficient matrices `Σ_k M_k z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix<C: Scalar> {
    n: usize,
    coeffs: Vec<Mat<C>>,
}

impl<C: Scalar> SeriesMatrix<C> {
    pub fn from_coefficients(coeffs: Vec<Mat<C>>) -> Self {
        assert!(!coeffs.is_empty());
        let n = coeffs[0].rows();
        SeriesMatrix { n, coeffs }
    }

    /// Builds the matrix from its entries; all series must be power series
    /// with at least `terms` coefficients.
    pub fn from_entries(n: usize, terms: usize, f: impl Fn(usize, usize) -> TruncSeries<C>) -> Self {
        let entries: Vec<Vec<TruncSeries<C>>> = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        let coeffs = (0..terms)
            .map(|k| Mat::from_fn(n, n, |i, j| entries[i][j].coeff(k as i64)))
            .collect();
        SeriesMatrix { n, coeffs }
    }

    pub fn constant(m: Mat<C>, terms: usize) -> Self {
        let z = Mat::zeros(m.get(0, 0), m.rows(), m.cols());
        let mut coeffs = vec![z; terms.max(1)];
        coeffs[0] = m;
        Self::from_coefficients(coeffs)
    }

    pub fn identity(proto: &C, n: usize, terms: usize) -> Self {
        Self::constant(Mat::identity(proto, n), terms)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient matrix of `z^k`.
    pub fn coeff(&self, k: usize) -> &Mat<C> {
        &self.coeffs[k]
    }

    pub fn coefficients(&self) -> &[Mat<C>] {
        &self.coeffs
    }

    /// Entry `(i, j)` as a series.
    pub fn entry(&self, i: usize, j: usize) -> TruncSeries<C> {
        TruncSeries::new(self.coeffs.iter().map(|m| m.get(i, j).clone()).collect())
    }

    /// Column `j` as a vector of series.
    pub fn column(&self, j: usize) -> Vec<TruncSeries<C>> {
        (0..self.n).map(|i| self.entry(i, j)).collect()
    }

    /// Builds the matrix from its columns.
    pub fn from_columns(cols: &[Vec<TruncSeries<C>>], terms: usize) -> Self {
        let n = cols.len();
        Self::from_entries(n, terms, |i, j| cols[j][i].clone())
    }

    pub fn truncate(&self, terms: usize) -> Self {
        Self::from_coefficients(self.coeffs[..terms.clamp(1, self.coeffs.len())].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.terms().min(other.terms());
        Self::from_coefficients((0..t).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.terms().min(other.terms());
        Self::from_coefficients((0..t).map(|k| self.coeffs[k].sub(&other.coeffs[k])).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coefficients(self.coeffs.iter().map(|m| m.scale(c)).collect())
    }

    /// Product, computed coefficient by coefficient with the given executor.
    pub fn mul_with(&self, other: &Self, exec: Exec) -> Self {
        let t = self.terms().min(other.terms());
        let coeffs = map_indexed(exec, t, |k| {
            let mut acc = self.coeffs[0].mul(&other.coeffs[k]);
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&other.coeffs[k - i]));
            }
            acc
        });
        Self::from_coefficients(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, Exec::default())
    }

    /// Inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let b0 = self.coeffs[0].inverse()?;
        let mut out = vec![b0.clone()];
        for k in 1..self.terms() {
            let mut acc = self.coeffs[1].mul(&out[k - 1]);
            for i in 2..=k {
                acc = acc.add(&self.coeffs[i].mul(&out[k - i]));
            }
            out.push(b0.mul(&acc).scale(&acc.get(0, 0).from_int_like(-1)));
        }
        Ok(Self::from_coefficients(out))
    }

    /// Entrywise Euler derivative `D•`.
    pub fn euler_d(&self) -> Self {
        let proto = self.coeffs[0].get(0, 0).clone();
        Self::from_coefficients(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, m)| m.scale(&proto.from_int_like(k as i64)))
                .collect(),
        )
    }

    /// Entrywise substitution `z ↦ c z^p`.
    pub fn frobenius_substitute(&self, c: &PAdic) -> Result<Self> {
        check_lift(c)?;
        let p = c.prime() as usize;
        let proto = self.coeffs[0].get(0, 0).clone();
        let t = self.terms();
        let zero = Mat::zeros(&proto, self.n, self.n);
        let mut out = vec![zero; t];
        let cc = proto.from_padic_like(c);
        let mut cpow = proto.one_like();
        for (k, m) in self.coeffs.iter().enumerate() {
            if k * p >= t {
                break;
            }
            out[k * p] = m.scale(&cpow);
            cpow = cpow.mul_s(&cc);
        }
        Ok(Self::from_coefficients(out))
    }

    /// Determinant as a series.
    pub fn det(&self) -> TruncSeries<C> {
        let n = self.n;
        let t = self.terms();
        // Laplace expansion over series entries; the dimension is small.
        fn rec<C: Scalar>(m: &[Vec<TruncSeries<C>>], cols: &[usize], row: usize) -> TruncSeries<C> {
            if cols.len() == 1 {
                return m[row][cols[0]].clone();
            }
            let mut acc: Option<TruncSeries<C>> = None;
            for (idx, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = m[row][c].mul(&rec(m, &rest, row + 1));
                let term = if idx % 2 == 1 { term.neg() } else { term };
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            acc.expect("nonempty")
        }
        let entries: Vec<Vec<TruncSeries<C>>> = (0..n).map(|i| (0..n).map(|j| self.entry(i, j).truncate(t)).collect()).collect();
        let cols: Vec<usize> = (0..n).collect();
        rec(&entries, &cols, 0)
    }

    /// Evaluates every entry at `x`, using the first `terms` coefficients.
    pub fn eval_terms(&self, x: &C, terms: usize) -> Mat<C> {
        let n = self.n;
        let t = terms.min(self.terms());
        let mut acc = Mat::zeros(x, n, n);
        for m in self.coeffs[..t].iter().rev() {
            acc = acc.scale(x).add(m);
        }
        acc
    }

    /// Smallest index `k` with a coefficient matrix not certified to vanish
    /// modulo `p^prec`, if any.
    pub fn first_nonzero_order(&self, prec: i64) -> Option<usize> {
        self.coeffs.iter().position(|m| {
            m.entries().iter().any(|c| !c.is_zero_s() && c.min_valuation().is_some_and(|v| v < prec))
        })
    }

    pub fn min_valuation(&self) -> Option<i64> {
        self.coeffs.iter().fold(None, |acc, m| min_opt(acc, m.min_valuation()))
    }

    pub fn min_abs_precision(&self) -> Option<i64> {
        self.coeffs.iter().fold(None, |acc, m| min_opt(acc, m.min_abs_precision()))
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> SeriesMatrix<D> {
        SeriesMatrix { n: self.n, coeffs: self.coeffs.iter().map(|m| m.map(f)).collect() }
    }
}

impl<C: Scalar + Serialize> Serialize for SeriesMatrix<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Vec<TruncSeries<C>>> = (0..self.n).map(|i| (0..self.n).map(|j| self.entry(i, j)).collect()).collect();
        let mut st = s.serialize_struct("SeriesMatrix", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("T", &self.terms())?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Output of [`solve_regular_ode`].
#[derive(Clone, Debug)]
pub struct OdeSolution<C: Scalar> {
    pub solution: Vec<TruncSeries<C>>,
    /// Total p-adic valuation of the pivots inverted along the recursion;
    /// an upper bound for the absolute digits lost.
    pub loss_log: Vec<(usize, i64)>,
}

impl<C: Scalar> OdeSolution<C> {
    /// Largest single-step loss.
    pub fn max_loss(&self) -> i64 {
        self.loss_log.iter().map(|&(_, l)| l).max().unwrap_or(0)
    }
}

/// Solves `(D − λ) v + N v = rhs` modulo `z^T` with `v(0) = v0`.
///
/// The coefficients satisfy `((j − λ) I + N_0) v_j = rhs_j − Σ_{i<j} N_{j−i} v_i`
/// for `j ≥ 1`; each step records the valuation of the determinant it
/// inverts.
pub fn solve_regular_ode<C: Scalar>(
    lambda: &C,
    n_mat: &SeriesMatrix<C>,
    rhs: &[TruncSeries<C>],
    v0: &[C],
) -> Result<OdeSolution<C>> {
    let n = n_mat.dim();
    if rhs.len() != n || v0.len() != n {
        return Err(Error::DimensionMismatch(format!("system of size {n}")));
    }
    let t = rhs.iter().map(|r| r.terms()).chain(std::iter::once(n_mat.terms())).min().unwrap_or(1);
    let proto = lambda.clone();
    let mut sol: Vec<Vec<C>> = vec![v0.to_vec()];
    let mut loss_log = Vec::new();
    for j in 1..t {
        let shift = proto.from_int_like(j as i64).sub_s(lambda);
        let mut m = n_mat.coeff(0).clone();
        for i in 0..n {
            let v = m.get(i, i).add_s(&shift);
            m.set(i, i, v);
        }
        let det = m.det();
        if det.is_zero_s() {
            return Err(Error::SingularRecursion(j));
        }
        loss_log.push((j, det.min_valuation().unwrap_or(0).max(0)));
        let mut b: Vec<C> = rhs.iter().map(|r| r.coeff(j as i64)).collect();
        for i in 0..j {
            let nv = n_mat.coeff(j - i).mul_vec(&sol[i]);
            for (bk, x) in b.iter_mut().zip(nv) {
                *bk = bk.sub_s(&x);
            }
        }
        let vj = m.solve(&b).map_err(|_| Error::SingularRecursion(j))?;
        sol.push(vj);
    }
    let solution = (0..n).map(|i| TruncSeries::new(sol.iter().map(|v| v[i].clone()).collect())).collect();
    Ok(OdeSolution { solution, loss_log })
}
