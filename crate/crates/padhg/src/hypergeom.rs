//! Hypergeometric data, the hypergeometric operator and its companion
//! connection, the residue constants `γ_k` and the canonical bases.
//!
//! Conventions.  `D = z d/dz` and
//! `P(a;b) = Π_j (D + b_j − 1) − z Π_i (D + a_i)`.  The module
//! `H_P = D-ring / D-ring·P` has the basis `ω, Dω, …, D^{n−1}ω` where `ω`
//! is the class of `1`.  A vector `v = Σ v_i D^i ω` is stored as the column
//! `(v_0, …, v_{n−1})`, and `D` acts by `D(v) = D•v + N_H v` where `D•`
//! differentiates the coordinates and `N_H` is the companion matrix: ones
//! on the subdiagonal and `−q_0, …, −q_{n−1}` down the last column, with
//! `P = (1 − z)(D^n + q_{n−1} D^{n−1} + ⋯ + q_0)`.
//!
//! The coordinate matrix of the canonical basis has rational entries and
//! is computed exactly.  Columns `k > s` come from the explicit recursion
//! for `ω̂_k`.  Columns `m ≤ s` are the unique power-series solutions of
//! `D ω̂(1) = 0` and `D ω̂(m) = −ω̂(m−1)` with the prescribed value at
//! `z = 0`.  Uniqueness holds because the recursion inverts
//! `j·I + N_H(0)` for `j ≥ 1`, whose eigenvalues `j + 1 − b_i` are positive.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::invmod;
use crate::error::{Error, Result};
use crate::padic::{max_precision, PAdic};
use crate::par::{map_indexed, Exec};
use crate::qseries::{dense_det, q, qi, QMatrix, QSeries, Q};
use crate::special::SpecialFunctions;

/// `T_α ∈ [0, p)` with `α + T_α ≡ 0 mod p`.
pub fn dwork_shift(alpha: &Ratio<i64>, p: u64) -> Result<i64> {
    let num = alpha.numer().rem_euclid(p as i64) as u64;
    let den = alpha.denom().rem_euclid(p as i64) as u64;
    let inv = invmod(den, p).ok_or_else(|| Error::NotPIntegral(format!("{alpha}")))?;
    let residue = (num * inv) % p;
    Ok(((p - residue) % p) as i64)
}

/// The `i`-th Dwork prime `α^(i)`, iterating `α ↦ (α + T_α)/p`.
pub fn dwork_prime(alpha: &Ratio<i64>, p: u64, i: u32) -> Result<Ratio<i64>> {
    let mut x = *alpha;
    for _ in 0..i {
        let t = dwork_shift(&x, p)?;
        x = (x + Ratio::from_integer(t)) / Ratio::from_integer(p as i64);
    }
    Ok(x)
}

/// Which residue formula a datum is meant for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `0 < a_i, b_j < 1`, `a_i ≠ b_j`, `b` pairwise distinct.
    Hypothesis,
    /// `b = (1, …, 1, b_{s+1}, …, b_n)` with `s ≥ 1` and the remaining
    /// entries as in the hypothesis mode.
    Degenerate,
}

/// A hypergeometric parameter pair `(a; b)` together with the prime.
///
/// The entries of `b` equal to `1` are moved to the front, so that
/// `b_1 = ⋯ = b_s = 1`.  All indices in this module are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HGDatum {
    #[serde(serialize_with = "ser_ratios")]
    a: Vec<Ratio<i64>>,
    #[serde(serialize_with = "ser_ratios")]
    b: Vec<Ratio<i64>>,
    s: usize,
    p: u64,
}

fn ser_ratios<S: serde::Serializer>(v: &[Ratio<i64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl HGDatum {
    /// Builds a datum, checking that every parameter lies in `Z_(p)`.
    pub fn new(a: Vec<Ratio<i64>>, b: Vec<Ratio<i64>>, p: u64) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::DimensionMismatch(format!("|a| = {}, |b| = {}", a.len(), b.len())));
        }
        if !crate::arith::is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        for x in a.iter().chain(b.iter()) {
            dwork_shift(x, p)?;
        }
        let one = Ratio::one();
        let mut sorted: Vec<Ratio<i64>> = b.iter().copied().filter(|x| *x == one).collect();
        let s = sorted.len();
        sorted.extend(b.iter().copied().filter(|x| *x != one));
        Ok(HGDatum { a, b: sorted, s, p })
    }

    pub fn a(&self) -> &[Ratio<i64>] {
        &self.a
    }

    pub fn b(&self) -> &[Ratio<i64>] {
        &self.b
    }

    /// The rank `n`.
    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// The number of `b_j` equal to `1`.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// `a^(1)`, entrywise Dwork primes.
    pub fn a_frob(&self) -> Vec<Ratio<i64>> {
        self.a.iter().map(|x| dwork_prime(x, self.p, 1).expect("validated")).collect()
    }

    /// `b^(1)`, entrywise Dwork primes.
    pub fn b_frob(&self) -> Vec<Ratio<i64>> {
        self.b.iter().map(|x| dwork_prime(x, self.p, 1).expect("validated")).collect()
    }

    /// The source datum `(a^(1); b^(1))` of the Frobenius intertwiner.
    pub fn frobenius_source(&self) -> HGDatum {
        HGDatum { a: self.a_frob(), b: self.b_frob(), s: self.s, p: self.p }
    }

    /// `μ_k = p(1 − b_k^(1)) − (1 − b_k)`, an integer in `[0, p)`.
    pub fn mu(&self, k: usize) -> i64 {
        let one = Ratio::one();
        let bf = dwork_prime(&self.b[k], self.p, 1).expect("validated");
        let m = Ratio::from_integer(self.p as i64) * (one - bf) - (one - self.b[k]);
        debug_assert!(m.is_integer());
        m.to_integer()
    }

    /// `c_k = Π_{i≠k} (b_k − b_i)`.
    pub fn c_k(&self, k: usize) -> Ratio<i64> {
        c_of(&self.b, k)
    }

    /// `c_k^(F) = Π_{i≠k} (b_k^(1) − b_i^(1))`.
    pub fn c_k_frob(&self, k: usize) -> Ratio<i64> {
        c_of(&self.b_frob(), k)
    }

    /// Checks the parameter conditions of `mode`.
    pub fn validate(&self, mode: Mode) -> Result<()> {
        let zero = Ratio::zero();
        let one = Ratio::one();
        let open = |x: &Ratio<i64>| *x > zero && *x < one;
        match mode {
            Mode::Hypothesis if self.s > 0 => {
                return Err(Error::HypothesisViolation(format!("b_{} = 1", 1)));
            }
            Mode::Degenerate if self.s == 0 => {
                return Err(Error::HypothesisViolation("no b_j equals 1".into()));
            }
            _ => {}
        }
        for (i, x) in self.a.iter().enumerate() {
            if !open(x) {
                return Err(Error::HypothesisViolation(format!("a_{} = {x} is not in (0,1)", i + 1)));
            }
        }
        for (j, y) in self.b.iter().enumerate().skip(self.s) {
            if !open(y) {
                return Err(Error::HypothesisViolation(format!("b_{} = {y} is not in (0,1)", j + 1)));
            }
            for (i, x) in self.a.iter().enumerate() {
                if (x - y).is_integer() {
                    return Err(Error::HypothesisViolation(format!(
                        "a_{} − b_{} = {} is an integer",
                        i + 1,
                        j + 1,
                        x - y
                    )));
                }
            }
            for (l, w) in self.b.iter().enumerate().skip(j + 1) {
                if w == y {
                    return Err(Error::HypothesisViolation(format!(
                        "b_{} = b_{} = {y} are not distinct",
                        j + 1,
                        l + 1
                    )));
                }
            }
        }
        for x in self.a.iter().chain(self.b.iter()) {
            let t = dwork_shift(x, self.p)?;
            if !(0..self.p as i64).contains(&t) {
                return Err(Error::HypothesisViolation(format!("T_{x} = {t} out of range")));
            }
        }
        Ok(())
    }

    /// The mode this datum satisfies, if any.
    pub fn mode(&self) -> Result<Mode> {
        let mode = if self.s == 0 { Mode::Hypothesis } else { Mode::Degenerate };
        self.validate(mode)?;
        Ok(mode)
    }
}

fn c_of(b: &[Ratio<i64>], k: usize) -> Ratio<i64> {
    b.iter().enumerate().filter(|&(i, _)| i != k).fold(Ratio::one(), |acc, (_, x)| acc * (b[k] - x))
}

/// Parses `"n/d"` or `"n"`.
pub fn parse_rational(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

/// Parses a comma-separated list of rationals.
pub fn parse_list(s: &str) -> Result<Vec<Ratio<i64>>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_rational).collect()
}

/// Coefficients (low to high) of `Π_j (x + α_j)`.
pub fn poly_from_shifts(alpha: &[Q]) -> Vec<Q> {
    let mut poly = vec![Q::one()];
    for a in alpha {
        let mut next = vec![Q::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c * a;
            next[i + 1] += c;
        }
        poly = next;
    }
    poly
}

/// `F(α; β; z) = Σ_i (α_1)_i⋯(α_n)_i / ((β_1)_i⋯(β_n)_i) z^i` modulo `z^T`.
pub fn hg_series(alpha: &[Q], beta: &[Q], terms: usize) -> Result<QSeries> {
    let mut coeffs = Vec::with_capacity(terms);
    let mut c = Q::one();
    for i in 0..terms {
        coeffs.push(c.clone());
        if i + 1 == terms {
            break;
        }
        let shift = qi(i as i64);
        let mut ratio = Q::one();
        for a in alpha {
            ratio *= a + &shift;
        }
        for b in beta {
            let d = b + &shift;
            if d.is_zero() {
                return Err(Error::PoleInParameters(format!("{b}")));
            }
            ratio /= d;
        }
        c *= ratio;
    }
    Ok(QSeries::new(coeffs))
}

/// [`hg_series`] for machine rationals.
pub fn hg_series_ratio(a: &[Ratio<i64>], b: &[Ratio<i64>], terms: usize) -> Result<QSeries> {
    let aq: Vec<Q> = a.iter().map(q).collect();
    let bq: Vec<Q> = b.iter().map(q).collect();
    hg_series(&aq, &bq, terms)
}

/// Applies `Π_j (D + β_j − 1) − z Π_i (D + α_i)` to a series.
pub fn apply_operator(alpha: &[Q], beta: &[Q], f: &QSeries) -> QSeries {
    let mut left = f.clone();
    for b in beta {
        left = left.euler_d().add(&left.scale(&(b - Q::one())));
    }
    let mut right = f.clone();
    for a in alpha {
        right = right.euler_d().add(&right.scale(a));
    }
    left.sub(&right.shift(1))
}

/// The coefficients `q_i` of `P = (1 − z)(D^n + Σ q_i D^i)` and the
/// companion matrix `N_H`.
#[derive(Clone, Debug)]
pub struct Companion {
    pub q: Vec<QSeries>,
    pub n_h: QMatrix,
}

/// `(1 − z) q_i = S_i(β − 1) − z S_i(α)` where `Π_j (x + γ_j) = Σ S_i(γ) x^i`.
pub fn companion(alpha: &[Q], beta: &[Q], terms: usize) -> Companion {
    let n = alpha.len();
    let bm1: Vec<Q> = beta.iter().map(|b| b - Q::one()).collect();
    let sb = poly_from_shifts(&bm1);
    let sa = poly_from_shifts(alpha);
    let geo = QSeries::geometric(terms);
    let qs: Vec<QSeries> = (0..n)
        .map(|i| QSeries::linear(sb[i].clone(), -sa[i].clone(), terms).mul(&geo))
        .collect();
    let n_h = QMatrix::from_fn(n, terms, |i, j| {
        let mut e = if i == j + 1 { QSeries::one(terms) } else { QSeries::zero(terms) };
        if j == n - 1 {
            e = e.sub(&qs[i]);
        }
        e
    });
    Companion { q: qs, n_h }
}

/// [`companion`] for a datum.
pub fn datum_companion(d: &HGDatum, terms: usize) -> Companion {
    let aq: Vec<Q> = d.a.iter().map(q).collect();
    let bq: Vec<Q> = d.b.iter().map(q).collect();
    companion(&aq, &bq, terms)
}

/// `(x)_+`: `x` when `x > 0`, else `1`.
fn plus(x: Ratio<i64>) -> Ratio<i64> {
    if x > Ratio::zero() {
        x
    } else {
        Ratio::one()
    }
}

fn frac(x: Ratio<i64>) -> Ratio<i64> {
    x - x.floor()
}

fn kedlaya_k(a: &[Ratio<i64>], b: &[Ratio<i64>], x: Ratio<i64>) -> Ratio<i64> {
    a.iter().zip(b).fold(Ratio::one(), |acc, (ai, bi)| acc * plus(ai - x) / plus(bi - x))
}

fn kedlaya_z(a: &[Ratio<i64>], b: &[Ratio<i64>], x: Ratio<i64>) -> i64 {
    a.iter().filter(|&&ai| ai < x).count() as i64 - b.iter().filter(|&&bj| bj < x).count() as i64
}

fn ratio_padic(p: u64, r: &Ratio<i64>) -> Result<PAdic> {
    PAdic::from_ratio(p, r, max_precision(p))
}

/// Kedlaya's residue constant
/// `γ_k = (−1)^{Z(b_k)} p^{−Z^F(b_k^(1))} K^F(b_k^(1))/K(b_k) Π_i Γ_p({b_i − b_k})/Γ_p({a_i − b_k})`
/// modulo `p^m` relative precision.
pub fn gamma_k(sf: &SpecialFunctions, d: &HGDatum, k: usize, m: u32) -> Result<PAdic> {
    let p = d.p;
    check_prime(sf, p)?;
    let (a, b) = (&d.a, &d.b);
    let (af, bf) = (d.a_frob(), d.b_frob());
    let bk = b[k];
    let bkf = bf[k];
    let z = kedlaya_z(a, b, bk);
    let zf = kedlaya_z(&af, &bf, bkf);
    let rat = kedlaya_k(&af, &bf, bkf) / kedlaya_k(a, b, bk);
    let mut acc = ratio_padic(p, &rat)?.shift(-zf);
    if z % 2 != 0 {
        acc = acc.neg_p();
    }
    for (ai, bi) in a.iter().zip(b) {
        acc = acc.mul_p(&sf.gamma_rational(&frac(bi - bk), m)?);
        acc = acc.div_p(&sf.gamma_rational(&frac(ai - bk), m)?)?;
    }
    Ok(acc)
}

fn pochhammer(x: &Ratio<i64>, len: i64) -> Q {
    let x = q(x);
    (0..len).fold(Q::one(), |acc, i| acc * (&x + qi(i)))
}

/// The second form
/// `γ_k = p^{−1} Π_i (1−b_k+a_i)_{μ_k}/Γ_p(1−b_k+a_i+μ_k) · Π_j Γ_p(1−b_k+b_j+μ_k)/(1−b_k+b_j)_{μ_k}`.
pub fn gamma_k_alt(sf: &SpecialFunctions, d: &HGDatum, k: usize, m: u32) -> Result<PAdic> {
    let p = d.p;
    check_prime(sf, p)?;
    let one = Ratio::one();
    let mu = d.mu(k);
    let shift = one - d.b[k];
    let mut poch = Q::one();
    let mut acc = PAdic::from_int(p, 1).shift(-1);
    for ai in &d.a {
        let x = shift + ai;
        poch *= pochhammer(&x, mu);
        acc = acc.div_p(&sf.gamma_rational(&(x + Ratio::from_integer(mu)), m)?)?;
    }
    for bj in &d.b {
        let x = shift + bj;
        poch /= pochhammer(&x, mu);
        acc = acc.mul_p(&sf.gamma_rational(&(x + Ratio::from_integer(mu)), m)?);
    }
    Ok(acc.mul_p(&PAdic::from_big_rational(p, &poch, max_precision(p))?))
}

fn check_prime(sf: &SpecialFunctions, p: u64) -> Result<()> {
    if sf.prime() != p {
        return Err(Error::PrimeMismatch(sf.prime(), p));
    }
    Ok(())
}

/// Coordinates of the canonical basis `ω̂(1), …, ω̂(s), ω̂_{s+1}, …, ω̂_n`
/// in the basis `ω, Dω, …, D^{n−1}ω`.
#[derive(Clone, Debug)]
pub struct OmegaBasis {
    datum: HGDatum,
    terms: usize,
    matrix: QMatrix,
    /// `y_i^[k]` for the eigen-columns `k ≥ s` (zero-based), indexed by `k − s`.
    y: Vec<Vec<QSeries>>,
}

impl OmegaBasis {
    pub fn datum(&self) -> &HGDatum {
        &self.datum
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// The coordinate matrix `S(z)`; column `j` is the `j`-th basis vector.
    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    /// The series `y_0^[k], …, y_{n−1}^[k]` of an eigen-column `k ≥ s`.
    pub fn y(&self, k: usize) -> Option<&[QSeries]> {
        k.checked_sub(self.datum.s).and_then(|i| self.y.get(i)).map(Vec::as_slice)
    }

    /// `det S(0)`.
    pub fn det_at_zero(&self) -> Q {
        dense_det(&self.matrix.constant_term())
    }

    /// `Σ_i y_i^[k] (D + b_k − b_j)^i • G_j` with
    /// `G_j = F(1 − b_j + a; 1 − b_j + b)`.  This equals
    /// `z^{b_j − 1}·(ω̂_k • z^{1−b_j} G_j)`, so it is the constant
    /// `Π_{i≠k}(b_i − b_k)` when `j = k` and zero otherwise.
    pub fn pairing(&self, k: usize, j: usize) -> Result<QSeries> {
        let y = self.y(k).ok_or_else(|| Error::InvalidInput(format!("column {k} is not an eigen-column")))?;
        let d = &self.datum;
        let one = Ratio::<i64>::one();
        let alpha: Vec<Q> = d.a.iter().map(|x| q(&(one - d.b[j] + x))).collect();
        let beta: Vec<Q> = d.b.iter().map(|x| q(&(one - d.b[j] + x))).collect();
        let g = hg_series(&alpha, &beta, self.terms)?;
        let shift = q(&(d.b[k] - d.b[j]));
        let mut acc = QSeries::zero(self.terms);
        let mut cur = g;
        for yi in y {
            acc = acc.add(&yi.mul(&cur));
            cur = cur.euler_d().add(&cur.scale(&shift));
        }
        Ok(acc)
    }
}

/// Builds the canonical basis modulo `z^T`.
pub fn omega_hat_basis(d: &HGDatum, terms: usize) -> Result<OmegaBasis> {
    omega_hat_basis_with(d, terms, Exec::default())
}

/// [`omega_hat_basis`] with an explicit execution strategy for the
/// independent eigen-columns.
pub fn omega_hat_basis_with(d: &HGDatum, terms: usize, exec: Exec) -> Result<OmegaBasis> {
    let n = d.n();
    let s = d.s;
    let comp = datum_companion(d, terms);
    let eigen: Vec<Result<(Vec<QSeries>, Vec<QSeries>)>> =
        map_indexed(exec, n - s, |i| eigen_column(d, s + i, terms));
    let mut ys = Vec::with_capacity(n - s);
    let mut cols: Vec<Vec<QSeries>> = Vec::with_capacity(n);
    let mut prev: Option<Vec<QSeries>> = None;
    for m in 1..=s {
        let col = limit_column(d, &comp.n_h, m, prev.as_deref(), terms)?;
        prev = Some(col.clone());
        cols.push(col);
    }
    for r in eigen {
        let (col, y) = r?;
        cols.push(col);
        ys.push(y);
    }
    let matrix = QMatrix::from_columns(&cols, terms);
    if dense_det(&matrix.constant_term()).is_zero() {
        return Err(Error::SingularBasis);
    }
    Ok(OmegaBasis { datum: d.clone(), terms, matrix, y: ys })
}

/// Binomial coefficient as an exact rational.
fn binom(n: usize, k: usize) -> Q {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

/// Column `ω̂_k` and its `y^[k]` series.
fn eigen_column(d: &HGDatum, k: usize, terms: usize) -> Result<(Vec<QSeries>, Vec<QSeries>)> {
    let n = d.n();
    let one = Ratio::<i64>::one();
    let bk = d.b[k];
    // Q_k = P(1 − b_k + a; 1 − b_k + b)
    let alpha_k: Vec<Q> = d.a.iter().map(|x| q(&(one - bk + x))).collect();
    let beta_k: Vec<Q> = d.b.iter().map(|x| q(&(one - bk + x))).collect();
    let comp = companion(&alpha_k, &beta_k, terms);
    // Ǧ_k = F(b_k − a; 1 + b_k − b)
    let up: Vec<Q> = d.a.iter().map(|x| q(&(bk - x))).collect();
    let down: Vec<Q> = d.b.iter().map(|x| q(&(one + bk - x))).collect();
    let g = hg_series(&up, &down, terms)?;
    let mut y = vec![QSeries::zero(terms); n];
    y[n - 1] = QSeries::linear(Q::one(), -Q::one(), terms).mul(&g);
    for i in (0..n.saturating_sub(1)).rev() {
        y[i] = comp.q[i + 1].mul(&y[n - 1]).sub(&y[i + 1].euler_d());
    }
    // Σ_i y_i (D + b_k − 1)^i ω expressed in the D^j ω basis
    let c = q(&(bk - one));
    let mut col = vec![QSeries::zero(terms); n];
    for (i, yi) in y.iter().enumerate() {
        let mut cpow = Q::one();
        for j in (0..=i).rev() {
            col[j] = col[j].add(&yi.scale(&(binom(i, j) * &cpow)));
            cpow *= &c;
        }
    }
    Ok((col, y))
}

/// Column `ω̂(m)` for `1 ≤ m ≤ s`, solving `D•v + N_H v = −w` where `w` is
/// the previous column (zero for `m = 1`).
fn limit_column(d: &HGDatum, n_h: &QMatrix, m: usize, prev: Option<&[QSeries]>, terms: usize) -> Result<Vec<QSeries>> {
    let n = d.n();
    let s = d.s;
    // value at z = 0: (−1)^{m+1} x^{s−m} Π_{i>s} (x + b_i − 1)
    let shifts: Vec<Q> = d.b.iter().skip(s).map(|x| q(&(x - Ratio::one()))).collect();
    let tail = poly_from_shifts(&shifts);
    let sign = if m % 2 == 1 { Q::one() } else { -Q::one() };
    let mut v0 = vec![Q::zero(); n];
    for (i, c) in tail.iter().enumerate() {
        v0[s - m + i] = c * &sign;
    }
    let ncoef: Vec<Vec<Vec<Q>>> = (0..terms).map(|k| n_h.coeff(k)).collect();
    let w: Vec<Vec<Q>> = (0..terms)
        .map(|j| (0..n).map(|i| prev.map_or_else(Q::zero, |c| c[i].coeff(j))).collect())
        .collect();
    // consistency of the prescribed constant term
    let check = mat_vec(&ncoef[0], &v0);
    if check.iter().zip(&w[0]).any(|(x, y)| !(x + y).is_zero()) {
        return Err(Error::SingularRecursion(0));
    }
    let mut sol: Vec<Vec<Q>> = vec![v0];
    for j in 1..terms {
        let mut rhs: Vec<Q> = w[j].iter().map(|x| -x).collect();
        for l in 1..=j {
            let t = mat_vec(&ncoef[l], &sol[j - l]);
            for (r, x) in rhs.iter_mut().zip(t) {
                *r -= x;
            }
        }
        let mut a = ncoef[0].clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += qi(j as i64);
        }
        let inv = crate::qseries::dense_inverse(&a).ok_or(Error::SingularRecursion(j))?;
        sol.push(mat_vec(&inv, &rhs));
    }
    Ok((0..n).map(|i| QSeries::new(sol.iter().map(|v| v[i].clone()).collect())).collect())
}

fn mat_vec(a: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    a.iter().map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y)).collect()
}

/// `Σ_k (Π_{j≠k} 1/(x_k − x_j)) x_k^r` for pairwise distinct `x`.
pub fn euler_sum(x: &[Q], r: u32) -> Result<Q> {
    let mut acc = Q::zero();
    for (k, xk) in x.iter().enumerate() {
        let mut den = Q::one();
        for (j, xj) in x.iter().enumerate() {
            if j != k {
                let diff = xk - xj;
                if diff.is_zero() {
                    return Err(Error::RepeatedNode(format!("{xk}")));
                }
                den *= diff;
            }
        }
        acc += num_traits::pow(xk.clone(), r as usize) / den;
    }
    Ok(acc)
}
