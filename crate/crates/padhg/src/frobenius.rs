//! Explicit Frobenius intertwiners on hypergeometric modules.
//!
//! A Frobenius intertwiner is an additive map
//! `Φ: H_{P(a^(1); b^(1))} → H_{P(a; b)}` which is semilinear over the lift
//! `τ(z) = c z^p` and satisfies `DΦ = pΦD`.  Matrices use the column
//! convention `Φ(e_j) = Σ_i A_{ij} f_i`, so that `Φ(v) = A·τ(v)` on
//! coordinate columns.
//!
//! Coordinate form of `DΦ = pΦD`.  In the `D^i ω` bases `D` acts by
//! `D(v) = D•v + N v`, and `D•τ(v) = p·τ(D•v)`.  Expanding
//! `D(A τ(v)) = p A τ(D•v + N^(1) v)` and cancelling gives
//!
//! ```text
//! D•A + N_H·A − p·A·τ(N^(1)) = 0.
//! ```
//!
//! [`intertwiner_residual`] evaluates the left-hand side.
//!
//! In the canonical bases the matrix `B` is explicit: an upper triangular
//! Toeplitz block in the `Ψ` coefficients on `ω̂(1), …, ω̂(s)` and a
//! diagonal `z^{μ_k}` block on the eigenvectors `ω̂_k`.  The `D^i ω`
//! matrix is `A = S·B·τ(S^(F))^{-1}` where `S`, `S^(F)` are the coordinate
//! matrices of the canonical bases of the target and the source.

use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergeom::{datum_companion, gamma_k, omega_hat_basis, HGDatum, Mode, OmegaBasis};
use crate::padic::{max_precision, PAdic};
use crate::par::Exec;
use crate::ring::Scalar;
use crate::series::{Mat, SeriesMatrix, TruncSeries};
use crate::special::{exp_generating, PsiVariant, SpecialFunctions};

/// Which basis a Frobenius matrix is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisTag {
    OmegaHat,
    DPower,
}

/// Normalization of the canonical-basis matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `Φ(ω̂^(F)(1)) = ω̂(1)`.
    FirstLimitVector,
    /// `Φ((c_k^(F))^{-1} ω̂_k^(F)) = γ_k z^{μ_k} c_k^{-1} ω̂_k`.
    Kedlaya,
}

/// The constants that determine the canonical-basis matrix for every lift.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueData {
    pub mode: Mode,
    pub s: usize,
    /// `Ψ^[s]_0, …, Ψ^[s]_{s−1}` of `(a; b)`; empty in hypothesis mode.
    pub psi: Vec<PAdic>,
    /// Column constants: `1` for the limit vectors, `γ'_k/γ'_1` (degenerate)
    /// or `γ_k c_k^(F)/c_k` (hypothesis) for the eigenvectors.
    pub scale: Vec<PAdic>,
    pub mu: Vec<i64>,
    /// `1 − b_k^(1)`, the exponent of `c` on eigen-columns.
    #[serde(skip)]
    pub c_exponent: Vec<Ratio<i64>>,
}

/// A Frobenius matrix together with its data and conventions.
#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusMatrix {
    pub target: HGDatum,
    pub source: HGDatum,
    pub c: PAdic,
    pub mode: Mode,
    pub basis: BasisTag,
    pub normalization: Normalization,
    pub matrix: SeriesMatrix<PAdic>,
}

/// `γ'_1` of the degenerate residue formula,
/// `p^{−s} Π_{i>s} (1 − b_i^(1))/(1 − b_i) Π_i Γ_p(b_i)/Γ_p(a_i)`.
pub fn gamma_prime_1(sf: &SpecialFunctions, d: &HGDatum, m: u32) -> Result<PAdic> {
    let p = d.prime();
    let one = Ratio::<i64>::one();
    let bf = d.b_frob();
    let mut rat = one;
    for i in d.s()..d.n() {
        rat = rat * (one - bf[i]) / (one - d.b()[i]);
    }
    let mut acc = PAdic::from_ratio(p, &rat, max_precision(p))?.shift(-(d.s() as i64));
    for (a, b) in d.a().iter().zip(d.b()) {
        acc = acc.mul_p(&sf.gamma_rational(b, m)?).div_p(&sf.gamma_rational(a, m)?)?;
    }
    Ok(acc)
}

/// `γ'_k = γ_k ((b_k^(1) − 1)/(b_k − 1))^s Π_{i>s, i≠k} (b_k^(1) − b_i^(1))/(b_k − b_i)`
/// for an eigen-index `k ≥ s` (zero-based).
pub fn gamma_prime_k(sf: &SpecialFunctions, d: &HGDatum, k: usize, m: u32) -> Result<PAdic> {
    let p = d.prime();
    let one = Ratio::<i64>::one();
    let (b, bf) = (d.b(), d.b_frob());
    let mut rat = ((bf[k] - one) / (b[k] - one)).pow(d.s() as i32);
    for i in d.s()..d.n() {
        if i != k {
            rat = rat * (bf[k] - bf[i]) / (b[k] - b[i]);
        }
    }
    Ok(gamma_k(sf, d, k, m)?.mul_p(&PAdic::from_ratio(p, &rat, max_precision(p))?))
}

/// Computes the residue constants of a datum in the given mode.
pub fn residue_data(sf: &SpecialFunctions, d: &HGDatum, mode: Mode, m: u32) -> Result<ResidueData> {
    d.validate(mode)?;
    let p = d.prime();
    let (n, s) = (d.n(), d.s());
    let one = PAdic::from_int(p, 1);
    let bf = d.b_frob();
    let mut scale = vec![one; n];
    let psi = match mode {
        Mode::Degenerate => {
            let g1 = gamma_prime_1(sf, d, m)?;
            for (k, slot) in scale.iter_mut().enumerate().skip(s) {
                *slot = gamma_prime_k(sf, d, k, m)?.div_p(&g1)?;
            }
            let max = s.saturating_sub(1);
            let mut v = sf.psi_coefficients(d.a(), d.b(), max, PsiVariant::Bracket(s), m)?.values;
            v.truncate(s);
            v
        }
        Mode::Hypothesis => {
            for (k, slot) in scale.iter_mut().enumerate() {
                let ratio = d.c_k_frob(k) / d.c_k(k);
                *slot = gamma_k(sf, d, k, m)?.mul_p(&PAdic::from_ratio(p, &ratio, max_precision(p))?);
            }
            Vec::new()
        }
    };
    Ok(ResidueData {
        mode,
        s,
        psi,
        scale,
        mu: (0..n).map(|k| if k < s { 0 } else { d.mu(k) }).collect(),
        c_exponent: bf.iter().map(|x| Ratio::one() - x).collect(),
    })
}

/// `(−p^{−1} log c)^i / i!` for `i = 0..len`.
pub fn log_c_powers(c: &PAdic, len: usize) -> Result<Vec<PAdic>> {
    let p = c.prime();
    let lam = c.iwasawa_log()?.shift(-1).neg_p();
    exp_generating(&std::iter::once(lam).chain(std::iter::repeat(PAdic::zero(p))).take(len.saturating_sub(1)).collect::<Vec<_>>(), p)
}

/// `c^e` for `c ∈ 1 + pZ_p` and a p-integral rational `e`.
fn c_power(c: &PAdic, e: &Ratio<i64>) -> Result<PAdic> {
    let p = c.prime();
    c.pow_padic(&PAdic::from_ratio(p, e, max_precision(p))?)
}

/// Assembles the canonical-basis matrix for the lift `c z^p` modulo `z^T`.
pub fn assemble(data: &ResidueData, c: &PAdic, terms: usize) -> Result<SeriesMatrix<PAdic>> {
    let p = c.prime();
    let n = data.scale.len();
    let s = data.s;
    let zero = PAdic::zero(p);
    let mut coeffs = vec![Mat::zeros(&zero, n, n); terms];
    if s > 0 {
        let e = log_c_powers(c, s)?;
        // entry (k, m) = p^{m} Σ_{i+j=m−k} e_i Ψ_j (zero-based k ≤ m < s)
        for mcol in 0..s {
            for k in 0..=mcol {
                let mut acc = PAdic::zero(p);
                for i in 0..=(mcol - k) {
                    acc = acc.add_p(&e[i].mul_p(&data.psi[mcol - k - i]));
                }
                let v = acc.shift(mcol as i64).mul_p(&data.scale[mcol]);
                coeffs[0].set(k, mcol, v);
            }
        }
    }
    for k in s..n {
        let mu = data.mu[k];
        if mu < 0 {
            return Err(Error::InvalidInput(format!("negative exponent μ_{} = {mu}", k + 1)));
        }
        if (mu as usize) < terms {
            let v = data.scale[k].mul_p(&c_power(c, &data.c_exponent[k])?);
            coeffs[mu as usize].set(k, k, v);
        }
    }
    Ok(SeriesMatrix::from_coefficients(coeffs))
}

/// The canonical-basis Frobenius matrix for the lift `τ(z) = c z^p`.
pub fn residue_matrix(
    sf: &SpecialFunctions,
    d: &HGDatum,
    c: &PAdic,
    mode: Mode,
    terms: usize,
    m: u32,
) -> Result<FrobeniusMatrix> {
    let data = residue_data(sf, d, mode, m)?;
    Ok(FrobeniusMatrix {
        target: d.clone(),
        source: d.frobenius_source(),
        c: *c,
        mode,
        basis: BasisTag::OmegaHat,
        normalization: match mode {
            Mode::Degenerate => Normalization::FirstLimitVector,
            Mode::Hypothesis => Normalization::Kedlaya,
        },
        matrix: assemble(&data, c, terms)?,
    })
}

/// Transports a canonical-basis matrix for the lift `z^p` to the lift
/// `c' z^p`: eigen-columns scale by `c'^{1−b_k^(1)}` and the limit columns
/// mix by `Φ_τ(ω̂^(F)(m)) = Σ_i (−log c')^i/i! Φ_σ(ω̂^(F)(m−i))`.
pub fn change_frobenius(fm: &FrobeniusMatrix, c_new: &PAdic) -> Result<FrobeniusMatrix> {
    let p = fm.target.prime();
    if fm.basis != BasisTag::OmegaHat {
        return Err(Error::InvalidInput("change_frobenius expects a canonical-basis matrix".into()));
    }
    if !fm.c.sub_p(&PAdic::from_int(p, 1)).is_zero() {
        return Err(Error::InvalidLift(format!("source matrix has c = {}", fm.c)));
    }
    let log_c = c_new.iwasawa_log()?;
    let n = fm.matrix.dim();
    let s = fm.target.s();
    let bf = fm.target.b_frob();
    let mut weights = vec![PAdic::from_int(p, 1)];
    for i in 1..n.max(1) {
        let w = weights[i - 1].mul_p(&log_c.neg_p()).div_p(&PAdic::from_int(p, i as i64))?;
        weights.push(w);
    }
    let old: Vec<Vec<TruncSeries<PAdic>>> = (0..n).map(|j| fm.matrix.column(j)).collect();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<TruncSeries<PAdic>> = if j < s {
            (0..n)
                .map(|r| {
                    let mut acc = old[j][r].scale(&weights[0]);
                    for i in 1..=j {
                        acc = acc.add(&old[j - i][r].scale(&weights[i]));
                    }
                    acc
                })
                .collect()
        } else {
            let f = c_power(c_new, &(Ratio::one() - bf[j]))?;
            old[j].iter().map(|e| e.scale(&f)).collect()
        };
        cols.push(col);
    }
    let mut out = fm.clone();
    out.c = *c_new;
    out.matrix = SeriesMatrix::from_columns(&cols, fm.matrix.terms());
    Ok(out)
}

/// Converts a canonical-basis matrix into the `D^i ω` bases:
/// `A = S·B·τ(S^(F))^{-1}`.
pub fn to_coordinates(
    fm: &FrobeniusMatrix,
    target: &OmegaBasis,
    source: &OmegaBasis,
    exec: Exec,
) -> Result<FrobeniusMatrix> {
    let p = fm.target.prime();
    let prec = max_precision(p);
    let terms = fm.matrix.terms().min(target.terms()).min(source.terms());
    let s = target.matrix().to_padic(p, prec)?.truncate(terms);
    let sf_inv = source.matrix().inverse()?.to_padic(p, prec)?.truncate(terms);
    let sub = sf_inv.frobenius_substitute(&fm.c)?;
    let a = s.mul_with(&fm.matrix.truncate(terms), exec).mul_with(&sub, exec);
    let mut out = fm.clone();
    out.basis = BasisTag::DPower;
    out.matrix = a;
    Ok(out)
}

/// Outcome of an intertwiner check.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub residual: SeriesMatrix<PAdic>,
    /// Smallest absolute p-adic precision among the residual coefficients.
    pub m_eff: Option<i64>,
    /// Whether every coefficient is certified zero at its precision.
    pub vanishes: bool,
    /// First power of `z` carrying a certified nonzero coefficient.
    pub first_nonzero_order: Option<usize>,
    pub terms: usize,
}

impl ResidualReport {
    fn new(residual: SeriesMatrix<PAdic>) -> Self {
        let vanishes = residual.coefficients().iter().all(|m| m.entries().iter().all(|c| c.is_zero()));
        let first_nonzero_order = residual.first_nonzero_order(i64::MAX);
        let m_eff = residual.min_abs_precision();
        let terms = residual.terms();
        ResidualReport { residual, m_eff, vanishes, first_nonzero_order, terms }
    }
}

/// `D•A + N_H·A − q·A·N_src` where `N_src` is the already substituted
/// source connection and `q` the Frobenius power.
pub fn residual_with(
    a: &SeriesMatrix<PAdic>,
    n_h: &SeriesMatrix<PAdic>,
    n_src_substituted: &SeriesMatrix<PAdic>,
    q: &PAdic,
    exec: Exec,
) -> Result<ResidualReport> {
    if a.dim() != n_h.dim() || a.dim() != n_src_substituted.dim() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}×{}, N_H is {}×{}, N1 is {}×{}",
            a.dim(),
            a.dim(),
            n_h.dim(),
            n_h.dim(),
            n_src_substituted.dim(),
            n_src_substituted.dim()
        )));
    }
    let t = a.terms().min(n_h.terms()).min(n_src_substituted.terms());
    let a = a.truncate(t);
    let lhs = a.euler_d().add(&n_h.truncate(t).mul_with(&a, exec));
    let rhs = a.mul_with(&n_src_substituted.truncate(t), exec).scale(q);
    Ok(ResidualReport::new(lhs.sub(&rhs)))
}

/// `R = D•A + N_H·A − p·A·τ(N1)` for the lift `τ(z) = c z^p`.
pub fn intertwiner_residual(
    a: &SeriesMatrix<PAdic>,
    n_h: &SeriesMatrix<PAdic>,
    n1: &SeriesMatrix<PAdic>,
    c: &PAdic,
) -> Result<ResidualReport> {
    let p = c.prime();
    residual_with(a, n_h, &n1.frobenius_substitute(c)?, &PAdic::from_int(p, p as i64), Exec::default())
}

/// Everything needed to check one datum: bases, companions and matrices.
#[derive(Clone, Debug)]
pub struct IntertwinerCheck {
    pub omega: FrobeniusMatrix,
    pub coordinates: FrobeniusMatrix,
    pub report: ResidualReport,
}

/// Companion matrices of the target and the source as p-adic series.
pub fn companions(d: &HGDatum, terms: usize) -> Result<(SeriesMatrix<PAdic>, SeriesMatrix<PAdic>)> {
    let p = d.prime();
    let prec = max_precision(p);
    let nh = datum_companion(d, terms).n_h.to_padic(p, prec)?;
    let n1 = datum_companion(&d.frobenius_source(), terms).n_h.to_padic(p, prec)?;
    Ok((nh, n1))
}

/// Builds the residue matrix, converts it to coordinates and evaluates the
/// intertwiner residual modulo `z^T`.
pub fn verify_intertwiner(
    sf: &SpecialFunctions,
    d: &HGDatum,
    c: &PAdic,
    terms: usize,
    m: u32,
) -> Result<IntertwinerCheck> {
    let mode = d.mode()?;
    let omega = residue_matrix(sf, d, c, mode, terms, m)?;
    check_data(sf, d, &omega, terms)
}

/// Like [`verify_intertwiner`] for a caller-supplied canonical-basis matrix
/// (used by the negative controls).
pub fn check_data(sf: &SpecialFunctions, d: &HGDatum, omega: &FrobeniusMatrix, terms: usize) -> Result<IntertwinerCheck> {
    let exec = sf.exec();
    let target = omega_hat_basis(d, terms)?;
    let source = omega_hat_basis(&d.frobenius_source(), terms)?;
    let coordinates = to_coordinates(omega, &target, &source, exec)?;
    let (nh, n1) = companions(d, terms)?;
    let p = d.prime();
    let report = residual_with(
        &coordinates.matrix,
        &nh,
        &n1.frobenius_substitute(&omega.c)?,
        &PAdic::from_int(p, p as i64),
        exec,
    )?;
    Ok(IntertwinerCheck { omega: omega.clone(), coordinates, report })
}

/// The coefficients of `Φ_τ(e) − e` on `ω̂(1), …, ω̂(s)` for the extension
/// by the class `e` of `1` in `D-ring/D-ring·P·D`:
/// `Σ_{i+j=s+1−k} (−p^{−1} log c)^i/i! Ψ_j^[s+1](a, b)`.
///
/// Adjoining `D` adds one more parameter pair equal to `1`, which changes
/// neither the polygamma sums nor the correction factor over `b_{s+1..n}`,
/// so `Ψ^[s+1]` is computed from the same sequence as `Ψ^[s]`.
pub fn syntomic_series(sf: &SpecialFunctions, d: &HGDatum, c: &PAdic, m: u32) -> Result<Vec<PAdic>> {
    d.validate(Mode::Degenerate)?;
    let s = d.s();
    let p = d.prime();
    let psi = sf.psi_coefficients(d.a(), d.b(), s, PsiVariant::Bracket(s), m)?.values;
    let e = log_c_powers(c, s + 1)?;
    Ok((1..=s)
        .map(|k| {
            let total = s + 1 - k;
            (0..=total).fold(PAdic::zero(p), |acc, i| acc.add_p(&e[i].mul_p(&psi[total - i])))
        })
        .collect())
}

/// `det B = p^{s(s−1)/2} Π_{k>s} c^{1−b_k^(1)} (γ'_k/γ'_1) · z^{Σ μ_k}`
/// for a degenerate canonical-basis matrix, returned as `(constant, exponent)`.
pub fn determinant_closed_form(data: &ResidueData, c: &PAdic) -> Result<(PAdic, i64)> {
    let s = data.s;
    let mut acc = PAdic::from_int(c.prime(), 1).shift((s * s.saturating_sub(1) / 2) as i64);
    for m in 0..s {
        acc = acc.mul_p(&data.scale[m]);
    }
    let mut exp = 0;
    for k in s..data.scale.len() {
        acc = acc.mul_p(&data.scale[k]).mul_p(&c_power(c, &data.c_exponent[k])?);
        exp += data.mu[k];
    }
    Ok((acc, exp))
}

/// Evaluates every entry at `α`, once with all `T` terms and once with
/// `T/2`; the number of agreeing digits certifies the result.
pub fn evaluate_at_teichmuller(a: &SeriesMatrix<PAdic>, alpha: &PAdic) -> Result<(Mat<PAdic>, i64)> {
    let p = alpha.prime();
    let teich = alpha.is_unit()
        && alpha.residue(1).map_or(false, |r| r != 1)
        && alpha.sub_p(&alpha.pow_i(p as i64)?).is_zero();
    if !teich {
        return Err(Error::BadSpecializationPoint(format!("{alpha}")));
    }
    let t = a.terms();
    let full = a.eval_terms(alpha, t);
    let half = a.eval_terms(alpha, t / 2);
    let mut digits = i64::MAX;
    for (x, y) in full.entries().iter().zip(half.entries()) {
        let agree = x.agreement(y).unwrap_or(i64::MAX);
        digits = digits.min(agree).min(x.abs_precision().unwrap_or(i64::MAX));
    }
    Ok((full, digits))
}

/// A series matrix `A(z)` written modulo `p^k` as `N(z)/(1 − z)^e` with a
/// polynomial numerator.
///
/// Entries of Frobenius matrices are overconvergent rational functions
/// whose only pole in the closed unit disc is at `z = 1`, so modulo a fixed
/// power of `p` a suitable `(1 − z)^e A(z)` is a polynomial.  Evaluating
/// `N(α)/(1 − α)^e` then gives the value at a point of absolute value one,
/// where the series itself does not converge.
#[derive(Clone, Debug, Serialize)]
pub struct ClearedMatrix {
    /// The exponent `e`.
    pub exponent: usize,
    /// The digits `k` the numerator is known to.
    pub digits: i64,
    /// The numerator coefficients `N_0, …, N_deg`.
    pub numerator: Vec<Mat<PAdic>>,
    /// Number of coefficients certified to vanish modulo `p^k` past the
    /// numerator's degree.
    pub vanishing_tail: usize,
}

/// Finds the least `e ≤ T/4` such that `(1 − z)^e A(z)` modulo `p^k` has no
/// nonzero coefficient in the upper half of the truncation.
///
/// Fails with [`Error::PrecisionExhausted`] when some coefficient is not
/// known to `k` digits or when no such exponent exists.
pub fn clear_denominator(a: &SeriesMatrix<PAdic>, k: i64) -> Result<ClearedMatrix> {
    let t = a.terms();
    if a.min_abs_precision().is_some_and(|prec| prec < k) {
        return Err(Error::PrecisionExhausted(format!("coefficients are not known to {k} digits")));
    }
    let vanishes = |m: &Mat<PAdic>| m.entries().iter().all(|c| c.min_valuation().map_or(true, |v| v >= k));
    let mut cur: Vec<Mat<PAdic>> = a.coefficients().to_vec();
    for e in 0..=t / 4 {
        let last = cur.iter().rposition(|m| !vanishes(m));
        let degree = last.unwrap_or(0);
        if degree < t / 2 {
            return Ok(ClearedMatrix {
                exponent: e,
                digits: k,
                numerator: cur[..=degree].iter().map(|m| m.map(|c| c.truncate_abs(k))).collect(),
                vanishing_tail: t - degree - 1,
            });
        }
        for j in (1..t).rev() {
            cur[j] = cur[j].sub(&cur[j - 1]);
        }
    }
    Err(Error::PrecisionExhausted("no denominator (1 − z)^e found within the truncation".into()))
}

impl ClearedMatrix {
    /// `N(α)/(1 − α)^e` for `α` in any coefficient ring; fails with
    /// [`Error::BadSpecializationPoint`] when `1 − α` is not a unit.
    pub fn evaluate<C: Scalar>(&self, alpha: &C) -> Result<Mat<C>> {
        let one = alpha.one_like();
        let denom = one.sub_s(alpha);
        if denom.min_valuation() != Some(0) {
            return Err(Error::BadSpecializationPoint("1 − α is not a unit".into()));
        }
        let inv = denom.inverse_s()?;
        let n = self.numerator[0].rows();
        let mut acc = Mat::zeros(alpha, n, n);
        for m in self.numerator.iter().rev() {
            acc = acc.scale(alpha).add(&m.map(|c| alpha.from_padic_like(c)));
        }
        let mut scale = one;
        for _ in 0..self.exponent {
            scale = scale.mul_s(&inv);
        }
        Ok(acc.scale(&scale))
    }
}

/// The root `u ≡ t (mod p)` of `X² − tX + d` for a unit `t` and `d ≡ 0
/// (mod p)`, by iterating `u ↦ t − d/u`.
pub fn unit_root<C: Scalar>(trace: &C, det: &C) -> Result<C> {
    if trace.min_valuation() != Some(0) {
        return Err(Error::NotAUnit("trace is not a unit".into()));
    }
    if det.min_valuation().is_some_and(|v| v < 1) {
        return Err(Error::InvalidInput("determinant is a unit".into()));
    }
    let mut u = trace.clone();
    // Each step gains at least one digit.
    for _ in 0..=max_precision(trace.prime()) {
        u = trace.sub_s(&det.mul_s(&u.inverse_s()?));
    }
    Ok(u)
}

/// Trace of a square matrix.
pub fn trace<C: Scalar>(m: &Mat<C>) -> C {
    (1..m.rows()).fold(m.get(0, 0).clone(), |acc, i| acc.add_s(m.get(i, i)))
}
