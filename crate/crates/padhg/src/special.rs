//! Morita's p-adic gamma function, the p-adic polygamma functions
//! `ψ̃_p^(r)`, the p-adic beta function and the `Ψ_m` coefficient
//! sequences.
//!
//! `Γ_p` and `ψ̃_p^(r)` are the continuous extensions of
//!
//! ```text
//! Γ_p(n)     = (−1)^n Π_{0<k<n, p∤k} k,
//! ψ̃_p^(r)(n) = Σ_{0<k<n, p∤k} k^(−r−1).
//! ```
//!
//! Values are read from prefix tables modulo `p^W` indexed by
//! `n ∈ [0, p^W]`.  For an argument `z`, the table is read at
//! `n₀ ≡ z mod p^W` and again at `n₀ + p^e` where `p^e` is the period
//! the argument's precision allows (`e = W` for exact arguments).  Only
//! the digits on which the two readings agree are returned.  At `e = W`
//! the second reading comes from the exact period identities
//! `T(n + p^W) = T(n)·T(p^W)` and `S(n + p^W) = S(n) + S(p^W)`.
//!
//! Tables live in a [`SpecialFunctions`] context and are built on first
//! use.  Construction is a chunked prefix scan that runs on rayon with the
//! `parallel` feature; the result does not depend on the chunking.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::Ratio;

use crate::arith::{addmod, invmod, mulmod, pow_u64, powmod, vp_u64};
use crate::error::{Error, Result};
use crate::padic::{max_precision, PAdic};
use crate::par::{check_budget, map_chunks, map_indexed, Exec};

/// Guard digits added to the requested precision for polygamma tables.
pub const DEFAULT_POLYGAMMA_GUARD: u32 = 2;

/// Guard digits for gamma tables: `Γ_p mod p^W` only depends on the
/// argument modulo `p^W`.
pub const DEFAULT_GAMMA_GUARD: u32 = 0;

const CHUNK: u64 = 1 << 16;

/// How many digits of a special-function value were certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Certificate {
    /// Digits of the table modulus `p^W`.
    pub table_digits: u32,
    /// `e` such that the second reading was taken at `n₀ + p^e`.
    pub period_digits: u32,
    /// Digits on which both readings agree (capped at `W`).
    pub agreement: u32,
    /// Digits returned.
    pub certified: u32,
}

#[derive(Debug)]
enum TableData {
    Narrow(Vec<u32>),
    Wide(Vec<u64>),
}

/// A prefix table modulo `p^W` of length `p^W + 1`.
#[derive(Debug)]
pub struct Table {
    p: u64,
    digits: u32,
    modulus: u64,
    data: TableData,
}

impl Table {
    fn get(&self, n: u64) -> u64 {
        match &self.data {
            TableData::Narrow(v) => v[n as usize] as u64,
            TableData::Wide(v) => v[n as usize],
        }
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        match &self.data {
            TableData::Narrow(v) => v.len(),
            TableData::Wide(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
}

/// Kind of prefix table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// `Π_{k<n, p∤k} k`.
    Gamma,
    /// `Σ_{k<n, p∤k} k^(−j)` for the given `j` (any integer).
    PowerSum(i64),
}

/// Builds the prefix table of the given kind modulo `p^digits`.
pub fn build_table(p: u64, digits: u32, kind: TableKind, exec: Exec) -> Result<Table> {
    check_budget(crate::arith::pow_u128_saturating(p, digits))?;
    let modulus = pow_u64(p, digits);
    let len = modulus + 1;
    // element values for k in [lo, hi)
    let elements = |r: std::ops::Range<u64>| -> Vec<u64> {
        match kind {
            TableKind::Gamma => r.map(|k| if k % p == 0 { 1 } else { k % modulus }).collect(),
            TableKind::PowerSum(j) => {
                if j <= 0 {
                    let e = (-j) as u64;
                    r.map(|k| if k % p == 0 { 0 } else { powmod(k, e, modulus) }).collect()
                } else {
                    // batch inversion of the units in the chunk
                    let ks: Vec<u64> = r.clone().collect();
                    let mut prefix = Vec::with_capacity(ks.len());
                    let mut acc = 1u64;
                    for &k in &ks {
                        if k % p != 0 {
                            acc = mulmod(acc, k % modulus, modulus);
                        }
                        prefix.push(acc);
                    }
                    let mut inv = invmod(acc, modulus).expect("product of units");
                    let mut out = vec![0u64; ks.len()];
                    for i in (0..ks.len()).rev() {
                        let k = ks[i];
                        if k % p == 0 {
                            continue;
                        }
                        let before = if i == 0 { 1 } else { prefix[i - 1] };
                        let kinv = mulmod(inv, before, modulus);
                        inv = mulmod(inv, k % modulus, modulus);
                        out[i] = powmod(kinv, j as u64, modulus);
                    }
                    out
                }
            }
        }
    };
    let combine = |a: u64, b: u64| -> u64 {
        match kind {
            TableKind::Gamma => mulmod(a, b, modulus),
            TableKind::PowerSum(_) => addmod(a, b, modulus),
        }
    };
    let identity = match kind {
        TableKind::Gamma => 1u64,
        TableKind::PowerSum(_) => 0u64,
    };
    // local inclusive scans of the elements k = 0 .. len − 2
    let locals: Vec<Vec<u64>> = map_chunks(exec, 0..len - 1, CHUNK, |r| {
        let el = elements(r);
        let mut acc = identity;
        el.into_iter()
            .map(|x| {
                acc = combine(acc, x);
                acc
            })
            .collect()
    });
    let mut carries = Vec::with_capacity(locals.len());
    let mut carry = identity;
    for l in &locals {
        carries.push(carry);
        carry = combine(carry, *l.last().expect("nonempty chunk"));
    }
    let narrow = modulus <= u32::MAX as u64;
    let fixed: Vec<Vec<u64>> = map_indexed(exec, locals.len(), |i| locals[i].iter().map(|&x| combine(carries[i], x)).collect());
    let total = len as usize;
    let data = if narrow {
        let mut v = Vec::with_capacity(total);
        v.push(identity as u32);
        for c in &fixed {
            v.extend(c.iter().map(|&x| x as u32));
        }
        TableData::Narrow(v)
    } else {
        let mut v = Vec::with_capacity(total);
        v.push(identity);
        for c in &fixed {
            v.extend_from_slice(c);
        }
        TableData::Wide(v)
    };
    Ok(Table { p, digits, modulus, data })
}

/// Shared state for special-function evaluation at a fixed prime: the
/// lazily built prefix tables.
#[derive(Debug)]
pub struct SpecialFunctions {
    p: u64,
    exec: Exec,
    polygamma_guard: u32,
    gamma_guard: u32,
    tables: Mutex<HashMap<TableKind, Vec<Arc<Table>>>>,
}

fn valuation_of(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        cap
    } else {
        vp_u64(x, p).min(cap)
    }
}

impl SpecialFunctions {
    pub fn new(p: u64) -> Self {
        Self::with_exec(p, Exec::default())
    }

    pub fn with_exec(p: u64, exec: Exec) -> Self {
        SpecialFunctions {
            p,
            exec,
            polygamma_guard: DEFAULT_POLYGAMMA_GUARD,
            gamma_guard: DEFAULT_GAMMA_GUARD,
            tables: Mutex::new(HashMap::new()),
        }
    }

    /// Overrides the guard digits used for polygamma tables.
    pub fn with_polygamma_guard(mut self, g: u32) -> Self {
        self.polygamma_guard = g;
        self
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    /// Working digits used for a request of `m` digits with guard `g`.
    fn working_digits(&self, m: u32, g: u32) -> u32 {
        (m + g).min(max_precision(self.p)).max(1)
    }

    /// A table of the given kind with at least `digits` digits.
    pub fn table(&self, kind: TableKind, digits: u32) -> Result<Arc<Table>> {
        {
            let map = self.tables.lock().expect("table cache poisoned");
            if let Some(list) = map.get(&kind) {
                if let Some(t) = list.iter().filter(|t| t.digits >= digits).min_by_key(|t| t.digits) {
                    return Ok(t.clone());
                }
            }
        }
        let t = Arc::new(build_table(self.p, digits, kind, self.exec)?);
        let mut map = self.tables.lock().expect("table cache poisoned");
        map.entry(kind).or_default().push(t.clone());
        Ok(t)
    }

    /// Digits `W` and residue `n₀` for an argument, with the period digits.
    fn locate(&self, z: &PAdic, w: u32) -> Result<(u64, u32)> {
        if z.prime() != self.p {
            return Err(Error::PrimeMismatch(z.prime(), self.p));
        }
        if let Some(v) = z.valuation() {
            if v < 0 && !z.is_zero() {
                return Err(Error::NonIntegralArgument(format!("{z}")));
            }
        }
        let abs = z.abs_precision().unwrap_or(i64::MAX).max(0);
        let e = (abs.min(w as i64)) as u32;
        if e == 0 {
            return Err(Error::PrecisionExhausted(format!("argument {z} has no known digit")));
        }
        Ok((z.residue(e)?, e))
    }

    fn read(&self, kind: TableKind, z: &PAdic, m: u32, guard: u32) -> Result<(PAdic, Certificate)> {
        let p = self.p;
        let w = self.working_digits(m, guard);
        let (n0, e) = self.locate(z, w)?;
        let t = self.table(kind, w)?;
        let modw = pow_u64(p, w);
        let reduce = |x: u64| x % modw;
        let sign = |n: u64, x: u64| -> u64 {
            if n % 2 == 1 {
                (modw - x) % modw
            } else {
                x
            }
        };
        let tmod = t.modulus;
        let (v1, v2) = match kind {
            TableKind::Gamma => {
                let a = t.get(n0);
                let first = sign(n0, reduce(a));
                let second = if e == t.digits {
                    let b = mulmod(a, t.get(tmod), tmod);
                    sign(n0 + tmod, reduce(b))
                } else {
                    let n1 = n0 + pow_u64(p, e);
                    sign(n1, reduce(t.get(n1)))
                };
                (first, second)
            }
            TableKind::PowerSum(_) => {
                let a = t.get(n0);
                let second = if e == t.digits {
                    addmod(a, t.get(tmod), tmod)
                } else {
                    t.get(n0 + pow_u64(p, e))
                };
                (reduce(a), reduce(second))
            }
        };
        let agreement = valuation_of((v1 + modw - v2) % modw, p, w);
        let certified = agreement.min(m);
        if certified == 0 {
            return Err(Error::PrecisionExhausted(format!("no digit certified for argument {z}")));
        }
        let cert = Certificate { table_digits: w, period_digits: e, agreement, certified };
        Ok((PAdic::from_parts(p, 0, v1 % pow_u64(p, certified), certified), cert))
    }

    /// `Γ_p(z)` modulo `p^m` with its certificate.
    pub fn gamma_certified(&self, z: &PAdic, m: u32) -> Result<(PAdic, Certificate)> {
        self.read(TableKind::Gamma, z, m, self.gamma_guard)
    }

    /// `Γ_p(z)` modulo `p^m` (fewer digits if the certificate says so).
    pub fn gamma(&self, z: &PAdic, m: u32) -> Result<PAdic> {
        Ok(self.gamma_certified(z, m)?.0)
    }

    /// `Γ_p(q)` for a rational `q ∈ Z_(p)`.
    pub fn gamma_rational(&self, q: &Ratio<i64>, m: u32) -> Result<PAdic> {
        let w = self.working_digits(m, self.gamma_guard);
        self.gamma(&self.rational(q, w)?, m)
    }

    /// `ψ̃_p^(r)(z)` modulo `p^m` with its certificate.  Negative `r` gives
    /// the continuous extension of `Σ k^(−r−1)` as well.
    pub fn polygamma_certified(&self, r: i64, z: &PAdic, m: u32) -> Result<(PAdic, Certificate)> {
        self.read(TableKind::PowerSum(r + 1), z, m, self.polygamma_guard)
    }

    pub fn polygamma(&self, r: i64, z: &PAdic, m: u32) -> Result<PAdic> {
        Ok(self.polygamma_certified(r, z, m)?.0)
    }

    /// `ψ̃_p^(r)(q)` for a rational `q ∈ Z_(p)`.
    pub fn polygamma_rational(&self, r: i64, q: &Ratio<i64>, m: u32) -> Result<PAdic> {
        let w = self.working_digits(m, self.polygamma_guard);
        self.polygamma(r, &self.rational(q, w)?, m)
    }

    /// A rational as a p-adic number with `digits` digits, rejecting
    /// non-integral values.
    pub fn rational(&self, q: &Ratio<i64>, digits: u32) -> Result<PAdic> {
        let x = PAdic::from_ratio(self.p, q, digits)?;
        if x.valuation().is_some_and(|v| v < 0) {
            return Err(Error::NonIntegralArgument(format!("{q}")));
        }
        Ok(x)
    }

    /// `B_p(x, y) = Γ_p(x)Γ_p(y)/Γ_p(x+y)`.
    pub fn beta(&self, x: &PAdic, y: &PAdic, m: u32) -> Result<PAdic> {
        let gx = self.gamma(x, m)?;
        let gy = self.gamma(y, m)?;
        let gxy = self.gamma(&x.add_p(y), m)?;
        gx.mul_p(&gy).div_p(&gxy)
    }

    /// `ψ_p^(r)(a, b) = Σ_i ψ̃^(r)(a_i) − ψ̃^(r)(b_i)`.
    pub fn psi_pab(&self, r: i64, a: &[Ratio<i64>], b: &[Ratio<i64>], m: u32) -> Result<PAdic> {
        let mut acc = PAdic::zero(self.p);
        for x in a {
            acc = acc.add_p(&self.polygamma_rational(r, x, m)?);
        }
        for x in b {
            acc = acc.sub_p(&self.polygamma_rational(r, x, m)?);
        }
        Ok(acc)
    }

    /// The coefficients `Ψ_0 … Ψ_max` (see [`PsiCoefficients`]).
    pub fn psi_coefficients(
        &self,
        a: &[Ratio<i64>],
        b: &[Ratio<i64>],
        max_m: usize,
        variant: PsiVariant,
        m: u32,
    ) -> Result<PsiCoefficients> {
        let p = self.p;
        let mut c = Vec::with_capacity(max_m);
        for r in 1..=max_m {
            c.push(self.psi_pab(r as i64 - 1, a, b, m)?);
        }
        let mut values = exp_generating(&c, p)?;
        if let PsiVariant::Bracket(s) = variant {
            let factor = bracket_factor(b, s, max_m, p, m)?;
            values = series_mul(&values, &factor, p);
        }
        Ok(PsiCoefficients { a: a.to_vec(), b: b.to_vec(), variant, values })
    }
}

/// Which `Ψ` sequence to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum PsiVariant {
    /// `Ψ_m(a, b)`.
    Plain,
    /// `Ψ_m^[s](a, b)`, corrected by `Π_{j>s}(1 − xβ_j^F)/(1 − xβ_j)`.
    Bracket(usize),
}

/// Coefficients `Ψ_0 … Ψ_max` of
/// `exp(Σ_{r≥1} ψ_p^(r−1)(a,b) x^r / r)` (times the bracket factor).
#[derive(Clone, Debug, serde::Serialize)]
pub struct PsiCoefficients {
    #[serde(skip)]
    pub a: Vec<Ratio<i64>>,
    #[serde(skip)]
    pub b: Vec<Ratio<i64>>,
    pub variant: PsiVariant,
    pub values: Vec<PAdic>,
}

/// `E_m` with `m E_m = Σ_{r=1}^m c_r E_{m−r}`, `E_0 = 1`, for
/// `c = [c_1, c_2, …]`.
pub fn exp_generating(c: &[PAdic], p: u64) -> Result<Vec<PAdic>> {
    let mut e = vec![PAdic::from_int(p, 1)];
    for m in 1..=c.len() {
        let mut acc = PAdic::zero(p);
        for r in 1..=m {
            acc = acc.add_p(&c[r - 1].mul_p(&e[m - r]));
        }
        e.push(acc.div_p(&PAdic::from_int(p, m as i64))?);
    }
    Ok(e)
}

fn series_mul(f: &[PAdic], g: &[PAdic], p: u64) -> Vec<PAdic> {
    (0..f.len())
        .map(|k| {
            let mut acc = PAdic::zero(p);
            for i in 0..=k {
                acc = acc.add_p(&f[i].mul_p(&g[k - i]));
            }
            acc
        })
        .collect()
}

/// Coefficients up to `x^max_m` of `Π_{j>s} (1 − xβ_j^F)/(1 − xβ_j)` with
/// `β_j = 1/(b_j − 1)` and `β_j^F = p^(−1)/(b_j^(1) − 1)`.
pub fn bracket_factor(b: &[Ratio<i64>], s: usize, max_m: usize, p: u64, m: u32) -> Result<Vec<PAdic>> {
    let one = Ratio::from_integer(1);
    let mut out = vec![PAdic::zero(p); max_m + 1];
    out[0] = PAdic::from_int(p, 1);
    for bj in b.iter().skip(s) {
        let bf = crate::hypergeom::dwork_prime(bj, p, 1)?;
        if *bj == one || bf == one {
            return Err(Error::BracketPoleAtOne(format!("{bj}")));
        }
        let beta = PAdic::from_ratio(p, &(one / (bj - one)), m)?;
        let beta_f = PAdic::from_ratio(p, &(one / (bf - one)), m)?.shift(-1);
        // (1 − xβ^F) Σ_i β^i x^i
        let mut geo = vec![PAdic::from_int(p, 1)];
        for i in 1..=max_m {
            geo.push(geo[i - 1].mul_p(&beta));
        }
        let mut fac = geo.clone();
        for i in 1..=max_m {
            fac[i] = fac[i].sub_p(&beta_f.mul_p(&geo[i - 1]));
        }
        out = series_mul(&out, &fac, p);
    }
    Ok(out)
}

/// `Γ_p(z)` modulo `p^m` with a throwaway context.
pub fn gamma_p(z: &PAdic, m: u32) -> Result<PAdic> {
    SpecialFunctions::new(z.prime()).gamma(z, m)
}

/// `ψ̃_p^(r)(z)` modulo `p^m` with a throwaway context.
pub fn polygamma(r: i64, z: &PAdic, m: u32) -> Result<PAdic> {
    SpecialFunctions::new(z.prime()).polygamma(r, z, m)
}

/// `B_p(x, y)` modulo `p^m` with a throwaway context.
pub fn beta_p(x: &PAdic, y: &PAdic, m: u32) -> Result<PAdic> {
    SpecialFunctions::new(x.prime()).beta(x, y, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn gamma_small_integers() {
        let sf = SpecialFunctions::new(7);
        let g = |n: i64| sf.gamma(&PAdic::from_int(7, n), 4).unwrap();
        assert!(g(1).agrees_mod(&PAdic::from_int(7, -1), 4));
        assert!(g(2).agrees_mod(&PAdic::from_int(7, 1), 4));
        assert!(g(3).agrees_mod(&PAdic::from_int(7, -2), 4));
        assert!(g(0).agrees_mod(&PAdic::from_int(7, 1), 4));
    }

    #[test]
    fn polygamma_vanishes_at_zero_and_one() {
        let sf = SpecialFunctions::new(5);
        for rr in 0..3 {
            assert!(sf.polygamma(rr, &PAdic::from_int(5, 0), 5).unwrap().is_zero());
            assert!(sf.polygamma(rr, &PAdic::from_int(5, 1), 5).unwrap().is_zero());
        }
    }

    #[test]
    fn sequential_and_parallel_tables_agree() {
        let a = build_table(5, 5, TableKind::PowerSum(2), Exec::Sequential).unwrap();
        let b = build_table(5, 5, TableKind::PowerSum(2), Exec::Parallel).unwrap();
        assert!((0..a.len() as u64).all(|n| a.get(n) == b.get(n)));
        let direct: u64 = (1..40u64).filter(|k| k % 5 != 0).map(|k| powmod(invmod(k, 3125).unwrap(), 2, 3125)).sum::<u64>() % 3125;
        assert_eq!(a.get(40), direct);
    }

    #[test]
    fn exp_generating_second_coefficient() {
        let p = 7;
        let c1 = PAdic::from_int(p, 3);
        let c2 = PAdic::from_int(p, 5);
        let e = exp_generating(&[c1, c2], p).unwrap();
        // E_2 = c_1²/2 + c_2/2
        let expected = PAdic::from_rational(p, 14, 2, 10).unwrap();
        assert!(e[2].agrees_mod(&expected, 10));
    }

    #[test]
    fn non_integral_argument() {
        let sf = SpecialFunctions::new(5);
        assert!(matches!(sf.gamma_rational(&r(1, 5), 3), Err(Error::NonIntegralArgument(_))));
    }
}
