//! Katz's generalized Dwork pencils and brute-force point counting.
//!
//! The pencil is `w_0 x_0^d + … + w_n x_n^d − λ d x_0^{w_0} ⋯ x_n^{w_n} = 0`
//! in `P^n`, with `Σ w_i = d` and `z = λ^{−d}`.  Its invariant part of the
//! middle cohomology is the hypergeometric module of the cancelled lists of
//! `a = (1/d, …, (d−1)/d)` and `b = (1, …, 1, 1/w_0, …, (w_0−1)/w_0, …)`.
//!
//! The Frobenius on the canonical basis is the degenerate-mode residue
//! matrix of the cancelled datum times a root of unity `ε` with
//! `ε^l = 1`, `l = lcm(4, d', d, w_0, …, w_n)`.  The value of `ε` is not
//! determined here; it is carried symbolically as its order bound.
//!
//! Point counting is exhaustive over `F_{p^e}` and serves as an
//! independent oracle for specialized Frobenius matrices.

use std::sync::Arc;

use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;

use crate::arith::{gcd, is_prime, lcm};
use crate::cyclo::{CycloElement, CycloRing};
use crate::dirichlet::log_term;
use crate::error::{Error, Result};
use crate::frobenius::{residue_matrix, FrobeniusMatrix};
use crate::hypergeom::{HGDatum, Mode};
use crate::padic::PAdic;
use crate::par::{check_budget, map_chunks, Exec};
use crate::special::{PsiVariant, SpecialFunctions};

/// A generalized Dwork pencil with its parameter lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilSpec {
    pub n: usize,
    pub d: u64,
    pub w: Vec<u64>,
    pub p: u64,
    /// `(1/d, …, (d−1)/d)`.
    #[serde(serialize_with = "ser_ratios")]
    pub a: Vec<Ratio<i64>>,
    /// `n` ones followed by `j/w_i` for `0 < j < w_i`.
    #[serde(serialize_with = "ser_ratios")]
    pub b: Vec<Ratio<i64>>,
    /// `a` with the entries shared with `b` removed.
    #[serde(serialize_with = "ser_ratios")]
    pub a_cancelled: Vec<Ratio<i64>>,
    /// `b` with the entries shared with `a` removed.
    #[serde(serialize_with = "ser_ratios")]
    pub b_cancelled: Vec<Ratio<i64>>,
    /// Number of ones in `b`, always `n`.
    pub s: usize,
}

fn ser_ratios<S: serde::Serializer>(v: &[Ratio<i64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Builds the parameter lists of the pencil `(n, d, w)` at the prime `p`.
pub fn katz_lists(n: usize, d: u64, w: &[u64], p: u64) -> Result<PencilSpec> {
    if n < 2 || d <= n as u64 {
        return Err(Error::BadWeights(format!("need n ≥ 2 and d > n, got n = {n}, d = {d}")));
    }
    if w.len() != n + 1 || w.iter().any(|&x| x == 0) {
        return Err(Error::BadWeights(format!("need {} positive weights", n + 1)));
    }
    if w.iter().sum::<u64>() != d {
        return Err(Error::BadWeights(format!("weights must sum to d = {d}")));
    }
    if w.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
        return Err(Error::BadWeights("weights must be coprime".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if d % p == 0 || w.iter().any(|&x| x % p == 0) {
        return Err(Error::PDividesParameter(format!("p = {p} divides d or a weight")));
    }
    let a: Vec<Ratio<i64>> = (1..d as i64).map(|j| Ratio::new(j, d as i64)).collect();
    let mut b: Vec<Ratio<i64>> = vec![Ratio::one(); n];
    for &wi in w {
        b.extend((1..wi as i64).map(|j| Ratio::new(j, wi as i64)));
    }
    let (a_cancelled, b_cancelled) = cancel(&a, &b);
    Ok(PencilSpec { n, d, w: w.to_vec(), p, a, b, a_cancelled, b_cancelled, s: n })
}

/// Removes common entries of two lists with multiplicity.
fn cancel(a: &[Ratio<i64>], b: &[Ratio<i64>]) -> (Vec<Ratio<i64>>, Vec<Ratio<i64>>) {
    let mut rest_b = b.to_vec();
    let mut out_a = Vec::new();
    for x in a {
        match rest_b.iter().position(|y| y == x) {
            Some(i) => {
                rest_b.remove(i);
            }
            None => out_a.push(*x),
        }
    }
    (out_a, rest_b)
}

impl PencilSpec {
    /// The length `d'` of the cancelled lists.
    pub fn cancelled_len(&self) -> usize {
        self.a_cancelled.len()
    }

    /// Whether the weights are pairwise coprime, which makes the
    /// non-integral entries of the cancelled `b` list pairwise distinct.
    pub fn pairwise_coprime(&self) -> bool {
        (0..self.w.len()).all(|i| (i + 1..self.w.len()).all(|j| gcd(self.w[i], self.w[j]) == 1))
    }

    /// The bound `l = lcm(4, d', d, w_0, …, w_n)` on the order of `ε`.
    pub fn epsilon_order(&self) -> u64 {
        self.w.iter().fold(lcm(lcm(4, self.cancelled_len() as u64), self.d), |acc, &x| lcm(acc, x))
    }

    /// The hypergeometric datum of the cancelled lists.
    pub fn datum(&self) -> Result<HGDatum> {
        HGDatum::new(self.a_cancelled.clone(), self.b_cancelled.clone(), self.p)
    }

    /// `L = −d p^{−1} log(d^{p−1}) + Σ_{w_i > 1} w_i p^{−1} log(w_i^{p−1})`.
    pub fn l_constant(&self) -> Result<PAdic> {
        let p = self.p;
        let mut acc = log_term(p, self.d)?.mul_p(&PAdic::from_int(p, -(self.d as i64)));
        for &wi in self.w.iter().filter(|&&x| x > 1) {
            acc = acc.add_p(&log_term(p, wi)?.mul_p(&PAdic::from_int(p, wi as i64)));
        }
        Ok(acc)
    }
}

/// A root of unity known only through a bound on its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicRoot {
    /// `ε^order = 1`.
    pub order: u64,
}

/// The Frobenius of a Katz pencil on the canonical basis, up to `ε`.
#[derive(Clone, Debug, Serialize)]
pub struct KatzFrobenius {
    pub spec: PencilSpec,
    /// The matrix of `ε^{−1}Φ`.
    pub frobenius: FrobeniusMatrix,
    pub epsilon: SymbolicRoot,
    pub l_constant: PAdic,
    /// `Ψ^[s]_0, …, Ψ^[s]_{s−1}` of the cancelled lists.
    pub psi_cancelled: Vec<PAdic>,
    /// The plain sequence `Ψ_0, …, Ψ_{s−1}` of the full lists.
    pub psi_full: Vec<PAdic>,
    /// The plain sequence of the cancelled lists; equal entries of `a` and
    /// `b` contribute opposite polygamma sums, so it agrees with `psi_full`.
    pub psi_plain_cancelled: Vec<PAdic>,
    /// `ψ_p^(r)(a', 1)` for odd `r < s`; each vanishes because `a'` is
    /// stable under `x ↦ 1 − x`.
    pub odd_polygamma: Vec<(i64, PAdic)>,
}

impl KatzFrobenius {
    /// Whether the plain full and cancelled `Ψ` sequences agree, `Ψ_1 = L` and
    /// the odd polygamma sums vanish, all modulo `p^k`.
    pub fn structure_holds(&self, k: i64) -> bool {
        let psi_match = self.psi_plain_cancelled.iter().zip(&self.psi_full).all(|(x, y)| x.agrees_mod(y, k));
        let l_match = self.psi_cancelled.get(1).map_or(true, |x| x.agrees_mod(&self.l_constant, k));
        let odd = self.odd_polygamma.iter().all(|(_, v)| v.agrees_mod(&PAdic::zero(v.prime()), k));
        psi_match && l_match && odd
    }
}

/// The Frobenius of the pencil for the lift `z ↦ c z^p` on `terms`
/// coefficients, with `Γ_p` and `ψ̃_p` at `m` digits.
pub fn katz_frobenius(
    sf: &SpecialFunctions,
    spec: &PencilSpec,
    c: &PAdic,
    terms: usize,
    m: u32,
) -> Result<KatzFrobenius> {
    if !spec.pairwise_coprime() {
        return Err(Error::BadWeights("weights must be pairwise coprime".into()));
    }
    let datum = spec.datum()?;
    let frobenius = residue_matrix(sf, &datum, c, Mode::Degenerate, terms, m)?;
    let s = spec.s;
    let len = s.saturating_sub(1);
    let psi = |a: &[Ratio<i64>], b: &[Ratio<i64>], variant: PsiVariant| -> Result<Vec<PAdic>> {
        let mut v = sf.psi_coefficients(a, b, len, variant, m)?.values;
        v.truncate(s);
        Ok(v)
    };
    let psi_cancelled = psi(datum.a(), datum.b(), PsiVariant::Bracket(s))?;
    let psi_plain_cancelled = psi(datum.a(), datum.b(), PsiVariant::Plain)?;
    let psi_full = psi(&spec.a, &spec.b, PsiVariant::Plain)?;
    let ones = vec![Ratio::<i64>::one(); spec.a_cancelled.len()];
    let mut odd_polygamma = Vec::new();
    for r in (1..s as i64).step_by(2) {
        odd_polygamma.push((r, sf.psi_pab(r, &spec.a_cancelled, &ones, m)?));
    }
    Ok(KatzFrobenius {
        spec: spec.clone(),
        frobenius,
        epsilon: SymbolicRoot { order: spec.epsilon_order() },
        l_constant: spec.l_constant()?,
        psi_cancelled,
        psi_full,
        psi_plain_cancelled,
        odd_polygamma,
    })
}

/// The finite field `F_{p^e}`.
///
/// An element is encoded as the integer `Σ c_i p^i` of its coordinates in
/// the power basis of the defining polynomial; multiplication goes through
/// discrete logarithm tables of a primitive element.
#[derive(Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

impl FiniteField {
    /// `F_{p^e}` defined by the first monic irreducible polynomial of
    /// degree `e` in lexicographic order of its coefficients.
    pub fn new(p: u64, e: u32) -> Result<Arc<FiniteField>> {
        let q = Self::order_checked(p, e)?;
        if e == 1 {
            return Self::with_modulus(p, vec![0, 1]);
        }
        for code in 0..q {
            let mut f = digits(code, p, e as usize);
            f.push(1);
            if f[0] != 0 && is_irreducible(&f, p) {
                return Self::with_modulus(p, f);
            }
        }
        unreachable!("irreducible polynomials of every degree exist")
    }

    /// `F_p[t]/f(t)` for a monic `f` irreducible modulo `p` (lowest degree
    /// first).
    pub fn with_modulus(p: u64, f: Vec<u64>) -> Result<Arc<FiniteField>> {
        let e = f.len().saturating_sub(1) as u32;
        let q = Self::order_checked(p, e)?;
        if f[e as usize] != 1 || !is_irreducible(&f, p) {
            return Err(Error::InvalidInput("modulus must be monic and irreducible".into()));
        }
        let mut field = FiniteField { p, e, q, modulus: f, exp: Vec::new(), log: Vec::new() };
        for g in 1..q {
            if let Some((exp, log)) = field.tables_for(g as u32) {
                field.exp = exp;
                field.log = log;
                return Ok(Arc::new(field));
            }
        }
        unreachable!("the multiplicative group is cyclic")
    }

    fn order_checked(p: u64, e: u32) -> Result<u64> {
        if !is_prime(p) || e == 0 {
            return Err(Error::InvalidInput(format!("no field of order {p}^{e}")));
        }
        match p.checked_pow(e) {
            Some(q) if q <= MAX_FIELD_ORDER => Ok(q),
            _ => Err(Error::BudgetExceeded { needed: (p as u128).saturating_pow(e), budget: MAX_FIELD_ORDER as u128 }),
        }
    }

    /// Power tables of `g` when `g` generates the multiplicative group.
    fn tables_for(&self, g: u32) -> Option<(Vec<u32>, Vec<u32>)> {
        let n = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut x = 1u32;
        for k in 0..n {
            if log[x as usize] != u32::MAX {
                return None;
            }
            log[x as usize] = k as u32;
            exp.push(x);
            x = self.mul_poly(x, g);
        }
        Some((exp, log))
    }

    /// Multiplication by schoolbook reduction, used to build the tables.
    fn mul_poly(&self, x: u32, y: u32) -> u32 {
        let (p, e) = (self.p, self.e as usize);
        let (xs, ys) = (digits(x as u64, p, e), digits(y as u64, p, e));
        let mut prod = vec![0u64; 2 * e];
        for (i, a) in xs.iter().enumerate() {
            for (j, b) in ys.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let top = prod[k];
            if top != 0 {
                for i in 0..e {
                    prod[k - e + i] = (prod[k - e + i] + (p - top) * self.modulus[i]) % p;
                }
            }
        }
        encode(&prod[..e], p) as u32
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// The defining polynomial, lowest degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q as u32
    }

    /// The element with the given coordinates.
    pub fn from_coords(&self, c: &[u64]) -> u32 {
        let mut v: Vec<u64> = c.iter().map(|x| x % self.p).collect();
        v.resize(self.e as usize, 0);
        encode(&v, self.p) as u32
    }

    /// The coordinates of `x`.
    pub fn coords(&self, x: u32) -> Vec<u64> {
        digits(x as u64, self.p, self.e as usize)
    }

    /// The image of an integer.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        if self.e == 1 {
            return ((x as u64 + y as u64) % self.p) as u32;
        }
        let (mut x, mut y, mut out, mut place) = (x as u64, y as u64, 0u64, 1u64);
        for _ in 0..self.e {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn neg(&self, x: u32) -> u32 {
        let c: Vec<u64> = self.coords(x).iter().map(|&d| (self.p - d) % self.p).collect();
        encode(&c, self.p) as u32
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let k = (self.log[x as usize] as u64 + self.log[y as usize] as u64) % (self.q - 1);
        self.exp[k as usize]
    }

    /// `x^k` for `k ≥ 0`, with `0^0 = 1`.
    pub fn pow(&self, x: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let l = (self.log[x as usize] as u128 * k as u128) % (self.q - 1) as u128;
        self.exp[l as usize]
    }

    /// The discrete logarithm of a nonzero element to the table generator.
    pub fn log(&self, x: u32) -> Option<u32> {
        (x != 0).then(|| self.log[x as usize])
    }

    /// The Frobenius `x ↦ x^p`.
    pub fn frobenius(&self, x: u32) -> u32 {
        self.pow(x, self.p)
    }

    /// The Teichmüller lift of `x` in the unramified ring `Z_p[t]/f(t)`
    /// defined by any lift of the field's polynomial, obtained as the limit
    /// of `y ↦ y^q`.
    pub fn teichmuller(&self, ring: &Arc<CycloRing>, x: u32) -> Result<CycloElement> {
        let reduced: Vec<u64> = ring.phi().iter().map(|&c| c.rem_euclid(self.p as i64) as u64).collect();
        if ring.prime() != self.p || reduced != self.modulus {
            return Err(Error::InvalidInput("ring modulus differs from the field modulus".into()));
        }
        let mut y = ring.element(self.coords(x).iter().map(|&c| ring.int(c as i64)).collect());
        for _ in 0..=ring.precision() {
            y = y.pow(self.q);
        }
        Ok(y)
    }
}

fn digits(mut x: u64, p: u64, e: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(e);
    for _ in 0..e {
        out.push(x % p);
        x /= p;
    }
    out
}

fn encode(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Irreducibility over `F_p` by trial division by every monic polynomial of
/// degree at most half the degree.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for dd in 1..=deg / 2 {
        for code in 0..p.pow(dd as u32) {
            let mut g = digits(code, p, dd);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let top = r.pop().expect("nonempty");
        if top != 0 {
            let k = r.len() - dg;
            for i in 0..dg {
                r[k + i] = (r[k + i] + (p - top) * g[i] % p) % p;
            }
        }
    }
    r
}

/// Number of projective points `[x_0 : … : x_{vars−1}]` over the field
/// with `f(x) = 0`, by exhaustive enumeration of normalized
/// representatives.
pub fn count_projective_zeros<F>(field: &FiniteField, vars: usize, exec: Exec, f: F) -> Result<u64>
where
    F: Fn(&[u32]) -> u32 + Sync + Send,
{
    let q = field.order();
    let points: u128 = (0..vars as u32).map(|i| (q as u128).pow(i)).sum();
    check_budget(points * vars as u128)?;
    let mut total = 0;
    for lead in 0..vars {
        let free = vars - lead - 1;
        let count = q.pow(free as u32);
        let chunk = (count / 64).max(1024);
        let parts = map_chunks(exec, 0..count, chunk, |range| {
            let mut x = vec![0u32; vars];
            x[lead] = 1;
            let mut hits = 0u64;
            for code in range {
                let mut c = code;
                for slot in x[lead + 1..].iter_mut() {
                    *slot = (c % q) as u32;
                    c /= q;
                }
                if f(&x) == 0 {
                    hits += 1;
                }
            }
            hits
        });
        total += parts.iter().sum::<u64>();
    }
    Ok(total)
}

/// Number of points over `field` of the pencil fiber with parameter `λ`.
///
/// Fails with [`Error::SingularFiber`] when `λ^d = 1`.
pub fn point_count(spec: &PencilSpec, field: &FiniteField, lambda: u32, exec: Exec) -> Result<u64> {
    if field.characteristic() != spec.p {
        return Err(Error::PrimeMismatch(spec.p, field.characteristic()));
    }
    if field.pow(lambda, spec.d) == 1 {
        return Err(Error::SingularFiber(format!("λ^{} = 1", spec.d)));
    }
    let w: Vec<u32> = spec.w.iter().map(|&x| field.from_int(x as i64)).collect();
    let coef = field.neg(field.mul(lambda, field.from_int(spec.d as i64)));
    count_projective_zeros(field, spec.n + 1, exec, |x| {
        let mut acc = 0;
        let mut mono = coef;
        for (i, &xi) in x.iter().enumerate() {
            acc = field.add(acc, field.mul(w[i], field.pow(xi, spec.d)));
            mono = field.mul(mono, field.pow(xi, spec.w[i]));
        }
        field.add(acc, mono)
    })
}

/// `q + 1 − #E(F_q)` for `E: y² = x(x − 1)(x − λ)`, counting affine points
/// pairwise plus the point at infinity.
///
/// Fails with [`Error::SingularFiber`] for `λ ∈ {0, 1}`.
pub fn legendre_trace(field: &FiniteField, lambda: u32) -> Result<i64> {
    if lambda == 0 || lambda == 1 {
        return Err(Error::SingularFiber("λ must differ from 0 and 1".into()));
    }
    let q = field.order();
    check_budget(2 * q as u128)?;
    let mut roots = vec![0u64; q as usize];
    for y in field.elements() {
        roots[field.mul(y, y) as usize] += 1;
    }
    let mut affine = 0u64;
    for x in field.elements() {
        let v = field.mul(field.mul(x, field.sub(x, 1)), field.sub(x, lambda));
        affine += roots[v as usize];
    }
    Ok(q as i64 + 1 - (affine as i64 + 1))
}

/// `a_p` of the Legendre curve `y² = x(x − 1)(x − λ)` over `F_p`.
pub fn legendre_ap(lambda: i64, p: u64) -> Result<i64> {
    let field = FiniteField::new(p, 1)?;
    legendre_trace(&field, field.from_int(lambda))
}

/// The cancelled lists satisfy `a ∖ (a ∩ b) = a'` as multisets and have
/// equal length.
pub fn cancelled_lists_consistent(spec: &PencilSpec) -> bool {
    let removed_from_a = spec.a.len() - spec.a_cancelled.len();
    let removed_from_b = spec.b.len() - spec.b_cancelled.len();
    spec.a_cancelled.len() == spec.b_cancelled.len()
        && removed_from_a == removed_from_b
        && spec.a_cancelled.iter().all(|x| !spec.b_cancelled.contains(x))
}
