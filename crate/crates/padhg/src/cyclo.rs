//! The unramified cyclotomic rings `Z_p[x]/Φ_m(x)` with `p ∤ m`.
//!
//! The class of `x` is a primitive `m`-th root of unity `ζ_m`.  When `Φ_m`
//! is reducible modulo `p` the ring is a product of unramified fields; all
//! arithmetic is still well defined and inverses exist exactly for elements
//! whose reduction is coprime to `Φ_m` modulo `p`.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{gcd, invmod, mulmod, primitive_root, powmod};
use crate::error::{Error, Result};
use crate::padic::{max_precision, PAdic};
use crate::ring::{min_opt, Scalar};

/// Integer coefficients of the cyclotomic polynomial `Φ_m`, lowest degree
/// first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    // x^m − 1 divided by Φ_d for every proper divisor d of m
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = divide_monic(&num, &phi_d);
        }
    }
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        q[k] = c;
        for (i, &di) in den.iter().enumerate() {
            rem[k + i] -= c * di;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// The ring `Z_p[x]/Φ_m(x)` at a fixed working precision.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloRing {
    m: u64,
    p: u64,
    prec: u32,
    phi: Vec<i64>,
}

impl CycloRing {
    /// Creates the ring; fails when `p | m`.
    pub fn new(m: u64, p: u64, prec: u32) -> Result<Arc<CycloRing>> {
        if m == 0 || m % p == 0 {
            return Err(Error::RamifiedExtension { p, m });
        }
        Ok(Arc::new(CycloRing { m, p, prec: prec.min(max_precision(p)), phi: cyclotomic_polynomial(m) }))
    }

    /// The ring `Z_p[x]/f(x)` for a monic integer polynomial `f` (lowest
    /// degree first) whose reduction modulo `p` is irreducible, that is the
    /// unramified extension of degree `deg f`.  Such a ring reports modulus
    /// `0` and has no distinguished root of unity.
    pub fn with_modulus(p: u64, f: Vec<i64>, prec: u32) -> Result<Arc<CycloRing>> {
        if f.len() < 2 || *f.last().expect("nonempty") != 1 {
            return Err(Error::InvalidInput("modulus must be monic of positive degree".into()));
        }
        Ok(Arc::new(CycloRing { m: 0, p, prec: prec.min(max_precision(p)), phi: f }))
    }

    /// The order `m` of `ζ_m`, or `0` for a ring built by
    /// [`CycloRing::with_modulus`].
    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Degree of `Φ_m`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Coefficients of `Φ_m`.
    pub fn phi(&self) -> &[i64] {
        &self.phi
    }

    /// The element with the given coefficients (missing ones are zero).
    pub fn element(self: &Arc<Self>, coeffs: Vec<PAdic>) -> CycloElement {
        let mut c = coeffs;
        let d = self.degree();
        if c.len() < d {
            c.resize(d, PAdic::zero(self.p));
        }
        reduce(self, c)
    }

    /// The constant `x`.
    pub fn constant(self: &Arc<Self>, x: PAdic) -> CycloElement {
        self.element(vec![x])
    }

    pub fn zero(self: &Arc<Self>) -> CycloElement {
        self.constant(PAdic::zero(self.p))
    }

    pub fn one(self: &Arc<Self>) -> CycloElement {
        self.constant(self.int(1))
    }

    /// The integer `n` at the ring's working precision.
    pub fn int(&self, n: i64) -> PAdic {
        PAdic::from_i128(self.p, n as i128, self.prec)
    }

    /// `ζ_m^k` for any integer `k`.
    ///
    /// # Panics
    /// For a ring without a distinguished root of unity.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycloElement {
        assert!(self.m != 0, "ring has no distinguished root of unity");
        let e = k.rem_euclid(self.m as i64) as usize;
        let mut c = vec![PAdic::zero(self.p); e + 1];
        c[e] = self.int(1);
        self.element(c)
    }

    /// The distinguished root of unity `ζ_m` (the class of `x`).
    pub fn zeta(self: &Arc<Self>) -> CycloElement {
        self.zeta_pow(1)
    }

    /// When `m | p − 1`, the Teichmüller root `ω(g)^((p−1)/m)` of `Φ_m` in
    /// `Z_p`, `g` the least primitive root modulo `p`.  Sending `ζ_m` to it
    /// is a ring homomorphism to `Z_p`.
    pub fn padic_root(&self) -> Option<PAdic> {
        if self.m == 0 || (self.p - 1) % self.m != 0 {
            return None;
        }
        let g = primitive_root(self.p);
        let base = PAdic::from_int(self.p, powmod(g, (self.p - 1) / self.m, self.p) as i64);
        base.teichmuller(self.prec).ok()
    }
}

fn reduce(ring: &Arc<CycloRing>, mut c: Vec<PAdic>) -> CycloElement {
    let d = ring.degree();
    let p = ring.p;
    while c.len() > d {
        let top = c.pop().expect("nonempty");
        if top.is_exact_zero() {
            continue;
        }
        let k = c.len() - d;
        for i in 0..d {
            let coef = ring.phi[i];
            if coef != 0 {
                c[k + i] = c[k + i].sub_p(&top.mul_p(&PAdic::from_int(p, coef)));
            }
        }
    }
    CycloElement { ring: ring.clone(), coeffs: c }
}

/// An element of `Z_p[x]/Φ_m(x)` (or its fraction ring).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    ring: Arc<CycloRing>,
    coeffs: Vec<PAdic>,
}

impl CycloElement {
    pub fn ring(&self) -> &Arc<CycloRing> {
        &self.ring
    }

    /// Coordinates in the basis `1, ζ, …, ζ^(deg−1)`.
    pub fn coeffs(&self) -> &[PAdic] {
        &self.coeffs
    }

    fn same_ring(&self, other: &CycloElement) {
        assert!(
            self.ring.m == other.ring.m && self.ring.p == other.ring.p && self.ring.phi == other.ring.phi, "elements of different cyclotomic rings");
    }

    fn with(&self, coeffs: Vec<PAdic>) -> CycloElement {
        CycloElement { ring: self.ring.clone(), coeffs }
    }

    pub fn add(&self, other: &CycloElement) -> CycloElement {
        self.same_ring(other);
        self.with(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add_p(b)).collect())
    }

    pub fn sub(&self, other: &CycloElement) -> CycloElement {
        self.same_ring(other);
        self.with(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub_p(b)).collect())
    }

    pub fn neg(&self) -> CycloElement {
        self.with(self.coeffs.iter().map(|a| a.neg_p()).collect())
    }

    pub fn scale(&self, x: &PAdic) -> CycloElement {
        self.with(self.coeffs.iter().map(|a| a.mul_p(x)).collect())
    }

    pub fn mul(&self, other: &CycloElement) -> CycloElement {
        self.same_ring(other);
        let d = self.coeffs.len();
        let p = self.ring.p;
        let mut prod = vec![PAdic::zero(p); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] = prod[i + j].add_p(&a.mul_p(b));
            }
        }
        reduce(&self.ring, prod)
    }

    pub fn pow(&self, mut e: u64) -> CycloElement {
        let mut result = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// The Frobenius automorphism `ζ ↦ ζ^p`.
    ///
    /// # Panics
    /// For a ring built by [`CycloRing::with_modulus`].
    pub fn frobenius(&self) -> CycloElement {
        assert!(self.ring.m != 0, "frobenius needs a cyclotomic ring");
        let p = self.ring.p;
        let m = self.ring.m as usize;
        let mut c = vec![PAdic::zero(p); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            let e = (i * p as usize) % m;
            c[e] = c[e].add_p(a);
        }
        reduce(&self.ring, c)
    }

    /// The value as a p-adic number when every non-constant coordinate
    /// vanishes at the working precision.
    pub fn as_constant(&self) -> Option<PAdic> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Image under `ζ_m ↦ root` for a root of `Φ_m` in `Q_p`.
    pub fn evaluate_at(&self, root: &PAdic) -> PAdic {
        let mut acc = PAdic::zero(self.ring.p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_p(root).add_p(c);
        }
        acc
    }

    /// Multiplicative inverse by Hensel lifting an inverse modulo `p`.
    pub fn inverse(&self) -> Result<CycloElement> {
        let p = self.ring.p;
        let v = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .filter_map(|c| c.valuation())
            .min()
            .ok_or(Error::DivisionByZero)?;
        let b = self.with(self.coeffs.iter().map(|c| c.shift(-v)).collect());
        let mut residues = Vec::with_capacity(b.coeffs.len());
        for c in &b.coeffs {
            residues.push(c.residue(1).map_err(|_| Error::PrecisionExhausted("inverse needs one digit".into()))?);
        }
        let phi_mod_p: Vec<u64> = self.ring.phi.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        let inv0 = fp_poly_inverse(&residues, &phi_mod_p, p)
            .ok_or_else(|| Error::NonInvertible("reduction is a zero divisor modulo p".into()))?;
        let mut y = self.ring.element(inv0.iter().map(|&c| PAdic::from_int(p, c as i64)).collect());
        let two = self.ring.constant(PAdic::from_int(p, 2));
        let mut digits = 1u32;
        while digits < max_precision(p) {
            y = y.mul(&two.sub(&b.mul(&y)));
            digits *= 2;
        }
        y = y.mul(&two.sub(&b.mul(&y)));
        Ok(y.with(y.coeffs.iter().map(|c| c.shift(-v)).collect()))
    }

    /// Whether the element is certified to vanish modulo `p^k` in every
    /// coordinate.
    pub fn vanishes_mod(&self, k: i64) -> bool {
        self.coeffs.iter().all(|c| c.agrees_mod(&PAdic::zero(c.prime()), k))
    }
}

/// Inverse of `a` in `F_p[x]/(f)`, or `None` if `gcd(a, f) ≠ 1`.
fn fp_poly_inverse(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    fn trim(v: &mut Vec<u64>) {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    }
    fn is_zero(v: &[u64]) -> bool {
        v.iter().all(|&c| c == 0)
    }
    fn sub_mul(a: &[u64], q: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        // a − q·b
        let mut out = a.to_vec();
        let len = q.len() + b.len();
        if out.len() < len {
            out.resize(len, 0);
        }
        for (i, &qi) in q.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + p - mulmod(qi, bj, p)) % p;
            }
        }
        let mut o = out;
        trim(&mut o);
        o
    }
    fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = invmod(b[db], p).expect("nonzero leading coefficient");
        if r.len() < b.len() {
            return (vec![0], r);
        }
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + db], lead_inv, p);
            q[k] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[k + i] = (r[k + i] + p - mulmod(c, bi, p)) % p;
            }
        }
        trim(&mut r);
        (q, r)
    }
    let mut r0 = f.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    if is_zero(&r1) {
        return None;
    }
    let (mut t0, mut t1) = (vec![0u64], vec![1u64]);
    while !is_zero(&r1) {
        let (q, r) = divmod(&r0, &r1, p);
        let t2 = sub_mul(&t0, &q, &t1, p);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    if r0.len() != 1 || r0[0] == 0 {
        return None;
    }
    let c = invmod(r0[0], p)?;
    let (_, rem) = divmod(&t0.iter().map(|&x| mulmod(x, c, p)).collect::<Vec<_>>(), f, p);
    let mut out = rem;
    out.resize(f.len() - 1, 0);
    Some(out)
}

impl Scalar for CycloElement {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.ring.constant(self.ring.int(n))
    }
    fn from_padic_like(&self, x: &PAdic) -> Self {
        self.ring.constant(*x)
    }
    fn add_s(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_s(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_s(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_s(&self) -> Self {
        self.neg()
    }
    fn inverse_s(&self) -> Result<Self> {
        self.inverse()
    }
    fn is_zero_s(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn min_valuation(&self) -> Option<i64> {
        self.coeffs.iter().fold(None, |acc, c| min_opt(acc, c.valuation()))
    }
    fn min_abs_precision(&self) -> Option<i64> {
        self.coeffs.iter().fold(None, |acc, c| min_opt(acc, c.abs_precision()))
    }
    fn prime(&self) -> u64 {
        self.ring.p
    }
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycloElement", 2)?;
        st.serialize_field("m", &self.ring.m)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(i, c)| format!("({c})·ζ^{i}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Multiplicative order of `ζ_m^k`.
pub fn root_order(m: u64, k: i64) -> u64 {
    let k = k.rem_euclid(m as i64) as u64;
    m / gcd(m, k)
}
