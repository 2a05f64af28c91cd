//! Fixed-precision p-adic numbers.
//!
//! A nonzero [`PAdic`] is `p^val * u` where `u` is a unit known modulo
//! `p^prec`.  The absolute precision of such a value is `val + prec`.
//! Zero comes in two flavours: the exact zero, and the inexact zero
//! `O(p^k)` which records that every digit below `p^k` vanished.
//!
//! Precision propagates pessimistically: a sum is known to the smaller
//! absolute precision of its summands, a product to the smaller relative
//! precision of its factors.  Units are stored in a single machine word,
//! so the relative precision is capped at [`max_precision`].

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{invmod, mulmod, pow_u64, powmod, split_vp_i128, vp_u64};
use crate::error::{Error, Result};

/// Largest relative precision representable for the prime `p`
/// (the largest `k` with `p^k < 2^63`).
pub fn max_precision(p: u64) -> u32 {
    let mut k = 0u32;
    let mut acc: u128 = 1;
    while acc * (p as u128) < (1u128 << 63) {
        acc *= p as u128;
        k += 1;
    }
    k
}

/// An element of `Q_p` known modulo a power of `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PAdic {
    p: u64,
    val: i64,
    unit: u64,
    prec: u32,
    exact_zero: bool,
}

impl PAdic {
    /// The exact zero.
    pub fn zero(p: u64) -> Self {
        PAdic { p, val: 0, unit: 0, prec: 0, exact_zero: true }
    }

    /// The inexact zero `O(p^abs)`.
    pub fn zero_mod(p: u64, abs: i64) -> Self {
        PAdic { p, val: abs, unit: 0, prec: 0, exact_zero: false }
    }

    /// The integer `n`, known to the maximal relative precision.
    pub fn from_int(p: u64, n: i64) -> Self {
        Self::from_i128(p, n as i128, max_precision(p))
    }

    /// The integer `n` with `prec` significant digits.
    pub fn from_i128(p: u64, n: i128, prec: u32) -> Self {
        if n == 0 {
            return Self::zero(p);
        }
        let prec = min(prec, max_precision(p));
        let (v, u) = split_vp_i128(n, p);
        let m = pow_u64(p, prec);
        let unit = u.rem_euclid(m as i128) as u64;
        PAdic { p, val: v as i64, unit, prec, exact_zero: false }
    }

    /// `num/den` with `prec` significant digits.
    pub fn from_rational(p: u64, num: i128, den: i128, prec: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::DenominatorDivisibleByP("zero denominator".into()));
        }
        if prec == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        if num == 0 {
            return Ok(Self::zero(p));
        }
        let prec = min(prec, max_precision(p));
        let (vn, un) = split_vp_i128(num, p);
        let (vd, ud) = split_vp_i128(den, p);
        let m = pow_u64(p, prec);
        let un = un.rem_euclid(m as i128) as u64;
        let ud = ud.rem_euclid(m as i128) as u64;
        let inv = invmod(ud, m).ok_or_else(|| {
            Error::DenominatorDivisibleByP(format!("{num}/{den}"))
        })?;
        Ok(PAdic {
            p,
            val: vn as i64 - vd as i64,
            unit: mulmod(un, inv, m),
            prec,
            exact_zero: false,
        })
    }

    /// A rational number with `prec` significant digits.
    pub fn from_ratio(p: u64, q: &Ratio<i64>, prec: u32) -> Result<Self> {
        Self::from_rational(p, *q.numer() as i128, *q.denom() as i128, prec)
    }

    /// An arbitrary-size rational with `prec` significant digits.
    pub fn from_big_rational(p: u64, q: &BigRational, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        if q.is_zero() {
            return Ok(Self::zero(p));
        }
        let prec = min(prec, max_precision(p));
        let (vn, un) = split_vp_big(q.numer(), p);
        let (vd, ud) = split_vp_big(q.denom(), p);
        let m = pow_u64(p, prec);
        let mb = BigInt::from(m);
        let un = un.mod_floor(&mb).to_u64().unwrap_or(0);
        let ud = ud.mod_floor(&mb).to_u64().unwrap_or(0);
        let inv = invmod(ud, m).ok_or_else(|| Error::DenominatorDivisibleByP(format!("{q}")))?;
        Ok(PAdic { p, val: vn - vd, unit: mulmod(un, inv, m), prec, exact_zero: false })
    }

    /// Builds `p^val * unit` where `unit` is any integer residue modulo
    /// `p^prec` (it is normalized, so it need not be a unit).
    pub fn from_parts(p: u64, val: i64, residue: u64, prec: u32) -> Self {
        let prec = min(prec, max_precision(p));
        let m = pow_u64(p, prec);
        let r = residue % m;
        if r == 0 {
            return Self::zero_mod(p, val + prec as i64);
        }
        let k = vp_u64(r, p);
        PAdic {
            p,
            val: val + k as i64,
            unit: r / pow_u64(p, k),
            prec: prec - k,
            exact_zero: false,
        }
    }

    /// The prime.
    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Whether this is the exact zero.
    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// Whether no nonzero digit is certified (exact or inexact zero).
    pub fn is_zero(&self) -> bool {
        self.exact_zero || self.prec == 0
    }

    /// Valuation; for an inexact zero `O(p^k)` this is the lower bound `k`,
    /// for the exact zero it is `None`.
    pub fn valuation(&self) -> Option<i64> {
        if self.exact_zero {
            None
        } else {
            Some(self.val)
        }
    }

    /// Relative precision (number of certified significant digits).
    pub fn rel_precision(&self) -> u32 {
        self.prec
    }

    /// Absolute precision `val + prec`; `None` for the exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        if self.exact_zero {
            None
        } else {
            Some(self.val + self.prec as i64)
        }
    }

    /// The unit part as an integer modulo `p^prec`.
    pub fn unit_residue(&self) -> u64 {
        self.unit
    }

    /// Base-p digits of the unit, little-endian, of length `prec`.
    pub fn unit_digits(&self) -> Vec<u64> {
        let mut u = self.unit;
        (0..self.prec)
            .map(|_| {
                let d = u % self.p;
                u /= self.p;
                d
            })
            .collect()
    }

    fn abs_or_inf(&self) -> i64 {
        self.abs_precision().unwrap_or(i64::MAX)
    }

    fn check_prime(&self, other: &PAdic) {
        assert_eq!(self.p, other.p, "p-adic numbers over different primes");
    }

    /// Lowers the absolute precision to at most `abs`.
    pub fn truncate_abs(&self, abs: i64) -> PAdic {
        if self.exact_zero {
            return Self::zero_mod(self.p, abs);
        }
        if self.abs_or_inf() <= abs {
            return *self;
        }
        if abs <= self.val {
            return Self::zero_mod(self.p, abs);
        }
        let prec = (abs - self.val) as u32;
        PAdic { unit: self.unit % pow_u64(self.p, prec), prec, ..*self }
    }

    /// Lowers the relative precision to at most `prec`.
    pub fn truncate_rel(&self, prec: u32) -> PAdic {
        if self.is_zero() || self.prec <= prec {
            return *self;
        }
        PAdic { unit: self.unit % pow_u64(self.p, prec), prec, ..*self }
    }

    /// Sum with precision propagation.
    pub fn add_p(&self, other: &PAdic) -> PAdic {
        self.check_prime(other);
        if self.exact_zero {
            return *other;
        }
        if other.exact_zero {
            return *self;
        }
        let p = self.p;
        let abs = min(self.abs_or_inf(), other.abs_or_inf());
        let v = min(self.val, other.val);
        if abs <= v {
            return Self::zero_mod(p, abs);
        }
        let d = (abs - v) as u32;
        let m = pow_u64(p, d);
        let term = |x: &PAdic| -> u64 {
            if x.prec == 0 {
                return 0;
            }
            let shift = (x.val - v) as u32;
            if shift >= d {
                0
            } else {
                mulmod(x.unit % m, pow_u64(p, shift), m)
            }
        };
        let s = (term(self) + term(other)) % m;
        Self::from_parts(p, v, s, d)
    }

    /// Negation.
    pub fn neg_p(&self) -> PAdic {
        if self.is_zero() {
            return *self;
        }
        let m = pow_u64(self.p, self.prec);
        PAdic { unit: m - self.unit, ..*self }
    }

    /// Difference.
    pub fn sub_p(&self, other: &PAdic) -> PAdic {
        self.add_p(&other.neg_p())
    }

    /// Product with precision propagation.
    pub fn mul_p(&self, other: &PAdic) -> PAdic {
        self.check_prime(other);
        if self.exact_zero || other.exact_zero {
            return Self::zero(self.p);
        }
        let val = self.val + other.val;
        let prec = min(self.prec, other.prec);
        if prec == 0 {
            return Self::zero_mod(self.p, val);
        }
        let m = pow_u64(self.p, prec);
        PAdic {
            p: self.p,
            val,
            unit: mulmod(self.unit % m, other.unit % m, m),
            prec,
            exact_zero: false,
        }
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<PAdic> {
        if self.exact_zero {
            return Err(Error::DivisionByZero);
        }
        if self.prec == 0 {
            return Err(Error::PrecisionExhausted(format!(
                "inverting O({}^{})",
                self.p, self.val
            )));
        }
        let m = pow_u64(self.p, self.prec);
        let unit = invmod(self.unit, m).expect("units are invertible");
        Ok(PAdic { val: -self.val, unit, ..*self })
    }

    /// Quotient.
    pub fn div_p(&self, other: &PAdic) -> Result<PAdic> {
        Ok(self.mul_p(&other.inverse()?))
    }

    /// Integer power (negative exponents invert).
    pub fn pow_i(&self, e: i64) -> Result<PAdic> {
        if e < 0 {
            return self.inverse()?.pow_i(-e);
        }
        if e == 0 {
            return Ok(Self::from_int(self.p, 1));
        }
        if self.exact_zero {
            return Ok(*self);
        }
        if self.prec == 0 {
            return Ok(Self::zero_mod(self.p, self.val * e));
        }
        let m = pow_u64(self.p, self.prec);
        Ok(PAdic {
            val: self.val * e,
            unit: powmod(self.unit, e as u64, m),
            ..*self
        })
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> PAdic {
        if self.exact_zero {
            return *self;
        }
        PAdic { val: self.val + k, ..*self }
    }

    /// Residue modulo `p^k` of a p-adic integer, as an integer in `[0, p^k)`.
    /// Fails when the value is not integral or not known modulo `p^k`.
    pub fn residue(&self, k: u32) -> Result<u64> {
        if self.exact_zero {
            return Ok(0);
        }
        if self.val < 0 && self.prec > 0 {
            return Err(Error::NonIntegralArgument(format!("{self}")));
        }
        if self.abs_or_inf() < k as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "residue mod {}^{} of a value known mod {}^{}",
                self.p,
                k,
                self.p,
                self.abs_or_inf()
            )));
        }
        if self.prec == 0 || self.val >= k as i64 {
            return Ok(0);
        }
        let m = pow_u64(self.p, k);
        Ok(mulmod(self.unit % m, pow_u64(self.p, self.val as u32), m))
    }

    /// Number of p-adic digits to which `self` and `other` provably agree
    /// (the valuation of the difference, or its absolute precision when the
    /// difference has no certified nonzero digit).  `None` means both are
    /// the same exact value.
    pub fn agreement(&self, other: &PAdic) -> Option<i64> {
        let d = self.sub_p(other);
        if d.exact_zero {
            None
        } else {
            Some(d.val)
        }
    }

    /// Whether `self ≡ other (mod p^k)` is certified.
    pub fn agrees_mod(&self, other: &PAdic, k: i64) -> bool {
        let d = self.sub_p(other);
        if d.exact_zero {
            return true;
        }
        d.val >= k
    }

    /// Whether this value is certified to be nonzero modulo `p^k`.
    pub fn certified_nonzero_mod(&self, k: i64) -> bool {
        !self.is_zero() && self.val < k
    }

    /// Whether this value is a p-adic unit (valuation 0 with a certified digit).
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// The Teichmüller representative `ω(a)` with `prec` digits, obtained
    /// by iterating `x ↦ x^p` to its fixed point.
    pub fn teichmuller(&self, prec: u32) -> Result<PAdic> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self}")));
        }
        let prec = min(prec, self.prec);
        let m = pow_u64(self.p, prec);
        let mut x = self.unit % m;
        loop {
            let y = powmod(x, self.p, m);
            if y == x {
                break;
            }
            x = y;
        }
        Ok(PAdic { p: self.p, val: 0, unit: x, prec, exact_zero: false })
    }

    /// Iwasawa logarithm of a unit: the power series on `1 + pZ_p`
    /// (`1 + 4Z_2` when `p = 2`), extended by `log ω = 0`.
    pub fn iwasawa_log(&self) -> Result<PAdic> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self}")));
        }
        let p = self.p;
        let v = if p == 2 {
            if self.unit % 4 == 1 {
                *self
            } else {
                self.neg_p()
            }
        } else {
            self.div_p(&self.teichmuller(self.prec)?)?
        };
        let x = v.sub_p(&Self::from_int(p, 1));
        log1p_series(&x)
    }

    /// Exponential of `x` with `v(x) > 1/(p-1)`.
    pub fn exp(&self) -> Result<PAdic> {
        let p = self.p;
        if self.exact_zero {
            return Ok(Self::from_int(p, 1));
        }
        let min_val = if p == 2 { 2 } else { 1 };
        if self.val < min_val {
            return Err(Error::InvalidInput(format!("exp does not converge at {self}")));
        }
        let target = self.abs_or_inf();
        let one = Self::from_int(p, 1);
        let mut sum = one;
        let mut term = one;
        let mut k: i64 = 1;
        loop {
            // the k-th term has valuation ≥ k·v(x) − v(k!) ≥ k·v(x) − (k−1)/(p−1)
            let lower = k * self.val - (k - 1) / (p as i64 - 1);
            if lower >= target {
                break;
            }
            term = term.mul_p(self).div_p(&Self::from_int(p, k))?;
            sum = sum.add_p(&term);
            k += 1;
        }
        Ok(sum.truncate_abs(target))
    }

    /// `self^e` for `self ∈ 1 + pZ_p` and a p-integral exponent `e`,
    /// computed as `exp(e · log self)`.
    pub fn pow_padic(&self, e: &PAdic) -> Result<PAdic> {
        let one = Self::from_int(self.p, 1);
        let x = self.sub_p(&one);
        let ok = if self.p == 2 { x.is_zero() || x.val >= 2 } else { x.is_zero() || x.val >= 1 };
        if !ok {
            return Err(Error::InvalidLift(format!("{self} is not in 1+pZ_p")));
        }
        log1p_series(&x)?.mul_p(e).exp()
    }
}

/// Splits a nonzero big integer as `p^v * u` with `p ∤ u`.
fn split_vp_big(n: &BigInt, p: u64) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut u = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        u = q;
        v += 1;
    }
    if n.is_negative() {
        u = -u;
    }
    (v, u)
}

/// `log(1 + x)` for `x` of positive valuation (at least 2 when `p = 2`).
fn log1p_series(x: &PAdic) -> Result<PAdic> {
    let p = x.p;
    if x.exact_zero {
        return Ok(PAdic::zero(p));
    }
    let target = x.abs_or_inf();
    if x.prec == 0 {
        return Ok(PAdic::zero_mod(p, target));
    }
    let e = x.val;
    if e < 1 || (p == 2 && e < 2) {
        return Err(Error::InvalidInput(format!("log series diverges at 1 + {x}")));
    }
    let mut sum = PAdic::zero(p);
    let mut power = *x;
    let mut k: i64 = 1;
    loop {
        // k·e − ⌊log_p k⌋ bounds the valuation of the k-th term from below
        // and is nondecreasing in k, so the first k reaching the target ends
        // the sum.
        if k * e - ilog(k as u64, p) >= target {
            break;
        }
        let term = power.div_p(&PAdic::from_int(p, k))?;
        sum = if k % 2 == 1 { sum.add_p(&term) } else { sum.sub_p(&term) };
        power = power.mul_p(x);
        k += 1;
    }
    Ok(sum.truncate_abs(target))
}

fn ilog(mut k: u64, p: u64) -> i64 {
    let mut r = 0;
    while k >= p {
        k /= p;
        r += 1;
    }
    r
}

impl Add for PAdic {
    type Output = PAdic;
    fn add(self, rhs: PAdic) -> PAdic {
        self.add_p(&rhs)
    }
}

impl Sub for PAdic {
    type Output = PAdic;
    fn sub(self, rhs: PAdic) -> PAdic {
        self.sub_p(&rhs)
    }
}

impl Mul for PAdic {
    type Output = PAdic;
    fn mul(self, rhs: PAdic) -> PAdic {
        self.mul_p(&rhs)
    }
}

impl Neg for PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        self.neg_p()
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return write!(f, "0");
        }
        if self.prec == 0 {
            return write!(f, "O({}^{})", self.p, self.val);
        }
        write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, self.val, self.p, self.val + self.prec as i64)
    }
}

#[derive(Serialize, Deserialize)]
struct PAdicJson {
    p: u64,
    val: Option<i64>,
    unit: Vec<u64>,
    prec: u32,
}

impl Serialize for PAdic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PAdicJson {
            p: self.p,
            val: self.valuation(),
            unit: self.unit_digits(),
            prec: self.prec,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PAdicJson::deserialize(d)?;
        if j.unit.len() != j.prec as usize {
            return Err(D::Error::custom("unit digit count differs from prec"));
        }
        let Some(val) = j.val else {
            return Ok(PAdic::zero(j.p));
        };
        if j.prec == 0 {
            return Ok(PAdic::zero_mod(j.p, val));
        }
        if j.prec > max_precision(j.p) {
            return Err(D::Error::custom("precision exceeds the word-size cap"));
        }
        let mut unit = 0u64;
        for &digit in j.unit.iter().rev() {
            if digit >= j.p {
                return Err(D::Error::custom("digit out of range"));
            }
            unit = unit * j.p + digit;
        }
        if unit % j.p == 0 {
            return Err(D::Error::custom("leading digit of the unit is zero"));
        }
        Ok(PAdic { p: j.p, val, unit, prec: j.prec, exact_zero: false })
    }
}
