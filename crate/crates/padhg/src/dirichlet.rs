//! Dirichlet characters and p-adic L-values expressed through polygamma
//! sums.
//!
//! For a primitive character `χ` of conductor `f > 1` prime to `p` and any
//! `N` divisible by `f` and prime to `p`,
//!
//! ```text
//! L_p(r, χω^(1−r)) = −N^(−r) Σ_{k=1}^{N−1} χ(k) ψ̃_p^(r−1)(k/N),
//! ```
//!
//! and for the trivial character
//! `(N − N^r) L_p(r, ω^(1−r)) = Σ_{k=1}^{N−1} ψ̃_p^(r−1)(k/N)` when `r ≠ 1`.
//! Both serve as the definition of the L-values computed here.
//!
//! Characters modulo `N` are built from generators of the groups
//! `(Z/l^k)^×` (for `l = 2`: `−1` and `5`), combined through the Chinese
//! remainder theorem, and enumerated lexicographically in the exponents of
//! these generators.  Values are stored as exponents of `ζ_E`, `E` the
//! exponent of `(Z/N)^×`.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::{euler_phi, factorize, gcd, invmod, is_prime, lcm, powmod, primitive_root};
use crate::cyclo::{CycloElement, CycloRing};
use crate::error::{Error, Result};
use crate::padic::PAdic;
use crate::series::Mat;
use crate::special::SpecialFunctions;

/// Largest modulus accepted (trial-division factorization and value tables).
pub const MAX_MODULUS: u64 = 1_000_000;

/// A generator of one cyclic factor of `(Z/N)^×`, lifted to `Z/N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    /// The prime power the generator belongs to.
    pub prime_power: u64,
    /// The generator as a residue modulo `N`.
    pub residue: u64,
    /// Its multiplicative order.
    pub order: u64,
}

/// The generators of `(Z/N)^×`, ordered by prime and then as listed for 2.
pub fn generators(n: u64) -> Vec<Generator> {
    let mut out = Vec::new();
    for (l, k) in factorize(n) {
        let q = l.pow(k);
        let rest = n / q;
        let lift = |g: u64| -> u64 {
            // x ≡ g mod q, x ≡ 1 mod rest
            if rest == 1 {
                return g % q;
            }
            let inv = invmod(rest % q, q).expect("coprime factors");
            let t = (g % q + q - 1) % q * inv % q;
            (1 + rest * t) % n
        };
        if l == 2 {
            if k >= 2 {
                out.push(Generator { prime_power: q, residue: lift(q - 1), order: 2 });
            }
            if k >= 3 {
                out.push(Generator { prime_power: q, residue: lift(5), order: q / 4 });
            }
        } else {
            let mut g = primitive_root(l);
            if k >= 2 && powmod(g, l - 1, l * l) == 1 {
                g += l;
            }
            out.push(Generator { prime_power: q, residue: lift(g), order: q / l * (l - 1) });
        }
    }
    out
}

/// A Dirichlet character modulo `N`.
#[derive(Clone, Debug, Serialize)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub conductor: u64,
    /// Order of the character.
    pub order: u64,
    /// Exponent `E` of `(Z/N)^×`; values are powers of `ζ_E`.
    pub exponent: u64,
    /// Exponents of the images of the generators, in units of `ζ_{order_i}`.
    pub generator_exponents: Vec<u64>,
    /// `χ(k)` as an exponent of `ζ_E` for `0 ≤ k < N`, `None` when
    /// `gcd(k, N) > 1`.
    pub values: Vec<Option<u64>>,
}

impl DirichletCharacter {
    /// `χ(k)` as an exponent of `ζ_E`.
    pub fn value_exponent(&self, k: i64) -> Option<u64> {
        self.values[k.rem_euclid(self.modulus as i64) as usize]
    }

    /// Whether the character is trivial.
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Value of the associated primitive character at `k`, as an exponent
    /// of `ζ_E` (`None` when `gcd(k, f) > 1`).
    pub fn primitive_value_exponent(&self, k: i64) -> Option<u64> {
        let f = self.conductor as i64;
        let k = k.rem_euclid(f);
        if gcd(k as u64, self.conductor) != 1 {
            return None;
        }
        let mut x = k;
        loop {
            if gcd(x as u64, self.modulus) == 1 {
                return self.value_exponent(x);
            }
            x += f;
        }
    }

    /// The value `ζ_E^e` as an element of a ring `cyclo(m)` with `E | m`.
    pub fn root_in(&self, ring: &Arc<CycloRing>, e: u64) -> CycloElement {
        assert_eq!(ring.modulus() % self.exponent, 0, "ring does not contain the character values");
        ring.zeta_pow((e * (ring.modulus() / self.exponent)) as i64)
    }

    /// Character values as elements of the given ring (zero where undefined).
    pub fn value_in(&self, ring: &Arc<CycloRing>, k: i64) -> CycloElement {
        match self.value_exponent(k) {
            Some(e) => self.root_in(ring, e),
            None => ring.zero(),
        }
    }
}

fn validate_modulus(n: u64, p: u64) -> Result<()> {
    if n == 0 || n > MAX_MODULUS {
        return Err(Error::BadModulus(format!("modulus {n} outside [1, {MAX_MODULUS}]")));
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if n % p == 0 {
        return Err(Error::ModulusDivisibleByP(format!("{p} divides {n}")));
    }
    Ok(())
}

/// Exponent of the group `(Z/N)^×`.
pub fn group_exponent(n: u64) -> u64 {
    generators(n).iter().fold(1, |acc, g| lcm(acc, g.order))
}

/// All `φ(N)` characters modulo `N`, lexicographic in the generator
/// exponents (the first generator varies slowest).
pub fn enumerate_characters(n: u64, p: u64) -> Result<Vec<DirichletCharacter>> {
    validate_modulus(n, p)?;
    let gens = generators(n);
    let e_big = gens.iter().fold(1, |acc, g| lcm(acc, g.order));
    // discrete logarithms of the units with respect to the generators
    let mut logs: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut idx = vec![0u64; gens.len()];
    loop {
        let mut x = 1 % n.max(1);
        for (g, &e) in gens.iter().zip(&idx) {
            x = x * powmod(g.residue, e, n) % n;
        }
        logs.insert(x, idx.clone());
        if !advance(&mut idx, &gens) {
            break;
        }
    }
    debug_assert_eq!(logs.len() as u64, euler_phi(n));
    let mut out = Vec::new();
    let mut exps = vec![0u64; gens.len()];
    loop {
        let values: Vec<Option<u64>> = (0..n)
            .map(|k| {
                logs.get(&(k % n)).map(|l| {
                    l.iter()
                        .zip(&exps)
                        .zip(&gens)
                        .map(|((&li, &ei), g)| li * ei * (e_big / g.order))
                        .sum::<u64>()
                        % e_big
                })
            })
            .collect();
        let order = gens
            .iter()
            .zip(&exps)
            .fold(1, |acc, (g, &e)| lcm(acc, g.order / gcd(g.order, e)));
        let mut chi = DirichletCharacter {
            modulus: n,
            conductor: n,
            order,
            exponent: e_big,
            generator_exponents: exps.clone(),
            values,
        };
        chi.conductor = conductor(&chi);
        out.push(chi);
        if !advance(&mut exps, &gens) {
            break;
        }
    }
    Ok(out)
}

fn advance(idx: &mut [u64], gens: &[Generator]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < gens[i].order {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Smallest `f | N` such that `χ(k) = 1` whenever `k ≡ 1 mod f`.
fn conductor(chi: &DirichletCharacter) -> u64 {
    let n = chi.modulus;
    (1..=n)
        .filter(|f| n % f == 0)
        .find(|&f| {
            (0..n)
                .filter(|&k| k % f == 1 % f && gcd(k, n) == 1)
                .all(|k| chi.values[k as usize] == Some(0))
        })
        .unwrap_or(n)
}

/// A p-adic L-value with its metadata.
#[derive(Clone, Debug, Serialize)]
pub struct LValueResult {
    pub r: i64,
    pub modulus: u64,
    pub conductor: u64,
    pub order: u64,
    /// The value in `Z_p[ζ_order]`.
    pub value: CycloElement,
    /// Digits requested.
    pub precision: u32,
}

impl LValueResult {
    /// The value in `Q_p` when the order divides `p − 1` (the class of `x`
    /// is sent to its Teichmüller root).
    pub fn as_padic(&self) -> Option<PAdic> {
        let ring = self.value.ring();
        if let Some(c) = self.value.as_constant() {
            return Some(c);
        }
        ring.padic_root().map(|root| self.value.evaluate_at(&root))
    }
}

/// Sum `Σ_{k=1}^{N−1} w(k) ψ̃^(r−1)(k/N)` for weights in a cyclotomic ring.
fn weighted_polygamma_sum(
    sf: &SpecialFunctions,
    ring: &Arc<CycloRing>,
    r: i64,
    n: u64,
    weight: impl Fn(i64) -> Option<CycloElement>,
    m: u32,
) -> Result<CycloElement> {
    let mut acc = ring.zero();
    for k in 1..n as i64 {
        if let Some(w) = weight(k) {
            let psi = sf.polygamma_rational(r - 1, &Ratio::new(k, n as i64), m)?;
            acc = acc.add(&w.scale(&psi));
        }
    }
    Ok(acc)
}

/// `L_p(r, χω^(1−r))` for the primitive character attached to `chi`
/// (conductor `f > 1`), through the polygamma sum at modulus `aux`
/// (a multiple of `f` prime to `p`), in the ring `ring ⊇ μ_E`.
pub fn lp_value_in(
    sf: &SpecialFunctions,
    ring: &Arc<CycloRing>,
    r: i64,
    chi: &DirichletCharacter,
    aux: u64,
    m: u32,
) -> Result<CycloElement> {
    let p = sf.prime();
    if chi.conductor <= 1 {
        return Err(Error::NonPrimitive("the trivial character has conductor 1".into()));
    }
    validate_modulus(aux, p)?;
    if aux % chi.conductor != 0 {
        return Err(Error::BadModulus(format!("{aux} is not a multiple of the conductor {}", chi.conductor)));
    }
    let sum = weighted_polygamma_sum(sf, ring, r, aux, |k| chi.primitive_value_exponent(k).map(|e| chi.root_in(ring, e)), m)?;
    let nr = PAdic::from_int(p, aux as i64).pow_i(r)?;
    Ok(sum.scale(&nr.inverse()?).neg())
}

/// `L_p(r, χω^(1−r))` for a primitive character given modulo its
/// conductor, evaluated through the polygamma sum at modulus `aux`.
pub fn lp_value(sf: &SpecialFunctions, r: i64, chi: &DirichletCharacter, aux: u64, m: u32) -> Result<LValueResult> {
    if chi.conductor != chi.modulus {
        return Err(Error::NonPrimitive(format!("conductor {} differs from modulus {}", chi.conductor, chi.modulus)));
    }
    let big = CycloRing::new(chi.exponent, sf.prime(), m)?;
    let v = lp_value_in(sf, &big, r, chi, aux, m)?;
    let small = CycloRing::new(chi.order, sf.prime(), m)?;
    let value = restrict_to(&v, &small)?;
    Ok(LValueResult { r, modulus: aux, conductor: chi.conductor, order: chi.order, value, precision: m })
}

/// Rewrites an element of `Z_p[ζ_E]` lying in `Z_p[ζ_d]` (`d | E`) in the
/// smaller ring: solves for coordinates in the powers of `ζ_E^(E/d)`.
fn restrict_to(x: &CycloElement, small: &Arc<CycloRing>) -> Result<CycloElement> {
    let big = x.ring().clone();
    let step = (big.modulus() / small.modulus()) as i64;
    let d = small.degree();
    // express x = Σ_{i<d} c_i ζ_E^(i·step) by linear algebra over Z_p
    let basis: Vec<CycloElement> = (0..d).map(|i| big.zeta_pow(i as i64 * step)).collect();
    let mat = Mat::from_fn(d, d, |i, j| basis[j].coeffs()[i]);
    let rhs: Vec<PAdic> = x.coeffs()[..d].to_vec();
    let coords = mat.solve(&rhs).map_err(|_| Error::NonInvertible("restriction to a subring".into()))?;
    let y = small.element(coords);
    // verify the rewrite on every coordinate of the big ring
    let mut back = big.zero();
    for (i, c) in y.coeffs().iter().enumerate() {
        back = back.add(&basis[i].scale(c));
    }
    if !back.sub(x).coeffs().iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("value does not lie in the smaller cyclotomic ring".into()));
    }
    Ok(y)
}

/// `L_p(r, ω^(1−r)) = Σ_{k=1}^{N−1} ψ̃^(r−1)(k/N) / (N − N^r)`, `r ≠ 1`.
pub fn trivial_lvalue(sf: &SpecialFunctions, r: i64, aux: u64, m: u32) -> Result<PAdic> {
    let p = sf.prime();
    if r == 1 {
        return Err(Error::RIsOne);
    }
    validate_modulus(aux, p)?;
    if aux < 2 {
        return Err(Error::BadModulus("auxiliary modulus must be at least 2".into()));
    }
    let mut sum = PAdic::zero(p);
    for k in 1..aux as i64 {
        sum = sum.add_p(&sf.polygamma_rational(r - 1, &Ratio::new(k, aux as i64), m)?);
    }
    let n = PAdic::from_int(p, aux as i64);
    sum.div_p(&n.sub_p(&n.pow_i(r)?))
}

/// `ζ_p(r) = Σ_{k=1}^{N−1} ψ̃^(r−1)(k/N) / ((N − N^r)(1 − p^(−r)))`.
pub fn zeta_p(sf: &SpecialFunctions, r: i64, aux: u64, m: u32) -> Result<PAdic> {
    let p = sf.prime();
    let l = trivial_lvalue(sf, r, aux, m)?;
    let factor = PAdic::from_int(p, 1).sub_p(&PAdic::from_int(p, p as i64).pow_i(-r)?);
    l.div_p(&factor)
}

/// `λ(x) = p^(−1) log(x^(p−1))` for a positive integer `x` prime to `p`.
pub fn log_term(p: u64, x: u64) -> Result<PAdic> {
    let v = PAdic::from_int(p, x as i64).pow_i(p as i64 - 1)?;
    Ok(v.iwasawa_log()?.shift(-1))
}

/// `Σ_{k=1}^{N−1} ψ̃^(0)(k/N) + N p^(−1) log(N^(p−1))`; zero at the
/// certified precision.
pub fn log_identity_check(sf: &SpecialFunctions, n: u64, m: u32) -> Result<PAdic> {
    let p = sf.prime();
    validate_modulus(n, p)?;
    if n < 2 {
        return Err(Error::BadModulus("modulus must be at least 2".into()));
    }
    let mut sum = PAdic::zero(p);
    for k in 1..n as i64 {
        sum = sum.add_p(&sf.polygamma_rational(0, &Ratio::new(k, n as i64), m)?);
    }
    Ok(sum.add_p(&PAdic::from_int(p, n as i64).mul_p(&log_term(p, n)?)))
}

/// The aggregate `L_r(χ)` attached to a character modulo `N`.
pub fn aggregate_lvalue(
    sf: &SpecialFunctions,
    ring: &Arc<CycloRing>,
    r: i64,
    chi: &DirichletCharacter,
    m: u32,
) -> Result<CycloElement> {
    let p = sf.prime();
    let n = chi.modulus;
    let primes: Vec<u64> = factorize(n).into_iter().map(|(l, _)| l).collect();
    let one = PAdic::from_int(p, 1);
    if chi.conductor > 1 {
        // Π (1 − χ*(l) l^(−r)) L_p(r, χω^(1−r)), evaluated at N' = f
        let mut factor = ring.one();
        for &l in &primes {
            if let Some(e) = chi.primitive_value_exponent(l as i64) {
                let lr = PAdic::from_int(p, l as i64).pow_i(-r)?;
                factor = factor.mul(&ring.one().sub(&chi.root_in(ring, e).scale(&lr)));
            }
        }
        let lp = lp_value_in(sf, ring, r, chi, chi.conductor, m)?;
        return Ok(factor.mul(&lp));
    }
    let prod = |s: i64| -> Result<PAdic> {
        let mut acc = one;
        for &l in &primes {
            acc = acc.mul_p(&one.sub_p(&PAdic::from_int(p, l as i64).pow_i(-s)?));
        }
        Ok(acc)
    };
    if r != 1 {
        let aux = if p == 2 { 3 } else { 2 };
        let lp = trivial_lvalue(sf, r, aux, m)?;
        let nn = PAdic::from_int(p, n as i64).pow_i(1 - r)?;
        let factor = prod(r)?.sub_p(&nn.mul_p(&prod(1)?));
        return Ok(ring.constant(factor.mul_p(&lp)));
    }
    let mut inner = log_term(p, n)?;
    for &l in &primes {
        inner = inner.add_p(&log_term(p, l)?.div_p(&PAdic::from_int(p, l as i64 - 1))?);
    }
    Ok(ring.constant(prod(1)?.mul_p(&inner)))
}

/// `−(N^r/φ(N)) Σ_χ χ(k)^(−1) L_r(χ)`, which reproduces `ψ̃^(r−1)(k/N)`.
pub fn polygamma_from_lvalues(sf: &SpecialFunctions, r: i64, k: i64, n: u64, m: u32) -> Result<CycloElement> {
    let p = sf.prime();
    validate_modulus(n, p)?;
    if n < 2 || gcd(k.rem_euclid(n as i64) as u64, n) != 1 {
        return Err(Error::BadModulus(format!("need N > 1 and gcd(k, N) = 1, got k={k}, N={n}")));
    }
    let chars = enumerate_characters(n, p)?;
    let ring = CycloRing::new(chars[0].exponent, p, m)?;
    let mut acc = ring.zero();
    for chi in &chars {
        let e = chi.value_exponent(k).expect("k is a unit");
        let inv = chi.root_in(&ring, (chi.exponent - e) % chi.exponent);
        acc = acc.add(&inv.mul(&aggregate_lvalue(sf, &ring, r, chi, m)?));
    }
    let scale = PAdic::from_int(p, n as i64).pow_i(r)?.div_p(&PAdic::from_int(p, euler_phi(n) as i64))?;
    Ok(acc.scale(&scale).neg())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_counts_and_orders() {
        assert_eq!(enumerate_characters(1, 5).unwrap().len(), 1);
        let c4 = enumerate_characters(4, 5).unwrap();
        assert_eq!(c4.len(), 2);
        assert_eq!((c4[1].conductor, c4[1].order), (4, 2));
        let mut orders: Vec<u64> = enumerate_characters(5, 7).unwrap().iter().map(|c| c.order).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 4, 4]);
        assert!(matches!(enumerate_characters(10, 5), Err(Error::ModulusDivisibleByP(_))));
    }

    #[test]
    fn multiplicativity() {
        for n in [8u64, 12, 9, 15] {
            for chi in enumerate_characters(n, 7).unwrap() {
                for a in 0..n as i64 {
                    for b in 0..n as i64 {
                        let ab = chi.value_exponent(a * b);
                        let prod = match (chi.value_exponent(a), chi.value_exponent(b)) {
                            (Some(x), Some(y)) => Some((x + y) % chi.exponent),
                            _ => None,
                        };
                        assert_eq!(ab, prod);
                    }
                }
            }
        }
    }

    #[test]
    fn conductors_mod_12() {
        let mut f: Vec<u64> = enumerate_characters(12, 5).unwrap().iter().map(|c| c.conductor).collect();
        f.sort();
        assert_eq!(f, vec![1, 3, 4, 12]);
    }
}
