//! Small integer helpers: modular arithmetic on machine words, valuations,
//! factorization by trial division.

/// `a * b mod m` for `a, b < m`.
#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

/// `a + b mod m` for `a, b < m < 2^63`.
#[inline]
pub fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

/// `a - b mod m` for `a, b < m`.
#[inline]
pub fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

/// `base^exp mod m`.
pub fn powmod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mulmod(result, b, m);
        }
        b = mulmod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// `p^k` as `u64`; panics on overflow.
#[inline]
pub fn pow_u64(p: u64, k: u32) -> u64 {
    p.checked_pow(k).expect("p^k overflows u64")
}

/// `p^k` as `u128`, saturating at `u128::MAX`.
pub fn pow_u128_saturating(p: u64, k: u32) -> u128 {
    (p as u128).saturating_pow(k)
}

/// p-adic valuation of a nonzero integer.
pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero `i128`, together with the cofactor.
pub fn split_vp_i128(mut n: i128, p: u64) -> (u32, i128) {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Whether `n` is prime (trial division).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization `[(l, k)]` by trial division, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (l, _)| acc / l * (l - 1))
}

/// Greatest common divisor.
pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Least common multiple.
pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// A primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = factorize(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&(l, _)| powmod(g, (p - 1) / l, p) != 1))
        .expect("every prime has a primitive root")
}
