//! Hypergeometric data, the operator and its companion, residue constants
//! and canonical bases.

use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{One, Zero};
use padhg::hypergeom::{
    apply_operator, companion, datum_companion, dwork_prime, euler_sum, gamma_k, gamma_k_alt, hg_series,
    hg_series_ratio, omega_hat_basis, HGDatum, Mode,
};
use padhg::qseries::{q, qi, QSeries, Q};
use padhg::series::{solve_regular_ode, TruncSeries};
use padhg::special::SpecialFunctions;
use padhg::{Error, PAdic};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

fn qs(v: &[Ratio<i64>]) -> Vec<Q> {
    v.iter().map(q).collect()
}

fn sf7() -> &'static SpecialFunctions {
    static SF: OnceLock<SpecialFunctions> = OnceLock::new();
    SF.get_or_init(|| SpecialFunctions::new(7))
}

fn regression_data(p: u64) -> Vec<HGDatum> {
    let one = r(1, 1);
    [
        (vec![r(1, 2)], vec![one]),
        (vec![r(1, 2), r(1, 2)], vec![one, one]),
        (vec![r(1, 3), r(2, 3)], vec![one, one]),
        (vec![r(1, 4), r(3, 4)], vec![one, one]),
        ((1..5).map(|i| r(i, 5)).collect(), vec![one; 4]),
        (vec![r(1, 3), r(2, 3)], vec![one, r(1, 2)]),
        (vec![r(1, 3), r(2, 3)], vec![r(1, 5), r(4, 5)]),
        (vec![r(1, 4), r(1, 2), r(3, 4)], vec![r(1, 3), r(2, 3), r(1, 6)]),
    ]
    .into_iter()
    .filter_map(|(a, b)| HGDatum::new(a, b, p).ok())
    .collect()
}

#[test]
fn dwork_prime_examples() {
    assert_eq!(dwork_prime(&r(1, 2), 5, 1).unwrap(), r(1, 2));
    assert_eq!(dwork_prime(&r(1, 3), 5, 1).unwrap(), r(2, 3));
    for p in [2u64, 3, 5, 7, 11, 13] {
        assert_eq!(dwork_prime(&r(1, 1), p, 1).unwrap(), r(1, 1));
    }
    assert!(matches!(dwork_prime(&r(2, 7), 7, 1), Err(Error::NotPIntegral(_))));
}

#[test]
fn validation_examples() {
    let one = r(1, 1);
    let d = HGDatum::new(vec![r(1, 3), r(2, 3)], vec![one, one], 5).unwrap();
    assert!(d.validate(Mode::Degenerate).is_ok());
    assert_eq!(d.mode().unwrap(), Mode::Degenerate);
    let d = HGDatum::new(vec![r(1, 2)], vec![r(1, 2)], 5).unwrap();
    assert!(matches!(d.validate(Mode::Hypothesis), Err(Error::HypothesisViolation(_))));
    let d = HGDatum::new(vec![r(1, 2), r(1, 4)], vec![r(1, 3), r(1, 3)], 5).unwrap();
    assert!(matches!(d.validate(Mode::Hypothesis), Err(Error::HypothesisViolation(_))));
    let d = HGDatum::new(vec![r(1, 3), r(2, 3)], vec![r(1, 5), r(4, 5)], 7).unwrap();
    assert_eq!(d.mode().unwrap(), Mode::Hypothesis);
}

#[test]
fn hypergeometric_series_examples() {
    let f = hg_series_ratio(&[r(1, 2), r(1, 2)], &[r(1, 1), r(1, 1)], 6).unwrap();
    assert_eq!(f.coeff(0), Q::one());
    assert_eq!(f.coeff(1), q(&r(1, 4)));
    assert_eq!(f.coeff(2), q(&r(9, 64)));
    let g = hg_series_ratio(&[r(1, 1)], &[r(1, 1)], 8).unwrap();
    assert!(g.sub(&QSeries::geometric(8)).is_zero());
    assert!(matches!(hg_series_ratio(&[r(1, 2)], &[r(-1, 1)], 5), Err(Error::PoleInParameters(_))));
}

#[test]
fn companion_rank_one() {
    let c = companion(&[q(&r(1, 2))], &[Q::one()], 8);
    // q_0 = −z/(2(1 − z))
    for j in 0..8 {
        let expected = if j == 0 { Q::zero() } else { q(&r(-1, 2)) };
        assert_eq!(c.q[0].coeff(j), expected);
    }
    assert_eq!(c.n_h.get(0, 0).coeff(3), q(&r(1, 2)));
}

#[test]
fn companion_structure() {
    for d in regression_data(7) {
        let n = d.n();
        let c = datum_companion(&d, 6);
        let shifts: Vec<Q> = d.b().iter().map(|b| q(&(b - r(1, 1)))).collect();
        let s = padhg::hypergeom::poly_from_shifts(&shifts);
        for i in 0..n {
            assert_eq!(c.q[i].coeff(0), s[i]);
            for j in 0..n {
                let e = c.n_h.get(i, j);
                if j == n - 1 {
                    assert!(e.add(&c.q[i]).sub(&QSeries::constant(if i == j + 1 { Q::one() } else { Q::zero() }, 6)).is_zero());
                } else if i == j + 1 {
                    assert!(e.sub(&QSeries::one(6)).is_zero());
                } else {
                    assert!(e.is_zero());
                }
            }
        }
    }
}

/// `(1 − z)(D^n + Σ q_i D^i) f` applied through the companion coefficients.
fn factored_operator(qv: &[QSeries], f: &QSeries) -> QSeries {
    let mut powers = vec![f.clone()];
    for _ in 0..qv.len() {
        let next = powers.last().unwrap().euler_d();
        powers.push(next);
    }
    let mut acc = powers[qv.len()].clone();
    for (qi, dif) in qv.iter().zip(&powers) {
        acc = acc.add(&qi.mul(dif));
    }
    acc.sub(&acc.shift(1))
}

#[test]
fn companion_factors_the_operator() {
    let t = 10;
    let f = QSeries::new((0..t).map(|i| qi((i * i) as i64 - 3 * i as i64 + 1)).collect());
    for d in regression_data(7) {
        let (a, b) = (qs(d.a()), qs(d.b()));
        let lhs = apply_operator(&a, &b, &f);
        let rhs = factored_operator(&companion(&a, &b, t).q, &f);
        assert!(lhs.sub(&rhs).is_zero());
    }
}

#[test]
fn gamma_k_example() {
    let d = HGDatum::new(vec![r(1, 3), r(2, 3)], vec![r(1, 5), r(4, 5)], 7).unwrap();
    for k in 0..2 {
        let a = gamma_k(sf7(), &d, k, 8).unwrap();
        let b = gamma_k_alt(sf7(), &d, k, 8).unwrap();
        assert!(a.agrees_mod(&b, 6), "k = {k}: {a} vs {b}");
    }
}

#[test]
fn gamma_k_when_mu_vanishes() {
    // b_0 = 1/8 has Dwork prime 7/8 and μ = 7(1 − 7/8) − 7/8 = 0
    let d = HGDatum::new(vec![r(1, 2), r(1, 4)], vec![r(1, 8), r(1, 3)], 7).unwrap();
    assert_eq!(d.mu(0), 0);
    let s = sf7();
    let one = r(1, 1);
    let bk = d.b()[0];
    let mut expected = PAdic::from_int(7, 1).shift(-1);
    for (ai, bj) in d.a().iter().zip(d.b()) {
        expected = expected.mul_p(&s.gamma_rational(&(one - bk + bj), 8).unwrap());
        expected = expected.div_p(&s.gamma_rational(&(one - bk + ai), 8).unwrap()).unwrap();
    }
    assert!(gamma_k_alt(s, &d, 0, 8).unwrap().agrees_mod(&expected, 6));
    assert!(gamma_k(s, &d, 0, 8).unwrap().agrees_mod(&expected, 6));
}

#[test]
fn canonical_basis_invariants() {
    let t = 12;
    for p in [5u64, 7] {
        for d in regression_data(p) {
            if d.mode() != Ok(Mode::Degenerate) && d.s() > 0 {
                continue;
            }
            let (n, s) = (d.n(), d.s());
            let basis = omega_hat_basis(&d, t).unwrap();
            assert!(!basis.det_at_zero().is_zero());
            let sm = basis.matrix();
            let nh = datum_companion(&d, t).n_h;
            let dv = sm.euler_d().add(&nh.mul(sm));
            for k in 0..n {
                let lhs = dv.column(k);
                let col = sm.column(k);
                let expected: Vec<QSeries> = if k >= s {
                    col.iter().map(|c| c.scale(&(Q::one() - q(&d.b()[k])))).collect()
                } else if k == 0 {
                    vec![QSeries::zero(t); n]
                } else {
                    sm.column(k - 1).iter().map(QSeries::neg).collect()
                };
                for (x, y) in lhs.iter().zip(&expected) {
                    assert!(x.sub(y).is_zero(), "datum {:?}/{:?} column {k}", d.a(), d.b());
                }
            }
            if s > 0 {
                // ω̂(s)(0) = (−1)^{s+1} Π_{i>s}(x + b_i − 1) in the powers of D
                let shifts: Vec<Q> = d.b()[s..].iter().map(|b| q(&(b - r(1, 1)))).collect();
                let poly = padhg::hypergeom::poly_from_shifts(&shifts);
                let sign = if s % 2 == 1 { Q::one() } else { -Q::one() };
                let col = sm.column(s - 1);
                for i in 0..n {
                    let expected = poly.get(i).cloned().unwrap_or_else(Q::zero) * &sign;
                    assert_eq!(col[i].coeff(0), expected);
                }
            }
            for k in s..n {
                let own = basis.pairing(k, k).unwrap();
                let ck = (0..n).filter(|&i| i != k).fold(Q::one(), |acc, i| acc * q(&(d.b()[i] - d.b()[k])));
                assert!(own.sub(&QSeries::constant(ck, t)).is_zero());
                if s == 0 {
                    for j in (0..n).filter(|&j| j != k) {
                        assert!(basis.pairing(k, j).unwrap().is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn limit_columns_agree_with_the_padic_ode_solver() {
    let p = 7;
    let t = 16;
    let d = HGDatum::new(vec![r(1, 4), r(3, 4)], vec![r(1, 1), r(1, 1)], p).unwrap();
    let basis = omega_hat_basis(&d, t).unwrap();
    let nh = datum_companion(&d, t).n_h.to_padic(p, 20).unwrap();
    let sm = basis.matrix().to_padic(p, 20).unwrap();
    let zero = PAdic::zero(p);
    let v0: Vec<PAdic> = (0..2).map(|i| sm.coeff(0).get(i, 0).clone()).collect();
    let sol = solve_regular_ode(&zero, &nh, &vec![TruncSeries::zero(&zero, t); 2], &v0).unwrap();
    let digits = 20 - sol.loss_log.iter().map(|&(_, l)| l).sum::<i64>();
    assert!(digits >= 6);
    for i in 0..2 {
        assert!(sol.solution[i].sub(&sm.entry(i, 0)).vanishes_mod(digits));
    }
    // the second column solves the inhomogeneous equation with −ω̂(1)
    let rhs: Vec<TruncSeries<PAdic>> = (0..2).map(|i| sm.entry(i, 0).neg()).collect();
    let v1: Vec<PAdic> = (0..2).map(|i| sm.coeff(0).get(i, 1).clone()).collect();
    let sol = solve_regular_ode(&zero, &nh, &rhs, &v1).unwrap();
    for i in 0..2 {
        assert!(sol.solution[i].sub(&sm.entry(i, 1)).vanishes_mod(digits));
    }
}

#[test]
fn euler_sum_examples() {
    let x: Vec<Q> = [r(1, 2), r(-3, 7), r(5, 1)].iter().map(q).collect();
    assert_eq!(euler_sum(&x, 2).unwrap(), Q::one());
    assert_eq!(euler_sum(&x, 1).unwrap(), Q::zero());
    assert_eq!(euler_sum(&x, 0).unwrap(), Q::zero());
    let y: Vec<Q> = [r(2, 3), r(7, 5)].iter().map(q).collect();
    assert_eq!(euler_sum(&y, 2).unwrap(), &y[0] + &y[1]);
    assert!(matches!(euler_sum(&[Q::one(), Q::one()], 1), Err(Error::RepeatedNode(_))));
}

fn hypothesis_datum(p: u64) -> impl Strategy<Value = HGDatum> {
    let param = (1i64..12, 2i64..13).prop_filter_map("proper fraction prime to p", move |(n, d)| {
        (n < d && d % p as i64 != 0).then(|| r(n, d))
    });
    (1usize..4)
        .prop_flat_map(move |n| (prop::collection::vec(param.clone(), n), prop::collection::vec(param.clone(), n)))
        .prop_filter_map("hypothesis", move |(a, b)| {
            let d = HGDatum::new(a, b, p).ok()?;
            d.validate(Mode::Hypothesis).ok().map(|_| d)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn operator_kills_the_series_up_to_a_constant(d in hypothesis_datum(7)) {
        let t = 12;
        let (a, b) = (qs(d.a()), qs(d.b()));
        let f = hg_series(&a, &b, t).unwrap();
        let value = b.iter().fold(Q::one(), |acc, x| acc * (x - Q::one()));
        prop_assert!(apply_operator(&a, &b, &f).sub(&QSeries::constant(value, t)).is_zero());
    }

    #[test]
    fn dwork_primes_are_periodic(num in 1i64..40, den in 2i64..41, p in prop::sample::select(vec![3u64, 5, 7, 11])) {
        prop_assume!(den % p as i64 != 0 && num < den);
        let a = r(num, den);
        let a1 = dwork_prime(&a, p, 1).unwrap();
        let t = a1 * p as i64 - a;
        prop_assert!(t.is_integer() && (0..p as i64).contains(&t.to_integer()));
        prop_assert!(a1 > r(0, 1) && a1 <= r(1, 1));
        // the orbit is periodic with period dividing the order of p mod den
        let mut order = 1u32;
        let mut pk = p as i64 % den;
        while pk != 1 {
            pk = pk * p as i64 % den;
            order += 1;
        }
        prop_assert_eq!(dwork_prime(&a, p, order).unwrap(), a);
    }

    #[test]
    fn canonical_basis_is_a_basis(d in hypothesis_datum(5)) {
        let basis = omega_hat_basis(&d, 8).unwrap();
        prop_assert!(!basis.det_at_zero().is_zero());
    }

    #[test]
    fn euler_sum_is_symmetric_and_complete(
        xs in prop::collection::btree_set((-30i64..30, 1i64..8), 2..6),
        rr in 0u32..7,
        seed in any::<u64>(),
    ) {
        let x: Vec<Q> = xs.iter().map(|&(n, d)| q(&r(n, d))).collect();
        let mut dedup = x.clone();
        dedup.sort();
        dedup.dedup();
        prop_assume!(dedup.len() == x.len());
        let m = x.len() as u32;
        prop_assume!(rr <= m + 2);
        let mut perm = x.clone();
        let len = perm.len();
        perm.rotate_left((seed as usize) % len);
        perm.swap(0, (seed as usize / 7) % len);
        let v = euler_sum(&x, rr).unwrap();
        prop_assert_eq!(&v, &euler_sum(&perm, rr).unwrap());
        prop_assert_eq!(v, complete_homogeneous(&x, rr as i64 - m as i64 + 1));
    }
}

/// `h_k(x)`, zero for negative `k`.
fn complete_homogeneous(x: &[Q], k: i64) -> Q {
    if k < 0 {
        return Q::zero();
    }
    // h_k(x_1..x_n) = Σ_j x_n^j h_{k−j}(x_1..x_{n−1})
    fn rec(x: &[Q], k: usize) -> Q {
        match x.split_last() {
            None => if k == 0 { Q::one() } else { Q::zero() },
            Some((last, rest)) => {
                let mut acc = Q::zero();
                let mut pow = Q::one();
                for j in 0..=k {
                    acc += &pow * rec(rest, k - j);
                    pow *= last;
                }
                acc
            }
        }
    }
    rec(x, k as usize)
}
