//! Generalized Dwork pencils, finite fields and point counts.

use num_rational::Ratio;
use padhg::cyclo::CycloRing;
use padhg::dwork::{
    cancelled_lists_consistent, count_projective_zeros, katz_frobenius, katz_lists, legendre_ap, legendre_trace,
    point_count, FiniteField,
};
use padhg::par::Exec;
use padhg::special::SpecialFunctions;
use padhg::{Error, PAdic};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `a_p` of `y² = x(x − 1)(x − λ)` as `−Σ_x (x(x−1)(x−λ) / p)` with the
/// Legendre symbol from Euler's criterion.
fn legendre_oracle(lambda: u64, p: u64) -> i64 {
    -(0..p)
        .map(|x| {
            let v = x * ((x + p - 1) % p) % p * ((x + p - lambda % p) % p) % p;
            match pow_mod(v, (p - 1) / 2, p) {
                0 => 0,
                1 => 1,
                _ => -1,
            }
        })
        .sum::<i64>()
}

#[test]
fn quintic_pencil() {
    let spec = katz_lists(4, 5, &[1; 5], 7).unwrap();
    assert_eq!(spec.a_cancelled, (1..5).map(|i| r(i, 5)).collect::<Vec<_>>());
    assert_eq!(spec.b_cancelled, vec![r(1, 1); 4]);
    assert!(cancelled_lists_consistent(&spec));
    let sf = SpecialFunctions::new(7);
    let kf = katz_frobenius(&sf, &spec, &PAdic::from_int(7, 1), 4, 6).unwrap();
    assert_eq!(kf.epsilon.order, 20);
    assert!(kf.structure_holds(4));
    assert_eq!(kf.psi_cancelled.len(), 4);
}

#[test]
fn weighted_pencil_lists() {
    let spec = katz_lists(2, 4, &[1, 1, 2], 7).unwrap();
    assert_eq!(spec.a_cancelled, vec![r(1, 4), r(3, 4)]);
    assert_eq!(spec.b_cancelled, vec![r(1, 1), r(1, 1)]);
    let spec = katz_lists(3, 6, &[1, 1, 1, 3], 5).unwrap();
    assert_eq!(spec.a_cancelled, vec![r(1, 6), r(1, 2), r(5, 6)]);
    assert_eq!(spec.b_cancelled, vec![r(1, 1); 3]);
    assert!(cancelled_lists_consistent(&spec));
    let sf = SpecialFunctions::new(5);
    let kf = katz_frobenius(&sf, &spec, &PAdic::from_int(5, 6), 4, 6).unwrap();
    assert!(kf.structure_holds(3));
    assert_eq!(kf.epsilon.order, 12);
}

#[test]
fn pencil_parameter_errors() {
    assert!(matches!(katz_lists(2, 4, &[1, 1, 1], 7), Err(Error::BadWeights(_))));
    assert!(matches!(katz_lists(2, 6, &[2, 2, 2], 7), Err(Error::BadWeights(_))));
    assert!(matches!(katz_lists(1, 4, &[2, 2], 7), Err(Error::BadWeights(_))));
    assert!(matches!(katz_lists(2, 5, &[1, 1, 3], 3), Err(Error::PDividesParameter(_))));
    assert!(matches!(katz_lists(2, 5, &[1, 2, 2], 5), Err(Error::PDividesParameter(_))));
    let spec = katz_lists(3, 6, &[1, 1, 2, 2], 7).unwrap();
    assert!(!spec.pairwise_coprime());
    let sf = SpecialFunctions::new(7);
    assert!(matches!(katz_frobenius(&sf, &spec, &PAdic::from_int(7, 1), 4, 6), Err(Error::BadWeights(_))));
}

#[test]
fn fermat_points_on_the_line() {
    // [x : y] with x^d + y^d = 0 has y ≠ 0, so the count is #{t : t^d = −1}
    for (p, e) in [(5u64, 1u32), (7, 1), (3, 2), (5, 2)] {
        let field = FiniteField::new(p, e).unwrap();
        let q = field.order();
        for d in 2..7u64 {
            let got = count_projective_zeros(&field, 2, Exec::default(), |x| {
                field.add(field.pow(x[0], d), field.pow(x[1], d))
            })
            .unwrap();
            let g = gcd(d, q - 1);
            let minus_one_is_power = p == 2 || ((q - 1) / g) % 2 == 0;
            let expected = if minus_one_is_power { g } else { 0 };
            assert_eq!(got, expected, "q = {q}, d = {d}");
        }
    }
}

#[test]
fn cubic_pencil_satisfies_the_hasse_bound() {
    let spec = katz_lists(2, 3, &[1, 1, 1], 7).unwrap();
    for e in [1u32, 2] {
        let field = FiniteField::new(7, e).unwrap();
        let q = field.order() as i64;
        for lambda in field.elements().take(20) {
            match point_count(&spec, &field, lambda, Exec::default()) {
                Ok(n) => {
                    let a = q + 1 - n as i64;
                    assert!(a * a <= 4 * q, "q = {q}, λ = {lambda}: a = {a}");
                }
                Err(Error::SingularFiber(_)) => assert_eq!(field.pow(lambda, 3), 1),
                Err(other) => panic!("{other}"),
            }
        }
    }
    let f7 = FiniteField::new(7, 1).unwrap();
    assert!(matches!(point_count(&spec, &f7, 1, Exec::default()), Err(Error::SingularFiber(_))));
    let f5 = FiniteField::new(5, 1).unwrap();
    assert!(matches!(point_count(&spec, &f5, 2, Exec::default()), Err(Error::PrimeMismatch(..))));
}

#[test]
fn legendre_regression_values() {
    assert_eq!(legendre_ap(2, 7).unwrap(), 0);
    assert_eq!(legendre_ap(3, 7).unwrap(), 4);
    assert_eq!(legendre_ap(5, 7).unwrap(), -4);
    for lambda in [2, 4, 6] {
        assert_eq!(legendre_ap(lambda, 7).unwrap() % 7, 0, "λ = {lambda} is supersingular");
    }
    assert!(matches!(legendre_ap(0, 7), Err(Error::SingularFiber(_))));
}

#[test]
fn legendre_over_the_quadratic_extension() {
    // a_{p²} = a_p² − 2p for λ in the prime field
    let f49 = FiniteField::with_modulus(7, vec![4, 0, 1]).unwrap();
    for lambda in 2..7 {
        let ap = legendre_ap(lambda, 7).unwrap();
        let aq = legendre_trace(&f49, f49.from_int(lambda)).unwrap();
        assert_eq!(aq, ap * ap - 14);
    }
}

#[test]
fn finite_field_and_teichmuller_lifts() {
    let f = FiniteField::with_modulus(7, vec![4, 0, 1]).unwrap();
    let ring = CycloRing::with_modulus(7, vec![-3, 0, 1], 10).unwrap();
    assert!(FiniteField::with_modulus(7, vec![5, 0, 1]).is_err());
    for x in f.elements() {
        assert_eq!(f.pow(x, 49), x);
        assert_eq!(f.frobenius(f.frobenius(x)), x);
        let t = f.teichmuller(&ring, x).unwrap();
        assert!(t.pow(49).sub(&t).vanishes_mod(10));
        let reduced: Vec<u64> = t.coeffs().iter().map(|c| c.residue(1).unwrap()).collect();
        let mut coords = f.coords(x);
        coords.resize(reduced.len(), 0);
        assert_eq!(reduced, coords);
    }
    let wrong = CycloRing::with_modulus(7, vec![-2, 0, 1], 10);
    if let Ok(wrong) = wrong {
        assert!(f.teichmuller(&wrong, 1).is_err());
    }
}

#[test]
fn sequential_and_parallel_counts_agree() {
    let spec = katz_lists(3, 4, &[1, 1, 1, 1], 7).unwrap();
    let field = FiniteField::new(7, 1).unwrap();
    for lambda in [0, 2, 3] {
        let a = point_count(&spec, &field, lambda, Exec::Sequential).unwrap();
        let b = point_count(&spec, &field, lambda, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn legendre_trace_matches_the_character_sum(
        (p, lambda) in prop::sample::select(vec![5u64, 7, 11, 13, 17]).prop_flat_map(|p| (Just(p), 2..p))
    ) {
        prop_assert_eq!(legendre_ap(lambda as i64, p).unwrap(), legendre_oracle(lambda, p));
    }

    #[test]
    fn field_multiplication_is_associative_and_distributive(x in 0u32..49, y in 0u32..49, z in 0u32..49) {
        let f = FiniteField::new(7, 2).unwrap();
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.frobenius(f.mul(x, y)), f.mul(f.frobenius(x), f.frobenius(y)));
        prop_assert_eq!(f.frobenius(f.add(x, y)), f.add(f.frobenius(x), f.frobenius(y)));
    }
}
