use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use k3lab::fields::{factor_rational, FiniteField};

const ORDERS: [u32; 18] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32];

fn prime_powers_to_64() -> Vec<u32> {
    (2..=64u32)
        .filter(|&q| FiniteField::from_order(q).is_ok())
        .collect()
}

#[test]
fn dlog_is_an_isomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for q in prime_powers_to_64() {
        let f = FiniteField::from_order(q).unwrap();
        let units: Vec<_> = f.units().collect();
        let n = f.unit_order();
        for _ in 0..100 {
            let a = units[rng.gen_range(0..units.len())];
            let b = units[rng.gen_range(0..units.len())];
            let lhs = f.dlog(f.mul(a, b)).unwrap();
            assert_eq!(lhs, (f.dlog(a).unwrap() + f.dlog(b).unwrap()) % n, "q={q}");
        }
        // bijective onto 0..q-1
        let mut logs: Vec<u32> = units.iter().map(|&u| f.dlog(u).unwrap()).collect();
        logs.sort_unstable();
        assert_eq!(logs, (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn one_minus_is_consistent() {
    for q in prime_powers_to_64() {
        let f = FiniteField::from_order(q).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.one_minus(a)), f.one(), "q={q}");
            assert_eq!(f.one_minus(f.one_minus(a)), a);
        }
    }
}

#[test]
fn labels_round_trip() {
    for q in ORDERS {
        let f = FiniteField::from_order(q).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.label(a)).unwrap(), a);
        }
    }
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-500i64..=500, 1i64..=500)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn factored_arithmetic_matches_rationals(a in small_rational(), b in small_rational(), k in -3i64..=3) {
        let (fa, fb) = (factor_rational(&a).unwrap(), factor_rational(&b).unwrap());
        prop_assert_eq!(fa.to_rational(), a.clone());
        prop_assert_eq!(fa.mul(&fb).to_rational(), &a * &b);
        prop_assert_eq!(fa.inv().to_rational(), a.recip());
        let mut p = BigRational::from_integer(BigInt::from(1));
        for _ in 0..k.unsigned_abs() {
            p *= if k < 0 { a.recip() } else { a.clone() };
        }
        prop_assert_eq!(fa.pow(k).to_rational(), p);
    }

    #[test]
    fn field_axioms(qi in 0usize..ORDERS.len(), x in 0u32..64, y in 0u32..64, z in 0u32..64) {
        let f = FiniteField::from_order(ORDERS[qi]).unwrap();
        let q = f.order();
        let e = |i: u32| f.from_index(i % q).unwrap();
        let (a, b, c) = (e(x), e(y), e(z));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }
}
