use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use k3lab::fields::{factor_rational, FiniteField};
use k3lab::milnor::{
    local_symbol, milnor_pres, milnor_pres_with, reciprocity_product, k2q_decompose, ratio, Place, SteinbergSlots,
    Unit, UnitModel,
};

const FIELDS: [u32; 9] = [3, 4, 5, 7, 8, 9, 11, 13, 16];

#[test]
fn symbols_are_multilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for q in FIELDS {
        let f = FiniteField::from_order(q).unwrap();
        let model = UnitModel::Finite(f.clone());
        let units: Vec<_> = f.units().collect();
        for n in [2, 3] {
            let k = milnor_pres(&model, n, false).unwrap();
            for _ in 0..200 {
                let mut xs: Vec<_> = (0..n).map(|_| *units.choose(&mut rng).unwrap()).collect();
                let slot = rng.gen_range(0..n);
                let a2 = *units.choose(&mut rng).unwrap();
                let sym = |v: &[k3lab::fields::FieldElem]| k.symbol(&v.iter().map(|&u| Unit::Field(u)).collect::<Vec<_>>()).unwrap();
                let s1 = sym(&xs);
                let mut ys = xs.clone();
                ys[slot] = a2;
                let s2 = sym(&ys);
                xs[slot] = f.mul(xs[slot], a2);
                let s12 = sym(&xs);
                assert!(k.pres().elem_eq(&s12, &s1.add(&s2)).unwrap(), "q={q} n={n}");
            }
        }
    }
}

#[test]
fn last_pair_steinberg_gives_same_groups() {
    for q in [3, 4, 5, 7, 8, 9, 11, 13] {
        let model = UnitModel::Finite(FiniteField::from_order(q).unwrap());
        for n in [2, 3] {
            let a = milnor_pres_with(&model, n, false, SteinbergSlots::Adjacent).unwrap().classify().unwrap();
            let b = milnor_pres_with(&model, n, false, SteinbergSlots::LastPair).unwrap().classify().unwrap();
            assert_eq!(a, b, "q={q} n={n}");
        }
    }
}

fn s_unit(rng: &mut ChaCha8Rng) -> BigRational {
    let primes = [2i64, 3, 5, 7, 11, 13];
    let mut r = ratio(if rng.gen_bool(0.5) { -1 } else { 1 }, 1);
    for &p in &primes {
        let e: i32 = rng.gen_range(-2..=2);
        for _ in 0..e.unsigned_abs() {
            r = if e > 0 { r * ratio(p, 1) } else { r / ratio(p, 1) };
        }
    }
    r
}

fn places() -> Vec<Place> {
    let mut v = vec![Place::Real, Place::Two];
    v.extend([3u64, 5, 7, 11, 13].map(Place::Odd));
    v
}

#[test]
fn local_symbols_bimultiplicative_and_steinberg() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let (a, a2, b) = (s_unit(&mut rng), s_unit(&mut rng), s_unit(&mut rng));
        for place in places() {
            let l = local_symbol(place, &(&a * &a2), &b).unwrap().value;
            let r1 = local_symbol(place, &a, &b).unwrap().value;
            let r2 = local_symbol(place, &a2, &b).unwrap().value;
            let prod = match place {
                Place::Odd(p) => (r1 * r2).rem_euclid(p as i64),
                _ => r1 * r2,
            };
            assert_eq!(l, prod, "{place} at ({a}*{a2}, {b})");
        }
        let one_minus = BigRational::one() - &a;
        if one_minus != BigRational::from_integer(BigInt::from(0)) && factor_rational(&one_minus).is_ok() {
            let bound = 1 + factor_rational(&one_minus).unwrap().exponents().keys().copied().max().unwrap_or(13).max(13);
            for v in k2q_decompose(&a, &one_minus, bound).unwrap() {
                assert!(v.is_trivial(), "Steinberg fails at {} for a = {a}", v.place);
            }
        }
    }
}

#[test]
fn hilbert_reciprocity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let mut draw = || ratio(rng.gen_range(1..=50) * if rng.gen_bool(0.5) { -1 } else { 1 }, rng.gen_range(1..=50));
        let (a, b) = (draw(), draw());
        assert_eq!(reciprocity_product(&k2q_decompose(&a, &b, 50).unwrap()), 1, "{{{a},{b}}}");
    }
}

#[test]
fn classical_hilbert_values() {
    let m1 = ratio(-1, 1);
    assert_eq!(local_symbol(Place::Real, &m1, &m1).unwrap().value, -1);
    assert_eq!(local_symbol(Place::Two, &m1, &m1).unwrap().value, -1);
    assert_eq!(local_symbol(Place::Two, &ratio(2, 1), &ratio(3, 1)).unwrap().value, -1);
    assert_eq!(local_symbol(Place::Odd(3), &ratio(2, 1), &ratio(3, 1)).unwrap().value, 2);
}
