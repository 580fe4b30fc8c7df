use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use k3lab::bloch::{bloch_group_of, five_term_check, BlochComplex, PreBloch};
use k3lab::fields::FiniteField;

#[test]
fn bloch_group_ignores_symbol_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for q in [4, 5, 7, 8, 9, 11, 13] {
        let f = FiniteField::from_order(q).unwrap();
        let base = bloch_group_of(&BlochComplex::new(&f).unwrap()).unwrap().classification;
        for _ in 0..3 {
            let mut syms = PreBloch::new(&f).unwrap().symbols().to_vec();
            syms.shuffle(&mut rng);
            let pb = PreBloch::with_symbol_order(&f, syms).unwrap();
            let c = BlochComplex::from_prebloch(pb).unwrap();
            assert_eq!(bloch_group_of(&c).unwrap().classification, base, "q={q}");
        }
    }
}

#[test]
fn five_term_exhaustive_small() {
    for q in [3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19] {
        let r = five_term_check(&FiniteField::from_order(q).unwrap()).unwrap();
        assert!(r.lambda_prime_failures.is_empty(), "q={q}");
        assert!(r.lambda_failures.is_empty(), "q={q}");
    }
}

/// Order of B(F_q) for q ≥ 4: (q+1)/2 for odd q, q+1 for even q.
#[test]
fn bloch_group_orders() {
    for q in [4u32, 5, 7, 8, 9, 11, 13, 16] {
        let b = bloch_group_of(&BlochComplex::new(&FiniteField::from_order(q).unwrap()).unwrap()).unwrap();
        let want = if q % 2 == 1 { q.div_ceil(2) } else { q + 1 };
        assert_eq!(b.classification.order(), Some(want.into()), "q={q}");
    }
}
