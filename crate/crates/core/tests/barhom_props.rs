use std::sync::Arc;

use proptest::prelude::*;

use k3lab::barhom::{
    bar_boundary, c_cycle, check_square_zero, signed_permutations, CycleClass, GroupHom, GroupTable,
    HomologySolver, SolvePolicy,
};

fn abelian(orders: &[u32]) -> Arc<GroupTable> {
    Arc::new(GroupTable::product_of_cyclic(orders).unwrap())
}

#[test]
fn boundaries_square_to_zero() {
    for orders in [&[2u32][..], &[3], &[5], &[2, 2], &[2, 3], &[3, 3]] {
        let g = abelian(orders);
        for n in 1..=3 {
            let lower = bar_boundary(&g, n).unwrap();
            let upper = bar_boundary(&g, n + 1).unwrap();
            check_square_zero(&lower, &upper).unwrap();
        }
    }
}

fn tuple(order: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..order, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn c_cycles_are_cycles(t in tuple(12)) {
        let g = abelian(&[2, 6]);
        let c = c_cycle(&g, &t).unwrap();
        prop_assert!(c.chain().is_cycle().unwrap());
    }

    /// c(g_σ) = sign(σ)·c(g) on chains.
    #[test]
    fn permutation_sign(t in tuple(9)) {
        let g = abelian(&[3, 3]);
        let base = c_cycle(&g, &t).unwrap();
        for (perm, sign) in signed_permutations(t.len()) {
            let permuted: Vec<u32> = perm.iter().map(|&i| t[i]).collect();
            let c = c_cycle(&g, &permuted).unwrap();
            prop_assert_eq!(c.chain().clone(), base.chain().scale(sign).unwrap());
        }
    }

    #[test]
    fn homologous_is_an_equivalence(a in prop::collection::vec(1u32..8, 3), b in prop::collection::vec(1u32..8, 3), c in prop::collection::vec(1u32..8, 3)) {
        let g = abelian(&[2, 4]);
        let mut s = HomologySolver::default();
        let p = SolvePolicy::Exact;
        let (x, y, z) = (c_cycle(&g, &a[..2]).unwrap(), c_cycle(&g, &b[..2]).unwrap(), c_cycle(&g, &c[..2]).unwrap());
        prop_assert!(s.homologous(&x, &x, &p).unwrap().is_homologous());
        let xy = s.homologous(&x, &y, &p).unwrap().is_homologous();
        prop_assert_eq!(xy, s.homologous(&y, &x, &p).unwrap().is_homologous());
        if xy && s.homologous(&y, &z, &p).unwrap().is_homologous() {
            prop_assert!(s.homologous(&x, &z, &p).unwrap().is_homologous());
        }
    }

    /// Homology classes are preserved by group automorphisms.
    #[test]
    fn automorphisms_preserve_verdicts(a in prop::collection::vec(1u32..15, 2), b in prop::collection::vec(1u32..15, 2), unit in prop::sample::select(vec![1u32, 2, 4, 7, 8, 11, 13, 14])) {
        let g = abelian(&[15]);
        let auto = GroupHom::from_fn(g.clone(), g.clone(), |x| Ok(x * unit % 15)).unwrap();
        prop_assert!(auto.is_bijective());
        let mut s = HomologySolver::default();
        let p = SolvePolicy::Exact;
        let (x, y) = (c_cycle(&g, &a).unwrap(), c_cycle(&g, &b).unwrap());
        let before = s.homologous(&x, &y, &p).unwrap().is_homologous();
        let after = s.homologous(&x.map(&auto).unwrap(), &y.map(&auto).unwrap(), &p).unwrap().is_homologous();
        prop_assert_eq!(before, after);
    }
}

#[test]
fn generator_of_h1_is_not_a_boundary() {
    let g = abelian(&[4]);
    let mut s = HomologySolver::default();
    let x = c_cycle(&g, &[1]).unwrap();
    let zero = CycleClass::zero(g.clone(), 1);
    let v = s.homologous(&x, &zero, &SolvePolicy::Exact).unwrap();
    assert!(!v.is_homologous());
    let four_x = x.scale(4).unwrap();
    let v = s.homologous(&four_x, &zero, &SolvePolicy::Exact).unwrap();
    assert!(v.is_homologous());
    let w = v.witness.unwrap();
    assert_eq!(w.boundary().unwrap(), *four_x.chain());
}
