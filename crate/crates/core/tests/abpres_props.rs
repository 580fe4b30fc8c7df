use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use k3lab::abpres::{map_kernel, AbElem, AbMap, AbPres};
use k3lab::intlin::IntMatrix;

#[test]
fn tensor_of_cyclics_is_gcd() {
    for a in 2..=12u64 {
        for b in 2..=12u64 {
            let t = AbPres::cyclic_sum(&[a]).tensor(&AbPres::cyclic_sum(&[b])).unwrap();
            let c = t.classify().unwrap();
            let g = a.gcd(&b);
            let want: Vec<BigInt> = if g == 1 { vec![] } else { vec![BigInt::from(g)] };
            assert_eq!((c.free_rank, c.invariant_factors), (0, want), "Z/{a} ⊗ Z/{b}");
        }
    }
}

fn group_and_elems() -> impl Strategy<Value = (Vec<u64>, Vec<Vec<i64>>)> {
    prop::collection::vec(prop_oneof![Just(0u64), 2u64..=9], 1..=4).prop_flat_map(|orders| {
        let n = orders.len();
        (Just(orders), prop::collection::vec(prop::collection::vec(-20i64..=20, n), 3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn elem_eq_is_a_congruence((orders, xs) in group_and_elems()) {
        let g = AbPres::cyclic_sum(&orders);
        let e: Vec<AbElem> = xs.iter().map(|v| AbElem::from_i64(v)).collect();
        let (x, y, z) = (&e[0], &e[1], &e[2]);
        prop_assert!(g.elem_eq(x, x).unwrap());
        prop_assert_eq!(g.elem_eq(x, y).unwrap(), g.elem_eq(y, x).unwrap());
        if g.elem_eq(x, y).unwrap() && g.elem_eq(y, z).unwrap() {
            prop_assert!(g.elem_eq(x, z).unwrap());
        }
        if g.elem_eq(x, y).unwrap() {
            prop_assert!(g.elem_eq(&x.add(z), &y.add(z)).unwrap());
        }
        // oracle: coordinatewise congruence modulo the orders
        let naive = orders.iter().zip(x.coords().iter().zip(y.coords())).all(|(&d, (a, b))| {
            if d == 0 { a == b } else { ((a - b) % BigInt::from(d)) == BigInt::from(0) }
        });
        prop_assert_eq!(naive, g.elem_eq(x, y).unwrap());
    }

    #[test]
    fn kernel_embedding_maps_to_zero(
        dom in prop::collection::vec(prop_oneof![Just(0u64), 2u64..=8], 1..=3),
        cod in prop::collection::vec(prop_oneof![Just(0u64), 2u64..=8], 1..=3),
        entries in prop::collection::vec(-4i64..=4, 9),
    ) {
        let d = AbPres::cyclic_sum(&dom);
        let c = AbPres::cyclic_sum(&cod);
        // force well-definedness: a column from a torsion generator must be killed by its order
        let mut rows = vec![vec![0i64; dom.len()]; cod.len()];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let v = entries[i * 3 + j];
                let (dj, ci) = (dom[j], cod[i]);
                *slot = match (dj, ci) {
                    (0, _) => v,
                    (_, 0) => 0,
                    (dj, ci) => v * (ci / dj.gcd(&ci)) as i64,
                };
            }
        }
        let m = IntMatrix::from_rows(&rows, dom.len()).unwrap();
        let f = AbMap::new(d, c.clone(), m).unwrap();
        let (_, emb) = map_kernel(&f).unwrap();
        for j in 0..emb.cols() {
            let img = f.apply(&AbElem::new(emb.column(j))).unwrap();
            prop_assert!(c.is_zero(&img).unwrap());
        }
    }
}
