//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's linear algebra.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero diagonal of the Smith form, by repeated remainder reduction on a
/// dense copy. Slow and simple on purpose.
pub fn naive_snf_diagonal(rows: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, t, t..m, t..cols) else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &a[t][j] * &q;
                        a[i][j] -= v;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for r in a.iter_mut().skip(t) {
                        let v = &r[t] * &q;
                        r[j] -= v;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                let col = min_nonzero(&a, t, t..m, t..t + 1);
                let row = min_nonzero(&a, t, t..t + 1, t..cols);
                let pick = match (col, row) {
                    (Some(c), Some(r)) if a[r.0][r.1].abs() < a[c.0][c.1].abs() => r,
                    (Some(c), _) => c,
                    (None, Some(r)) => r,
                    (None, None) => unreachable!(),
                };
                a.swap(t, pick.0);
                for r in a.iter_mut() {
                    r.swap(t, pick.1);
                }
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let bad = (t + 1..m).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn min_nonzero(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// `(free rank, invariant factors > 1)` of `ℤ^cols / rowspace`.
pub fn naive_classify(rows: &[Vec<BigInt>], cols: usize) -> (usize, Vec<BigInt>) {
    let d = naive_snf_diagonal(rows, cols);
    let free = cols - d.len();
    (free, d.into_iter().filter(|x| *x > BigInt::from(1)).collect())
}

/// Prime-power decomposition of a list of cyclic orders, sorted.
pub fn primary_parts(orders: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for &n in orders {
        let mut n = n;
        let mut p = 2;
        while n > 1 {
            if n % p == 0 {
                let mut pk = 1;
                while n % p == 0 {
                    n /= p;
                    pk *= p;
                }
                out.push(pk);
            }
            p += 1;
        }
    }
    out.sort_unstable();
    out
}

/// A finitely generated abelian group as free rank plus cyclic orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fg {
    pub free: usize,
    pub torsion: Vec<u64>,
}

impl Fg {
    pub fn normalized(&self) -> (usize, Vec<u64>) {
        (self.free, primary_parts(&self.torsion))
    }
}

/// H_n(ℤ/m; ℤ): ℤ in degree 0, ℤ/m in odd degrees, 0 otherwise.
pub fn cyclic_homology(m: u64, n: usize) -> Fg {
    match n {
        0 => Fg { free: 1, torsion: vec![] },
        n if n % 2 == 1 => Fg { free: 0, torsion: vec![m] },
        _ => Fg { free: 0, torsion: vec![] },
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn tensor(a: &Fg, b: &Fg) -> Fg {
    let mut torsion = Vec::new();
    for _ in 0..a.free {
        torsion.extend(&b.torsion);
    }
    for _ in 0..b.free {
        torsion.extend(&a.torsion);
    }
    for &x in &a.torsion {
        for &y in &b.torsion {
            torsion.push(gcd(x, y));
        }
    }
    Fg {
        free: a.free * b.free,
        torsion,
    }
}

fn tor(a: &Fg, b: &Fg) -> Fg {
    let mut torsion = Vec::new();
    for &x in &a.torsion {
        for &y in &b.torsion {
            torsion.push(gcd(x, y));
        }
    }
    Fg { free: 0, torsion }
}

/// Künneth formula for H_n(ℤ/m₁ × ℤ/m₂).
pub fn kunneth_cyclic_pair(m1: u64, m2: u64, n: usize) -> Fg {
    let mut free = 0;
    let mut torsion = Vec::new();
    for i in 0..=n {
        let t = tensor(&cyclic_homology(m1, i), &cyclic_homology(m2, n - i));
        free += t.free;
        torsion.extend(t.torsion);
    }
    for i in 0..n {
        let t = tor(&cyclic_homology(m1, i), &cyclic_homology(m2, n - 1 - i));
        torsion.extend(t.torsion);
    }
    torsion.retain(|&x| x > 1);
    Fg { free, torsion }
}

/// Coefficient of e1∧e2∧e3 in the difference of the two sides of the first
/// two torus identities is ±2αβγ in ℤ/(q−1), with α, β, γ the discrete logs.
/// They hold exactly when that vanishes.
pub fn theta_t12_predicted(q: u64, logs: [u64; 3]) -> bool {
    let n = q - 1;
    (2 * logs[0] % n * logs[1] % n * logs[2]).is_multiple_of(n)
}

pub fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[test]
fn naive_snf_examples() {
    let (free, inv) = naive_classify(&big_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), 3);
    assert_eq!(free, 0);
    assert_eq!(inv, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    let (free, inv) = naive_classify(&big_rows(&[vec![2, 0], vec![0, 3]]), 2);
    assert_eq!((free, inv), (0, vec![BigInt::from(6)]));
}

#[test]
fn kunneth_examples() {
    // H_*(ℤ/2 × ℤ/2): ℤ, (ℤ/2)², ℤ/2, (ℤ/2)³
    assert_eq!(kunneth_cyclic_pair(2, 2, 1).normalized(), (0, vec![2, 2]));
    assert_eq!(kunneth_cyclic_pair(2, 2, 2).normalized(), (0, vec![2]));
    assert_eq!(kunneth_cyclic_pair(2, 2, 3).normalized(), (0, vec![2, 2, 2]));
    assert_eq!(kunneth_cyclic_pair(2, 3, 1).normalized(), (0, vec![2, 3]));
}
