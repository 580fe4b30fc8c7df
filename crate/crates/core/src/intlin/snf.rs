use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hnf::hnf_in_place;
use super::{check_bits, Caps, IntMatrix};
use crate::Result;

/// Smith normal form `U·A·V = S` together with the invariant data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal entries other than 0 and 1, in divisibility order.
    pub invariant_factors: Vec<BigInt>,
    /// Number of zero entries on the diagonal of `S`.
    pub free_rank: usize,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// Rank of the original matrix.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn snf(a: &IntMatrix) -> Result<SnfResult> {
    snf_with(a, &Caps::default())
}

/// Smith normal form via alternating row/column Hermite passes, followed by a
/// gcd/lcm repair of the divisibility chain.
pub fn snf_with(a: &IntMatrix, caps: &Caps) -> Result<SnfResult> {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut vt = IntMatrix::identity(n);

    let mut transposed = false;
    loop {
        if s.is_diagonal() {
            break;
        }
        if transposed {
            hnf_in_place(&mut s, Some(&mut vt), caps)?;
        } else {
            hnf_in_place(&mut s, Some(&mut u), caps)?;
        }
        s = s.transpose();
        transposed = !transposed;
    }
    if transposed {
        s = s.transpose();
    }
    let mut v = vt.transpose();

    // diagonal now; fix signs, order zeros last, and enforce d_i | d_{i+1}
    let k = m.min(n);
    for i in 0..k {
        if s.get(i, i).is_negative() {
            s.negate_row(i);
            u.negate_row(i);
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..k {
            for j in i + 1..k {
                let di = s.get(i, i).clone();
                let dj = s.get(j, j).clone();
                if di.is_zero() && !dj.is_zero() {
                    s.swap_rows(i, j);
                    u.swap_rows(i, j);
                    s.swap_cols(i, j);
                    v.swap_cols(i, j);
                    changed = true;
                } else if !di.is_zero() && !dj.is_zero() && !(&dj % &di).is_zero() {
                    merge_pair(&mut s, &mut u, &mut v, i, j, &di, &dj);
                    check_bits(s.get(j, j), caps)?;
                    changed = true;
                }
            }
        }
    }
    for x in u.entries().iter().chain(v.entries()) {
        check_bits(x, caps)?;
    }

    let diag: Vec<BigInt> = (0..k).map(|i| s.get(i, i).clone()).collect();
    let invariant_factors = diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
    let free_rank = diag.iter().filter(|d| d.is_zero()).count();
    Ok(SnfResult {
        s,
        u,
        v,
        invariant_factors,
        free_rank,
    })
}

/// Replaces diag entries `a` at `i` and `b` at `j` by `gcd` and `lcm`.
fn merge_pair(s: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize, a: &BigInt, b: &BigInt) {
    let eg = a.extended_gcd(b);
    let (g, x, y) = (eg.gcd, eg.x, eg.y);
    let (ag, bg) = (a / &g, b / &g);
    // left factor [[x, y], [-b/g, a/g]], right factor [[1, -y b/g], [1, x a/g]]
    apply_rows(u, i, j, [&x, &y, &(-&bg), &ag]);
    let r01 = -(&y * &bg);
    let r11 = &x * &ag;
    apply_cols(v, i, j, [&BigInt::one(), &r01, &BigInt::one(), &r11]);
    s.set(i, i, g.clone());
    s.set(j, j, a * &bg);
}

fn apply_rows(m: &mut IntMatrix, i: usize, j: usize, t: [&BigInt; 4]) {
    for c in 0..m.cols() {
        let (p, q) = (m.get(i, c).clone(), m.get(j, c).clone());
        m.set(i, c, t[0] * &p + t[1] * &q);
        m.set(j, c, t[2] * &p + t[3] * &q);
    }
}

fn apply_cols(m: &mut IntMatrix, i: usize, j: usize, t: [&BigInt; 4]) {
    for r in 0..m.rows() {
        let (p, q) = (m.get(r, i).clone(), m.get(r, j).clone());
        m.set(r, i, &p * t[0] + &q * t[2]);
        m.set(r, j, &p * t[1] + &q * t[3]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows, 0).unwrap()
    }

    fn check(a: &IntMatrix, r: &SnfResult) {
        assert_eq!(r.u.mul(a).unwrap().mul(&r.v).unwrap(), r.s);
        assert_eq!(r.u.det().unwrap().abs(), BigInt::one());
        assert_eq!(r.v.det().unwrap().abs(), BigInt::one());
        assert!(r.s.is_diagonal());
        let d = r.diagonal();
        for w in d.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn two_by_two() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let r = snf(&a).unwrap();
        check(&a, &r);
        assert_eq!(r.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(r.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(r.free_rank, 0);
    }

    #[test]
    fn identity_has_no_factors() {
        let a = IntMatrix::identity(3);
        let r = snf(&a).unwrap();
        check(&a, &r);
        assert_eq!(r.s, a);
        assert!(r.invariant_factors.is_empty());
        assert_eq!(r.free_rank, 0);
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(2, 3);
        let r = snf(&a).unwrap();
        check(&a, &r);
        assert!(r.s.is_zero());
        assert_eq!(r.free_rank, 2);
    }

    #[test]
    fn coprime_diagonal_is_merged() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let r = snf(&a).unwrap();
        check(&a, &r);
        assert_eq!(r.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(r.invariant_factors, vec![BigInt::from(6)]);
    }

    #[test]
    fn zeros_move_last() {
        let a = m(&[vec![0, 0, 0], vec![0, 5, 0], vec![0, 0, 0], vec![0, 0, 10]]);
        let r = snf(&a).unwrap();
        check(&a, &r);
        assert_eq!(
            r.diagonal(),
            vec![BigInt::from(5), BigInt::from(10), BigInt::zero()]
        );
    }

    #[test]
    fn degenerate_shapes() {
        for (rows, cols) in [(0, 3), (3, 0), (0, 0)] {
            let a = IntMatrix::zeros(rows, cols);
            let r = snf(&a).unwrap();
            assert_eq!(r.free_rank, 0);
            assert!(r.invariant_factors.is_empty());
            assert_eq!((r.u.rows(), r.v.rows()), (rows, cols));
        }
    }
}
