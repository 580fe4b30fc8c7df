//! Incremental integer row echelon basis of a lattice, with each basis row
//! recorded as a sparse combination of the inserted generators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{check_bits, Caps, IntMatrix};
use crate::Result;

pub(crate) struct EchelonBasis {
    width: usize,
    /// Sorted by pivot; entries before the pivot are zero, pivots positive.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    combos: Vec<BTreeMap<usize, BigInt>>,
}

fn leading(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn axpy_vec(dst: &mut [BigInt], k: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += k * s;
        }
    }
}

fn axpy_map(dst: &mut BTreeMap<usize, BigInt>, k: &BigInt, src: &BTreeMap<usize, BigInt>) {
    for (&c, s) in src {
        let e = dst.entry(c).or_insert_with(BigInt::zero);
        *e += k * s;
        if e.is_zero() {
            dst.remove(&c);
        }
    }
}

fn scale_map(m: &BTreeMap<usize, BigInt>, k: &BigInt) -> BTreeMap<usize, BigInt> {
    m.iter().map(|(&c, v)| (c, v * k)).filter(|(_, v)| !v.is_zero()).collect()
}

impl EchelonBasis {
    pub(crate) fn new(width: usize) -> Self {
        EchelonBasis {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    fn row_with_pivot(&self, p: usize) -> Option<usize> {
        self.pivots.binary_search(&p).ok()
    }

    /// Adds generator `id` with coordinates `v`.
    pub(crate) fn insert(&mut self, v: Vec<BigInt>, id: usize, caps: &Caps) -> Result<()> {
        debug_assert_eq!(v.len(), self.width);
        // cheap pass: already in the lattice by exact division alone
        let mut w = v.clone();
        let mut needs_update = false;
        while let Some(lp) = leading(&w) {
            match self.row_with_pivot(lp) {
                Some(i) if w[lp].is_multiple_of(&self.rows[i][lp]) => {
                    let q = -(&w[lp] / &self.rows[i][lp]);
                    axpy_vec(&mut w, &q, &self.rows[i]);
                }
                _ => {
                    needs_update = true;
                    break;
                }
            }
        }
        if !needs_update {
            return Ok(());
        }
        let mut v = v;
        let mut combo: BTreeMap<usize, BigInt> = BTreeMap::from([(id, BigInt::from(1))]);
        while let Some(lp) = leading(&v) {
            let Some(i) = self.row_with_pivot(lp) else {
                if v[lp].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                    combo = scale_map(&combo, &BigInt::from(-1));
                }
                let at = self.pivots.partition_point(|&p| p < lp);
                self.rows.insert(at, v);
                self.pivots.insert(at, lp);
                self.combos.insert(at, combo);
                return Ok(());
            };
            let b = self.rows[i][lp].clone();
            if v[lp].is_multiple_of(&b) {
                let q = -(&v[lp] / &b);
                axpy_vec(&mut v, &q, &self.rows[i]);
                axpy_map(&mut combo, &q, &self.combos[i]);
                continue;
            }
            let e = b.extended_gcd(&v[lp]);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (bg, vg) = (&b / &g, &v[lp] / &g);
            // [s t; -v/g b/g] is unimodular
            let mut new_row: Vec<BigInt> = self.rows[i].iter().map(|x| x * &s).collect();
            axpy_vec(&mut new_row, &t, &v);
            let mut new_combo = scale_map(&self.combos[i], &s);
            axpy_map(&mut new_combo, &t, &combo);
            let mut new_v: Vec<BigInt> = v.iter().map(|x| x * &bg).collect();
            axpy_vec(&mut new_v, &-&vg, &self.rows[i]);
            let mut nv_combo = scale_map(&combo, &bg);
            axpy_map(&mut nv_combo, &-&vg, &self.combos[i]);
            for x in new_row.iter().chain(&new_v) {
                check_bits(x, caps)?;
            }
            self.rows[i] = new_row;
            self.combos[i] = new_combo;
            v = new_v;
            combo = nv_combo;
        }
        Ok(())
    }

    /// Coefficients over the basis rows, or the first position that blocks
    /// membership.
    pub(crate) fn coordinates(&self, target: &[BigInt]) -> std::result::Result<Vec<BigInt>, usize> {
        let mut r = target.to_vec();
        let mut y = vec![BigInt::zero(); self.rows.len()];
        for (i, &p) in self.pivots.iter().enumerate() {
            if let Some(lp) = leading(&r) {
                if lp < p {
                    return Err(lp);
                }
            }
            if r[p].is_zero() {
                continue;
            }
            let (q, rem) = r[p].div_rem(&self.rows[i][p]);
            if !rem.is_zero() {
                return Err(p);
            }
            axpy_vec(&mut r, &-&q, &self.rows[i]);
            y[i] = q;
        }
        match leading(&r) {
            Some(p) => Err(p),
            None => Ok(y),
        }
    }

    /// Σ yᵢ·comboᵢ as a map from generator id to coefficient.
    pub(crate) fn combine(&self, y: &[BigInt]) -> BTreeMap<usize, BigInt> {
        let mut out = BTreeMap::new();
        for (yi, c) in y.iter().zip(&self.combos) {
            if !yi.is_zero() {
                axpy_map(&mut out, yi, c);
            }
        }
        out
    }

    pub(crate) fn matrix(&self) -> Result<IntMatrix> {
        IntMatrix::from_big_rows(self.rows.clone(), self.width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_merge_and_membership() {
        let caps = Caps::default();
        let mut e = EchelonBasis::new(2);
        e.insert(big(&[4, 0]), 0, &caps).unwrap();
        e.insert(big(&[6, 1]), 1, &caps).unwrap();
        e.insert(big(&[8, 0]), 2, &caps).unwrap();
        assert_eq!(e.rank(), 2);
        // lattice spanned by (4,0), (6,1): contains (2, -1)? 6-4 = (2,1); (2,-1) = (2,1) - (0,2)... (0,2) = 2(6,1)-3(4,0)
        let t = big(&[2, -1]);
        let y = e.coordinates(&t).unwrap();
        let x = e.combine(&y);
        let gens = [big(&[4, 0]), big(&[6, 1]), big(&[8, 0])];
        let mut acc = big(&[0, 0]);
        for (id, k) in &x {
            axpy_vec(&mut acc, k, &gens[*id]);
        }
        assert_eq!(acc, t);
        assert!(e.coordinates(&big(&[1, 0])).is_err());
    }
}
