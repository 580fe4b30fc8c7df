//! Boundary matrices of the normalized bar complex and of the tensor model
//! used for products of cyclic groups.

use num_bigint::BigInt;

use super::chain::{faces, BarChain};
use super::group::GroupTable;
use crate::abpres::Classification;
use crate::intlin::{Caps, ExactElimination, SparseIntMatrix};
use crate::{Error, Result};

/// Lexicographic indexing of degree-n cells: `[g₁|…|gₙ]` ↦ Σ (gᵢ−1)·mⁿ⁻ⁱ
/// with m = |G| − 1.
#[derive(Debug, Clone, Copy)]
pub struct CellIndex {
    base: usize,
    degree: usize,
}

impl CellIndex {
    pub fn new(order: usize, degree: usize) -> Self {
        CellIndex {
            base: order - 1,
            degree,
        }
    }

    /// Number of cells, or `None` on overflow.
    pub fn count(&self) -> Option<usize> {
        self.base.checked_pow(self.degree as u32)
    }

    pub fn index(&self, cell: &[u32]) -> usize {
        cell.iter().fold(0, |acc, &g| acc * self.base + (g as usize - 1))
    }

    pub fn cell(&self, mut idx: usize) -> Vec<u32> {
        let mut c = vec![0u32; self.degree];
        for slot in c.iter_mut().rev() {
            *slot = (idx % self.base) as u32 + 1;
            idx /= self.base;
        }
        c
    }
}

/// Cell count of degree n, checked against the materialization cap.
pub fn cell_count(group: &GroupTable, degree: usize, caps: &Caps) -> Result<usize> {
    let n = CellIndex::new(group.order(), degree).count().unwrap_or(usize::MAX);
    if n > caps.max_chain_cells {
        return Err(Error::ResourceLimit {
            what: "bar complex cells",
            cap: caps.max_chain_cells as u64,
            actual: n as u64,
        });
    }
    Ok(n)
}

/// Matrix of ∂ₙ: C_n → C_{n−1}, columns in lexicographic cell order.
pub fn bar_boundary(group: &GroupTable, n: usize) -> Result<SparseIntMatrix> {
    bar_boundary_with(group, n, &Caps::default())
}

pub fn bar_boundary_with(group: &GroupTable, n: usize, caps: &Caps) -> Result<SparseIntMatrix> {
    if n == 0 {
        return Err(Error::domain("the boundary is defined from degree 1"));
    }
    let cols = cell_count(group, n, caps)?;
    let rows = cell_count(group, n - 1, caps)?;
    let src = CellIndex::new(group.order(), n);
    let dst = CellIndex::new(group.order(), n - 1);
    let mut columns = Vec::with_capacity(cols);
    for j in 0..cols {
        let cell = src.cell(j);
        let mut col: Vec<(usize, i64)> = faces(&cell, |a, b| group.mul(a, b))
            .into_iter()
            .map(|(f, s)| (dst.index(&f), s))
            .collect();
        col.sort_unstable();
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
        for (r, v) in col {
            match merged.last_mut() {
                Some((lr, lv)) if *lr == r => *lv += v,
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0);
        columns.push(merged);
    }
    SparseIntMatrix::from_columns(rows, columns)
}

/// Checks ∂ₙ∘∂ₙ₊₁ = 0 exactly.
pub fn check_square_zero(lower: &SparseIntMatrix, upper: &SparseIntMatrix) -> Result<()> {
    if lower.cols() != upper.rows() {
        return Err(Error::Mismatch("boundary matrices do not compose".into()));
    }
    if lower.mul(upper)?.nnz() != 0 {
        return Err(Error::Mismatch("boundary squares to a nonzero matrix".into()));
    }
    Ok(())
}

/// Coordinates of a chain in the cell basis.
pub fn chain_vector(x: &BarChain) -> Vec<BigInt> {
    let ix = CellIndex::new(x.group().order(), x.degree());
    let n = ix.count().expect("chain degree fits");
    let mut v = vec![BigInt::from(0); n];
    for (t, &k) in x.terms() {
        v[ix.index(t)] = BigInt::from(k);
    }
    v
}

/// `H_n(G; ℤ)` from the ranks of ∂ₙ and the Smith form of ∂ₙ₊₁.
pub fn homology_groups(group: &GroupTable, n: usize) -> Result<Classification> {
    homology_groups_with(group, n, &Caps::default())
}

pub fn homology_groups_with(group: &GroupTable, n: usize, caps: &Caps) -> Result<Classification> {
    let dim = cell_count(group, n, caps)?;
    let rank_lower = if n == 0 {
        0
    } else {
        ExactElimination::new(&bar_boundary_with(group, n, caps)?, caps)?.rank()
    };
    let upper = bar_boundary_with(group, n + 1, caps)?;
    let e = ExactElimination::new(&upper, caps)?;
    Ok(Classification {
        free_rank: dim - rank_lower - e.rank(),
        invariant_factors: e.invariant_factors()?,
    })
}

/// The tensor product B(ℤ/m₁) ⊗ … ⊗ B(ℤ/m_k) of normalized bar complexes of
/// cyclic groups. The Alexander–Whitney map identifies its homology with that
/// of the product group, at a fraction of the cell count.
#[derive(Debug, Clone)]
pub struct TensorModel {
    orders: Vec<u32>,
}

/// Cells of one tensor degree: blocks per composition.
struct Blocks {
    comps: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    total: usize,
}

impl TensorModel {
    pub fn new(orders: &[u32]) -> Result<Self> {
        if orders.is_empty() || orders.iter().any(|&m| m < 1) {
            return Err(Error::domain("tensor model needs positive cyclic orders"));
        }
        Ok(TensorModel { orders: orders.to_vec() })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    fn blocks(&self, d: usize, caps: &Caps) -> Result<Blocks> {
        let mut comps = Vec::new();
        compositions(d, self.orders.len(), &mut Vec::new(), &mut comps);
        let mut offsets = Vec::with_capacity(comps.len());
        let mut total = 0usize;
        for c in &comps {
            offsets.push(total);
            let size = self.block_size(c).ok_or_else(|| Error::domain("tensor model too large"))?;
            total = total.checked_add(size).ok_or_else(|| Error::domain("tensor model too large"))?;
        }
        if total > caps.max_chain_cells {
            return Err(Error::ResourceLimit {
                what: "tensor model cells",
                cap: caps.max_chain_cells as u64,
                actual: total as u64,
            });
        }
        Ok(Blocks { comps, offsets, total })
    }

    fn block_size(&self, comp: &[usize]) -> Option<usize> {
        comp.iter()
            .zip(&self.orders)
            .try_fold(1usize, |acc, (&d, &m)| acc.checked_mul((m as usize - 1).checked_pow(d as u32)?))
    }

    pub fn cell_count(&self, d: usize, caps: &Caps) -> Result<usize> {
        Ok(self.blocks(d, caps)?.total)
    }

    fn encode(&self, blocks: &Blocks, comp: &[usize], parts: &[Vec<u32>]) -> usize {
        let b = blocks.comps.binary_search_by(|c| c.as_slice().cmp(comp)).expect("composition present");
        let mut idx = 0usize;
        for (i, part) in parts.iter().enumerate() {
            let base = self.orders[i] as usize - 1;
            for &x in part {
                idx = idx * base + (x as usize - 1);
            }
        }
        blocks.offsets[b] + idx
    }

    fn decode(&self, blocks: &Blocks, idx: usize) -> (Vec<usize>, Vec<Vec<u32>>) {
        let b = blocks.offsets.partition_point(|&o| o <= idx) - 1;
        let comp = blocks.comps[b].clone();
        let mut rest = idx - blocks.offsets[b];
        let mut parts: Vec<Vec<u32>> = comp.iter().map(|&d| vec![0; d]).collect();
        for i in (0..comp.len()).rev() {
            let base = self.orders[i] as usize - 1;
            for slot in parts[i].iter_mut().rev() {
                *slot = (rest % base) as u32 + 1;
                rest /= base;
            }
        }
        (comp, parts)
    }

    /// Differential from tensor degree d to d − 1 (Koszul signs).
    pub fn boundary(&self, d: usize, caps: &Caps) -> Result<SparseIntMatrix> {
        if d == 0 {
            return Err(Error::domain("the boundary is defined from degree 1"));
        }
        let src = self.blocks(d, caps)?;
        let dst = self.blocks(d - 1, caps)?;
        let mut columns = Vec::with_capacity(src.total);
        for j in 0..src.total {
            let (comp, parts) = self.decode(&src, j);
            let mut col: Vec<(usize, i64)> = Vec::new();
            let mut before = 0usize;
            for i in 0..comp.len() {
                let m = self.orders[i];
                let sign = if before.is_multiple_of(2) { 1 } else { -1 };
                for (face, s) in faces(&parts[i], |a, b| (a + b) % m) {
                    let mut c2 = comp.clone();
                    c2[i] -= 1;
                    let mut p2 = parts.clone();
                    p2[i] = face;
                    col.push((self.encode(&dst, &c2, &p2), sign * s));
                }
                before += comp[i];
            }
            col.sort_unstable();
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for (r, v) in col {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0);
            columns.push(merged);
        }
        SparseIntMatrix::from_columns(dst.total, columns)
    }

    /// Alexander–Whitney image of a chain over the product group, as a
    /// coordinate vector in tensor degree `x.degree()`.
    pub fn alexander_whitney(&self, x: &BarChain, caps: &Caps) -> Result<Vec<BigInt>> {
        if x.group().cyclic_factors() != Some(self.orders.as_slice()) {
            return Err(Error::Mismatch(format!("chain over {} does not match the tensor model", x.group().name())));
        }
        let n = x.degree();
        let k = self.orders.len();
        let blocks = self.blocks(n, caps)?;
        let mut v = vec![0i64; blocks.total];
        let mut cuts = Vec::new();
        cut_points(n, k - 1, &mut Vec::new(), &mut cuts);
        for (cell, &coeff) in x.terms() {
            let digits: Vec<Vec<u32>> = cell.iter().map(|&g| self.digits(g)).collect();
            'cut: for c in &cuts {
                let mut bounds = Vec::with_capacity(k + 1);
                bounds.push(0);
                bounds.extend_from_slice(c);
                bounds.push(n);
                let mut comp = Vec::with_capacity(k);
                let mut parts = Vec::with_capacity(k);
                for i in 0..k {
                    let part: Vec<u32> = digits[bounds[i]..bounds[i + 1]].iter().map(|d| d[i]).collect();
                    if part.contains(&0) {
                        continue 'cut;
                    }
                    comp.push(part.len());
                    parts.push(part);
                }
                let idx = self.encode(&blocks, &comp, &parts);
                v[idx] = v[idx].checked_add(coeff).ok_or_else(|| Error::domain("coefficient overflow"))?;
            }
        }
        Ok(v.into_iter().map(BigInt::from).collect())
    }

    fn digits(&self, mut g: u32) -> Vec<u32> {
        let mut d = vec![0u32; self.orders.len()];
        for (i, &m) in self.orders.iter().enumerate().rev() {
            d[i] = g % m;
            g /= m;
        }
        d
    }
}

/// Weak compositions of `d` into `k` parts, lexicographic.
fn compositions(d: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        prefix.push(d);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=d {
        prefix.push(first);
        compositions(d - first, k - 1, prefix, out);
        prefix.pop();
    }
}

/// Non-decreasing sequences of `k` cut points in `0..=n`.
fn cut_points(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    let lo = prefix.last().copied().unwrap_or(0);
    for c in lo..=n {
        prefix.push(c);
        cut_points(n, k, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn cell_index_round_trip() {
        let ix = CellIndex::new(5, 3);
        assert_eq!(ix.count(), Some(64));
        for i in 0..64 {
            assert_eq!(ix.index(&ix.cell(i)), i);
        }
        assert_eq!(ix.cell(0), vec![1, 1, 1]);
    }

    #[test]
    fn boundary_examples() {
        let z5 = GroupTable::cyclic(5).unwrap();
        let d2 = bar_boundary(&z5, 2).unwrap();
        // [t|t] is column 0; [t] row 0, [t^2] row 1
        assert_eq!(d2.column(0), vec![(0, 2), (1, -1)]);
        assert_eq!(bar_boundary(&z5, 1).unwrap().nnz(), 0);
        let z2 = GroupTable::cyclic(2).unwrap();
        assert_eq!(bar_boundary(&z2, 3).unwrap().column(0), vec![]);
    }

    #[test]
    fn squares_to_zero() {
        for g in [
            GroupTable::cyclic(4).unwrap(),
            GroupTable::product_of_cyclic(&[2, 3]).unwrap(),
        ] {
            for n in 1..4 {
                let lo = bar_boundary(&g, n).unwrap();
                let hi = bar_boundary(&g, n + 1).unwrap();
                check_square_zero(&lo, &hi).unwrap();
            }
        }
    }

    #[test]
    fn cyclic_homology() {
        let z3 = GroupTable::cyclic(3).unwrap();
        let h0 = homology_groups(&z3, 0).unwrap();
        assert_eq!((h0.free_rank, h0.invariant_factors.len()), (1, 0));
        assert_eq!(homology_groups(&z3, 1).unwrap().to_string(), "Z/3");
        assert!(homology_groups(&z3, 2).unwrap().is_trivial());
        assert_eq!(homology_groups(&z3, 3).unwrap().to_string(), "Z/3");
    }

    #[test]
    fn tensor_model_square_zero_and_chain_map() {
        let caps = Caps::default();
        let t = TensorModel::new(&[2, 3]).unwrap();
        for d in 1..4 {
            check_square_zero(&t.boundary(d, &caps).unwrap(), &t.boundary(d + 1, &caps).unwrap()).unwrap();
        }
        let g = Arc::new(GroupTable::product_of_cyclic(&[2, 3]).unwrap());
        let ix = CellIndex::new(6, 3);
        for j in (0..125).step_by(7) {
            let x = BarChain::cell(g.clone(), &ix.cell(j)).unwrap();
            let lhs = t.boundary(3, &caps).unwrap().mul_vec(&t.alexander_whitney(&x, &caps).unwrap()).unwrap();
            let rhs = t.alexander_whitney(&x.boundary().unwrap(), &caps).unwrap();
            assert_eq!(lhs, rhs, "cell {:?}", ix.cell(j));
        }
    }

    #[test]
    fn tensor_model_counts() {
        let t = TensorModel::new(&[4, 4, 4]).unwrap();
        assert_eq!(t.cell_count(4, &Caps::default()).unwrap(), 15 * 81);
        assert_eq!(t.cell_count(3, &Caps::default()).unwrap(), 10 * 27);
    }
}
