//! Image membership `b ∈ A·ℤⁿ` for sparse integer matrices.
//!
//! The exact route eliminates ±1 pivots with Markowitz-style ordering (column
//! count first), then finishes the remaining core with a dense Hermite form.
//! The modular route runs the same elimination over `F_p`, where every nonzero
//! entry is a pivot. Both factorizations are kept so that many right-hand
//! sides can be solved against one boundary matrix.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::echelon::EchelonBasis;
use super::{Caps, SparseIntMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Modular(Vec<u32>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipStatus {
    MemberExact,
    NonMember,
    MemberModP,
}

/// Why a right-hand side is not in the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// Elimination over `F_p` left a zero row with nonzero right-hand side.
    Modular { prime: u32, row: usize },
    /// Unit elimination over ℤ left a zero row with nonzero right-hand side.
    ZeroRow { row: usize },
    /// The Hermite basis of the residual lattice does not divide the target.
    Hermite { pivot: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    /// `A·witness = b` exactly, present only for exact members.
    pub witness: Option<Vec<BigInt>>,
    pub moduli: Vec<u32>,
    pub obstruction: Option<Obstruction>,
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        self.status != MembershipStatus::NonMember
    }
}

pub fn in_image(a: &SparseIntMatrix, b: &[BigInt], mode: &SolveMode) -> Result<MembershipVerdict> {
    in_image_with(a, b, mode, &Caps::default())
}

pub fn in_image_with(a: &SparseIntMatrix, b: &[BigInt], mode: &SolveMode, caps: &Caps) -> Result<MembershipVerdict> {
    if b.len() != a.rows() {
        return Err(Error::Mismatch(format!(
            "right-hand side of length {} against {} rows",
            b.len(),
            a.rows()
        )));
    }
    match mode {
        SolveMode::Exact => {
            let v = ExactElimination::new(a, caps)?.solve(b)?;
            if let Some(w) = &v.witness {
                if a.mul_vec(w)? != b {
                    return Err(Error::Mismatch("exact witness failed verification".into()));
                }
            }
            Ok(v)
        }
        SolveMode::Modular(primes) => {
            let mut fs = Vec::with_capacity(primes.len());
            for &p in primes {
                fs.push(ModularElimination::new(a, p)?);
            }
            Ok(modular_verdict(&fs, b))
        }
    }
}

/// Combines per-prime solves into one verdict; any refusal is decisive.
pub(crate) fn modular_verdict(fs: &[ModularElimination], b: &[BigInt]) -> MembershipVerdict {
    for f in fs {
        if let Err(row) = f.solve(b) {
            return MembershipVerdict {
                status: MembershipStatus::NonMember,
                witness: None,
                moduli: vec![f.prime()],
                obstruction: Some(Obstruction::Modular { prime: f.prime(), row }),
            };
        }
    }
    MembershipVerdict {
        status: MembershipStatus::MemberModP,
        witness: None,
        moduli: fs.iter().map(ModularElimination::prime).collect(),
        obstruction: None,
    }
}

trait Scalar: Copy + PartialEq + std::fmt::Debug {
    fn is_zero(self) -> bool;
    fn is_pivot(self) -> bool;
    /// The multiplier `m` with `c - m·s = 0`, for pivot value `s`.
    fn multiplier(self, c: Self) -> Self;
    /// `a - m·b`, or `None` on overflow.
    fn sub_mul(a: Self, m: Self, b: Self) -> Option<Self>;
}

impl Scalar for i64 {
    fn is_zero(self) -> bool {
        self == 0
    }
    fn is_pivot(self) -> bool {
        self == 1 || self == -1
    }
    fn multiplier(self, c: i64) -> i64 {
        c * self
    }
    fn sub_mul(a: i64, m: i64, b: i64) -> Option<i64> {
        m.checked_mul(b).and_then(|p| a.checked_sub(p))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct ModP {
    v: u32,
    p: u32,
}

impl ModP {
    fn new(v: i64, p: u32) -> Self {
        ModP {
            v: v.rem_euclid(p as i64) as u32,
            p,
        }
    }
    fn mul(self, o: ModP) -> ModP {
        ModP {
            v: ((self.v as u64 * o.v as u64) % self.p as u64) as u32,
            p: self.p,
        }
    }
    fn inv(self) -> ModP {
        // Fermat; p is prime
        let mut base = self.v as u64;
        let mut e = self.p as u64 - 2;
        let mut acc = 1u64;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        ModP { v: acc as u32, p: self.p }
    }
}

impl Scalar for ModP {
    fn is_zero(self) -> bool {
        self.v == 0
    }
    fn is_pivot(self) -> bool {
        self.v != 0
    }
    fn multiplier(self, c: ModP) -> ModP {
        c.mul(self.inv())
    }
    fn sub_mul(a: ModP, m: ModP, b: ModP) -> Option<ModP> {
        let p = a.p as u64;
        let prod = (m.v as u64 * b.v as u64) % p;
        Some(ModP {
            v: ((a.v as u64 + p - prod) % p) as u32,
            p: a.p,
        })
    }
}

#[derive(Debug, Clone)]
struct PivotRecord<S> {
    row: usize,
    col: usize,
    value: S,
    /// Remaining entries of the pivot row at elimination time (pivot column excluded).
    others: Vec<(u32, S)>,
    /// Row updates `b[k] -= m·b[row]`, in order.
    elims: Vec<(u32, S)>,
}

struct Factored<S> {
    rows: usize,
    cols: usize,
    pivots: Vec<PivotRecord<S>>,
    /// Rows that ended with no entries.
    zero_rows: Vec<usize>,
    /// Non-pivotable remainder: rows and columns (original indices) plus entries.
    core_rows: Vec<usize>,
    core_cols: Vec<usize>,
    core_entries: Vec<Vec<(u32, S)>>,
}

fn eliminate<S: Scalar>(a: &SparseIntMatrix, conv: impl Fn(i64) -> S) -> Result<Factored<S>> {
    let (nr, nc) = (a.rows(), a.cols());
    let mut row_data: Vec<Vec<(u32, S)>> = vec![Vec::new(); nr];
    let mut col_rows: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); nc];
    for &(r, c, v) in a.triplets() {
        let s = conv(v);
        if !s.is_zero() {
            row_data[r].push((c as u32, s));
            col_rows[c].insert(r as u32);
        }
    }
    for r in &mut row_data {
        r.sort_unstable_by_key(|e| e.0);
    }
    let mut row_active = vec![true; nr];
    let mut col_active = vec![true; nc];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..nc).map(|c| Reverse((col_rows[c].len(), c))).collect();
    let mut pivots = Vec::new();
    let mut scratch: Vec<(u32, S)> = Vec::new();

    while let Some(Reverse((count, j))) = heap.pop() {
        if !col_active[j] || col_rows[j].len() != count {
            continue;
        }
        if count == 0 {
            col_active[j] = false;
            continue;
        }
        // pivot row: unit entry with the shortest row
        let mut best: Option<(usize, usize, S)> = None;
        for &r in &col_rows[j] {
            let r = r as usize;
            let v = lookup(&row_data[r], j);
            if v.is_pivot() {
                let len = row_data[r].len();
                if best.as_ref().is_none_or(|b| len < b.1) {
                    best = Some((r, len, v));
                }
            }
        }
        // no unit: parked until an update touches the column again
        let Some((i, _, s)) = best else { continue };

        let pivot_row = std::mem::take(&mut row_data[i]);
        let others: Vec<(u32, S)> = pivot_row.iter().copied().filter(|e| e.0 as usize != j).collect();
        let targets: Vec<u32> = col_rows[j].iter().copied().filter(|&r| r as usize != i).collect();
        let mut elims = Vec::with_capacity(targets.len());
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for k in targets {
            let ku = k as usize;
            let c = lookup(&row_data[ku], j);
            let m = s.multiplier(c);
            scratch.clear();
            let row_k = std::mem::take(&mut row_data[ku]);
            // merge row_k - m·pivot_row
            let (mut x, mut y) = (0, 0);
            while x < row_k.len() || y < pivot_row.len() {
                let cx = row_k.get(x).map_or(u32::MAX, |e| e.0);
                let cy = pivot_row.get(y).map_or(u32::MAX, |e| e.0);
                if cx < cy {
                    scratch.push(row_k[x]);
                    x += 1;
                } else if cy < cx {
                    let val = S::sub_mul(conv(0), m, pivot_row[y].1).ok_or_else(overflow)?;
                    if !val.is_zero() {
                        scratch.push((cy, val));
                        col_rows[cy as usize].insert(k);
                        touched.insert(cy as usize);
                    }
                    y += 1;
                } else {
                    let val = S::sub_mul(row_k[x].1, m, pivot_row[y].1).ok_or_else(overflow)?;
                    if val.is_zero() {
                        col_rows[cx as usize].remove(&k);
                    } else {
                        scratch.push((cx, val));
                    }
                    touched.insert(cx as usize);
                    x += 1;
                    y += 1;
                }
            }
            row_data[ku] = scratch.clone();
            elims.push((k, m));
        }
        for &(l, _) in &pivot_row {
            col_rows[l as usize].remove(&(i as u32));
            touched.insert(l as usize);
        }
        debug_assert!(col_rows[j].is_empty());
        row_active[i] = false;
        col_active[j] = false;
        for l in touched {
            if col_active[l] {
                heap.push(Reverse((col_rows[l].len(), l)));
            }
        }
        pivots.push(PivotRecord {
            row: i,
            col: j,
            value: s,
            others,
            elims,
        });
    }

    let mut zero_rows = Vec::new();
    let mut core_rows = Vec::new();
    for r in 0..nr {
        if !row_active[r] {
            continue;
        }
        if row_data[r].is_empty() {
            zero_rows.push(r);
        } else {
            core_rows.push(r);
        }
    }
    let core_cols: Vec<usize> = (0..nc).filter(|&c| col_active[c] && !col_rows[c].is_empty()).collect();
    let core_entries = core_rows.iter().map(|&r| std::mem::take(&mut row_data[r])).collect();
    Ok(Factored {
        rows: nr,
        cols: nc,
        pivots,
        zero_rows,
        core_rows,
        core_cols,
        core_entries,
    })
}

fn lookup<S: Scalar>(row: &[(u32, S)], col: usize) -> S {
    let i = row.binary_search_by_key(&(col as u32), |e| e.0).expect("column set and row data agree");
    row[i].1
}

fn overflow() -> Error {
    Error::ResourceLimit {
        what: "sparse elimination entry bit length",
        cap: 63,
        actual: 64,
    }
}

/// Exact factorization: unit-pivot elimination plus an echelon basis of the
/// remaining core columns.
pub struct ExactElimination {
    f: Factored<i64>,
    core: EchelonBasis,
    caps: Caps,
}

impl ExactElimination {
    pub fn new(a: &SparseIntMatrix, caps: &Caps) -> Result<Self> {
        if a.cols() > caps.max_cols {
            return Err(Error::ResourceLimit {
                what: "columns for exact membership",
                cap: caps.max_cols as u64,
                actual: a.cols() as u64,
            });
        }
        let f = eliminate(a, |v| v)?;
        let col_pos: std::collections::HashMap<usize, usize> =
            f.core_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut columns = vec![vec![BigInt::zero(); f.core_rows.len()]; f.core_cols.len()];
        for (ri, entries) in f.core_entries.iter().enumerate() {
            for &(c, v) in entries {
                columns[col_pos[&(c as usize)]][ri] = BigInt::from(v);
            }
        }
        let mut core = EchelonBasis::new(f.core_rows.len());
        for (t, col) in columns.into_iter().enumerate() {
            core.insert(col, t, caps)?;
        }
        Ok(ExactElimination {
            f,
            core,
            caps: caps.clone(),
        })
    }

    /// Size of the core left after unit elimination.
    pub fn core_shape(&self) -> (usize, usize) {
        (self.f.core_rows.len(), self.f.core_cols.len())
    }

    pub fn rank(&self) -> usize {
        self.f.pivots.len() + self.core.rank()
    }

    /// Invariant factors of the matrix other than 1. Unit pivots contribute
    /// only ones, so these come from the core alone.
    pub fn invariant_factors(&self) -> Result<Vec<BigInt>> {
        if self.core.rank() == 0 {
            return Ok(Vec::new());
        }
        Ok(super::snf_with(&self.core.matrix()?, &self.caps)?.invariant_factors)
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<MembershipVerdict> {
        if b.len() != self.f.rows {
            return Err(Error::Mismatch(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.f.rows
            )));
        }
        let mut rhs = b.to_vec();
        for p in &self.f.pivots {
            if rhs[p.row].is_zero() {
                continue;
            }
            let bi = rhs[p.row].clone();
            for &(k, m) in &p.elims {
                rhs[k as usize] -= &bi * m;
            }
        }
        let non_member = |o: Obstruction| MembershipVerdict {
            status: MembershipStatus::NonMember,
            witness: None,
            moduli: Vec::new(),
            obstruction: Some(o),
        };
        if let Some(&row) = self.f.zero_rows.iter().find(|&&r| !rhs[r].is_zero()) {
            return Ok(non_member(Obstruction::ZeroRow { row }));
        }
        let residual: Vec<BigInt> = self.f.core_rows.iter().map(|&r| rhs[r].clone()).collect();
        let y = match self.core.coordinates(&residual) {
            Ok(y) => y,
            Err(pos) => {
                return Ok(non_member(Obstruction::Hermite {
                    pivot: self.f.core_rows[pos],
                }))
            }
        };
        let mut x = vec![BigInt::zero(); self.f.cols];
        for (t, k) in self.core.combine(&y) {
            x[self.f.core_cols[t]] = k;
        }
        for p in self.f.pivots.iter().rev() {
            let mut acc = rhs[p.row].clone();
            for &(l, v) in &p.others {
                let xl = &x[l as usize];
                if !xl.is_zero() {
                    acc -= xl * v;
                }
            }
            x[p.col] = acc * p.value;
            super::check_bits(&x[p.col], &self.caps)?;
        }
        Ok(MembershipVerdict {
            status: MembershipStatus::MemberExact,
            witness: Some(x),
            moduli: Vec::new(),
            obstruction: None,
        })
    }
}

/// Full elimination over `F_p`.
pub struct ModularElimination {
    f: Factored<ModP>,
    p: u32,
}

impl ModularElimination {
    pub fn new(a: &SparseIntMatrix, p: u32) -> Result<Self> {
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(Error::domain(format!("{p} is not a prime modulus")));
        }
        let f = eliminate(a, |v| ModP::new(v, p))?;
        debug_assert!(f.core_cols.is_empty());
        Ok(ModularElimination { f, p })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.f.pivots.len()
    }

    /// Witness mod p, or the row that refutes membership.
    pub fn solve(&self, b: &[BigInt]) -> std::result::Result<Vec<u32>, usize> {
        let p = self.p;
        let pb = BigInt::from(p);
        let mut rhs: Vec<ModP> = b
            .iter()
            .map(|x| ModP {
                v: x.mod_floor(&pb).to_u32().expect("reduced below p"),
                p,
            })
            .collect();
        for piv in &self.f.pivots {
            let bi = rhs[piv.row];
            if bi.is_zero() {
                continue;
            }
            for &(k, m) in &piv.elims {
                rhs[k as usize] = ModP::sub_mul(rhs[k as usize], m, bi).expect("modular arithmetic is total");
            }
        }
        if let Some(&row) = self.f.zero_rows.iter().find(|&&r| !rhs[r].is_zero()) {
            return Err(row);
        }
        let mut x = vec![ModP { v: 0, p }; self.f.cols];
        for piv in self.f.pivots.iter().rev() {
            let mut acc = rhs[piv.row];
            for &(l, v) in &piv.others {
                acc = ModP::sub_mul(acc, x[l as usize], v).expect("modular arithmetic is total");
            }
            x[piv.col] = acc.mul(piv.value.inv());
        }
        Ok(x.into_iter().map(|m| m.v).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diag_two_member() {
        let a = SparseIntMatrix::new(2, 2, vec![(0, 0, 2), (1, 1, 2)]).unwrap();
        let v = in_image(&a, &big(&[2, 2]), &SolveMode::Exact).unwrap();
        assert_eq!(v.status, MembershipStatus::MemberExact);
        assert_eq!(v.witness.unwrap(), big(&[1, 1]));
    }

    #[test]
    fn diag_two_non_member() {
        let a = SparseIntMatrix::new(1, 1, vec![(0, 0, 2)]).unwrap();
        let v = in_image(&a, &big(&[1]), &SolveMode::Exact).unwrap();
        assert_eq!(v.status, MembershipStatus::NonMember);
        assert!(matches!(v.obstruction, Some(Obstruction::Hermite { .. })));
        let v = in_image(&a, &big(&[1]), &SolveMode::Modular(vec![3, 2])).unwrap();
        assert_eq!(v.status, MembershipStatus::NonMember);
        assert_eq!(v.obstruction, Some(Obstruction::Modular { prime: 2, row: 0 }));
    }

    #[test]
    fn modular_member_is_not_exact() {
        let a = SparseIntMatrix::new(1, 1, vec![(0, 0, 2)]).unwrap();
        let v = in_image(&a, &big(&[1]), &SolveMode::Modular(vec![3, 5, 7])).unwrap();
        assert_eq!(v.status, MembershipStatus::MemberModP);
        assert_eq!(v.moduli, vec![3, 5, 7]);
        assert!(v.witness.is_none());
    }

    #[test]
    fn unit_elimination_with_fill() {
        // columns: (1,1,0), (0,1,1), (1,0,1); lattice has index 2 in Z^3
        let a = SparseIntMatrix::new(3, 3, vec![(0, 0, 1), (1, 0, 1), (1, 1, 1), (2, 1, 1), (0, 2, 1), (2, 2, 1)])
            .unwrap();
        let f = ExactElimination::new(&a, &Caps::default()).unwrap();
        assert_eq!(f.rank(), 3);
        let yes = f.solve(&big(&[2, 0, 0])).unwrap();
        assert_eq!(yes.status, MembershipStatus::MemberExact);
        assert_eq!(a.mul_vec(yes.witness.as_ref().unwrap()).unwrap(), big(&[2, 0, 0]));
        let no = f.solve(&big(&[1, 0, 0])).unwrap();
        assert_eq!(no.status, MembershipStatus::NonMember);
    }

    #[test]
    fn column_cap() {
        let a = SparseIntMatrix::zero(1, 10);
        let caps = Caps {
            max_cols: 4,
            ..Caps::default()
        };
        let e = in_image_with(&a, &big(&[0]), &SolveMode::Exact, &caps).unwrap_err();
        assert!(e.is_resource_limit());
        // modular mode has no column cap
        assert!(in_image_with(&a, &big(&[0]), &SolveMode::Modular(vec![3]), &caps).is_ok());
    }

    #[test]
    fn rejects_composite_modulus() {
        let a = SparseIntMatrix::zero(1, 1);
        assert!(ModularElimination::new(&a, 9).is_err());
    }
}
