//! Column lattices: bases, coordinates, kernels and comparison.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::hnf::hnf_in_place;
use super::snf::snf_with;
use super::{Caps, IntMatrix};
use crate::{Error, Result};

/// Outcome of comparing the column lattices of two matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeComparison {
    pub equal: bool,
    pub a_in_b: bool,
    pub b_in_a: bool,
    /// Index of the smaller lattice in the larger one when they are nested.
    /// Zero means infinite index.
    pub index: Option<BigInt>,
}

/// Hermite basis of the lattice spanned by a list of vectors, with the
/// transform expressing each basis vector in the original generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteBasis {
    h: IntMatrix,
    u: Option<IntMatrix>,
    pivots: Vec<usize>,
}

impl HermiteBasis {
    /// Lattice spanned by the rows of `m`.
    pub fn from_rows(m: &IntMatrix, caps: &Caps) -> Result<Self> {
        let mut h = m.clone();
        let pivots = hnf_in_place(&mut h, None, caps)?;
        Ok(HermiteBasis { h, u: None, pivots })
    }

    /// As [`HermiteBasis::from_rows`], also keeping the transform needed by
    /// [`HermiteBasis::express`].
    pub fn from_rows_with_transform(m: &IntMatrix, caps: &Caps) -> Result<Self> {
        let mut h = m.clone();
        let mut u = IntMatrix::identity(h.rows());
        let pivots = hnf_in_place(&mut h, Some(&mut u), caps)?;
        Ok(HermiteBasis { h, u: Some(u), pivots })
    }

    /// Lattice spanned by the columns of `a`.
    pub fn from_columns(a: &IntMatrix, caps: &Caps) -> Result<Self> {
        Self::from_rows(&a.transpose(), caps)
    }

    /// Transform rows `rank..` span the relations among the generators.
    fn syzygies(&self) -> Option<IntMatrix> {
        let u = self.u.as_ref()?;
        let rows: Vec<usize> = (self.rank()..self.h.rows()).collect();
        Some(u.select_rows(&rows))
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.h.cols()
    }

    /// Basis vectors as rows, in Hermite form.
    pub fn basis(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.rank()).collect();
        self.h.select_rows(&rows)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).is_some()
    }

    /// Coefficients over the original generators with `Σ xᵢ vᵢ = v`.
    /// Needs a basis built with a transform.
    pub fn express(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let u = self.u.as_ref()?;
        let y = self.reduce(v)?;
        let mut x = vec![BigInt::zero(); u.cols()];
        for (r, yr) in y.iter().enumerate() {
            if yr.is_zero() {
                continue;
            }
            for (xj, uj) in x.iter_mut().zip(u.row(r)) {
                *xj += yr * uj;
            }
        }
        Some(x)
    }

    /// Coefficients `y` over the basis rows with `Σ yᵣ Hᵣ = v`, if any.
    pub fn reduce(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim() {
            return None;
        }
        let mut res = v.to_vec();
        let mut y = vec![BigInt::zero(); self.rank()];
        for (r, &pc) in self.pivots.iter().enumerate() {
            if res[pc].is_zero() {
                continue;
            }
            let (q, rem) = res[pc].div_rem(self.h.get(r, pc));
            if !rem.is_zero() {
                return None;
            }
            for (x, h) in res.iter_mut().zip(self.h.row(r)) {
                if !h.is_zero() {
                    *x -= &q * h;
                }
            }
            y[r] = q;
        }
        res.iter().all(Zero::is_zero).then_some(y)
    }
}

/// Basis of the column lattice, as columns in Hermite order.
pub fn column_lattice_basis(a: &IntMatrix) -> Result<IntMatrix> {
    Ok(HermiteBasis::from_columns(a, &Caps::default())?.basis().transpose())
}

/// Some `x` with `basis·x = v`, or `None` when `v` is outside the lattice.
/// Unique when the columns of `basis` are independent.
pub fn coordinates_in_basis(basis: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if v.len() != basis.rows() {
        return Err(Error::Mismatch(format!(
            "vector of length {} against {} rows",
            v.len(),
            basis.rows()
        )));
    }
    Ok(HermiteBasis::from_rows_with_transform(&basis.transpose(), &Caps::default())?.express(v))
}

/// Basis of `{x : A·x = 0}` as the columns of the result.
pub fn integer_kernel(a: &IntMatrix) -> Result<IntMatrix> {
    let e = HermiteBasis::from_rows_with_transform(&a.transpose(), &Caps::default())?;
    Ok(e.syzygies().expect("built with transform").transpose())
}

pub fn lattice_equal(a: &IntMatrix, b: &IntMatrix) -> Result<LatticeComparison> {
    lattice_equal_with(a, b, &Caps::default())
}

pub fn lattice_equal_with(a: &IntMatrix, b: &IntMatrix, caps: &Caps) -> Result<LatticeComparison> {
    if a.rows() != b.rows() {
        return Err(Error::Mismatch(format!(
            "lattices in dimensions {} and {}",
            a.rows(),
            b.rows()
        )));
    }
    let ea = HermiteBasis::from_columns(a, caps)?;
    let eb = HermiteBasis::from_columns(b, caps)?;
    let coords = |outer: &HermiteBasis, inner: &IntMatrix| -> Option<IntMatrix> {
        let mut cols = Vec::with_capacity(inner.cols());
        for j in 0..inner.cols() {
            cols.push(outer.reduce(&inner.column(j))?);
        }
        Some(IntMatrix::from_columns(outer.rank(), &cols).expect("consistent lengths"))
    };
    let b_in_a = coords(&ea, b);
    let a_in_b = coords(&eb, a);
    let index = match (&a_in_b, &b_in_a) {
        (Some(_), Some(_)) => Some(BigInt::one()),
        (Some(c), None) => Some(index_of(c, eb.rank(), caps)?),
        (None, Some(c)) => Some(index_of(c, ea.rank(), caps)?),
        (None, None) => None,
    };
    Ok(LatticeComparison {
        equal: a_in_b.is_some() && b_in_a.is_some(),
        a_in_b: a_in_b.is_some(),
        b_in_a: b_in_a.is_some(),
        index,
    })
}

/// Index of the lattice spanned by `coords` inside `ℤ^rank`.
fn index_of(coords: &IntMatrix, rank: usize, caps: &Caps) -> Result<BigInt> {
    let s = snf_with(coords, caps)?;
    if s.rank() < rank {
        return Ok(BigInt::zero());
    }
    Ok(s.diagonal().iter().filter(|d| !d.is_zero()).product())
}
