//! Diagonal tori (F*)ⁿ and the cycle classes that live in their homology.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::chain::{c_cycle, CycleClass};
use super::group::{GroupHom, GroupTable};
use crate::fields::{FieldElem, FiniteField};
use crate::{Error, Result};

/// (F*)ⁿ as diagonal matrices; `diag(a₁,…,aₙ)` has index Σ log(aᵢ)·(q−1)ⁿ⁻ⁱ.
#[derive(Debug, Clone)]
pub struct Torus {
    table: Arc<GroupTable>,
    field: FiniteField,
    rank: usize,
}

impl Torus {
    pub fn new(field: &FiniteField, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::domain("torus rank must be positive"));
        }
        let n = field.unit_order();
        let base = GroupTable::product_of_cyclic(&vec![n; rank])?;
        let labels = (0..base.order() as u32)
            .map(|g| {
                let entries = Self::digits(g, n, rank);
                let l: Vec<String> = entries.iter().map(|&k| field.label(field.from_exponent(k as u64))).collect();
                format!("diag({})", l.join(","))
            })
            .collect();
        let name = format!("(F_{}*)^{}", field.order(), rank);
        Ok(Torus {
            table: Arc::new(base.relabeled(name, labels)?),
            field: field.clone(),
            rank,
        })
    }

    fn digits(mut g: u32, n: u32, rank: usize) -> Vec<u32> {
        let mut d = vec![0; rank];
        for slot in d.iter_mut().rev() {
            *slot = g % n;
            g /= n;
        }
        d
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn diag(&self, entries: &[FieldElem]) -> Result<u32> {
        if entries.len() != self.rank {
            return Err(Error::Mismatch(format!("{} diagonal entries in rank {}", entries.len(), self.rank)));
        }
        let n = self.field.unit_order();
        entries.iter().try_fold(0u32, |acc, &a| Ok(acc * n + self.field.dlog(a)?))
    }

    pub fn entries(&self, g: u32) -> Vec<FieldElem> {
        Self::digits(g, self.field.unit_order(), self.rank)
            .into_iter()
            .map(|k| self.field.from_exponent(k as u64))
            .collect()
    }

    /// `c(diag(…), …)` from rows of diagonal entries.
    pub fn c(&self, diags: &[Vec<FieldElem>]) -> Result<CycleClass> {
        let elems = diags.iter().map(|d| self.diag(d)).collect::<Result<Vec<_>>>()?;
        c_cycle(&self.table, &elems)
    }
}

/// The named torus classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusClassKind {
    /// `c(diag(a,1), diag(1,b), diag(1,c))`
    K,
    /// `c(diag(a,a⁻¹), diag(b,b⁻¹), diag(c,c⁻¹))`
    S,
    /// `c(diag(a,1,1), diag(1,b,1), diag(1,c,c⁻¹))` in rank 3
    Psi,
    /// `c(diag(a,a), diag(b,1), diag(c,c⁻¹))`
    Phi,
    /// `c(diag(a,1), diag(b,b⁻¹))`
    Iota,
}

impl TorusClassKind {
    pub fn arity(self) -> usize {
        match self {
            TorusClassKind::Iota => 2,
            _ => 3,
        }
    }

    pub fn torus_rank(self) -> usize {
        match self {
            TorusClassKind::Psi => 3,
            _ => 2,
        }
    }
}

impl FromStr for TorusClassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "k" => TorusClassKind::K,
            "s" => TorusClassKind::S,
            "psi" => TorusClassKind::Psi,
            "phi" => TorusClassKind::Phi,
            "iota" => TorusClassKind::Iota,
            _ => return Err(Error::parse(format!("unknown torus class `{s}`"))),
        })
    }
}

impl fmt::Display for TorusClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusClassKind::K => "k",
            TorusClassKind::S => "s",
            TorusClassKind::Psi => "psi",
            TorusClassKind::Phi => "phi",
            TorusClassKind::Iota => "iota",
        })
    }
}

/// Builds the class over a fresh torus of the right rank.
pub fn torus_class(kind: TorusClassKind, field: &FiniteField, args: &[FieldElem]) -> Result<CycleClass> {
    torus_class_in(kind, &Torus::new(field, kind.torus_rank())?, args)
}

pub fn torus_class_in(kind: TorusClassKind, torus: &Torus, args: &[FieldElem]) -> Result<CycleClass> {
    if args.len() != kind.arity() {
        return Err(Error::domain(format!("{kind} takes {} arguments, got {}", kind.arity(), args.len())));
    }
    if torus.rank() != kind.torus_rank() {
        return Err(Error::domain(format!("{kind} lives in rank {}, not {}", kind.torus_rank(), torus.rank())));
    }
    let f = torus.field();
    if args.iter().any(|a| a.is_zero()) {
        return Err(Error::domain("torus class arguments must be units"));
    }
    let one = f.one();
    let inv = |x: FieldElem| f.inv(x).expect("units are invertible");
    let a = args[0];
    let b = args[1];
    let rows: Vec<Vec<FieldElem>> = match kind {
        TorusClassKind::K => vec![vec![a, one], vec![one, b], vec![one, args[2]]],
        TorusClassKind::S => vec![vec![a, inv(a)], vec![b, inv(b)], vec![args[2], inv(args[2])]],
        TorusClassKind::Psi => vec![vec![a, one, one], vec![one, b, one], vec![one, args[2], inv(args[2])]],
        TorusClassKind::Phi => vec![vec![a, a], vec![b, one], vec![args[2], inv(args[2])]],
        TorusClassKind::Iota => vec![vec![a, one], vec![b, inv(b)]],
    };
    torus.c(&rows)
}

/// `diag(a,b) ↦ diag(a,b,1)`.
pub fn inclusion(t2: &Torus, t3: &Torus) -> Result<GroupHom> {
    if t2.rank() != 2 || t3.rank() != 3 || t2.field().order() != t3.field().order() {
        return Err(Error::Mismatch("inclusion needs tori of rank 2 and 3 over one field".into()));
    }
    let one = t3.field().one();
    GroupHom::from_fn(t2.table().clone(), t3.table().clone(), |g| {
        let e = t2.entries(g);
        t3.diag(&[e[0], e[1], one])
    })
}

/// Conjugation by w = [0 −1; 1 0] on the diagonal torus: `diag(a,b) ↦ diag(b,a)`.
pub fn conj_w(t2: &Torus) -> Result<GroupHom> {
    if t2.rank() != 2 {
        return Err(Error::Mismatch("conjugation by w acts on the rank-2 torus".into()));
    }
    GroupHom::from_fn(t2.table().clone(), t2.table().clone(), |g| {
        let e = t2.entries(g);
        t2.diag(&[e[1], e[0]])
    })
}

/// Maps a chain along a homomorphism.
pub fn map_chain(f: &GroupHom, x: &super::chain::BarChain) -> Result<super::chain::BarChain> {
    x.map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_indexing() {
        let f = FiniteField::from_order(5).unwrap();
        let t = Torus::new(&f, 2).unwrap();
        assert_eq!(t.table().order(), 16);
        let (two, three) = (f.from_int(2), f.from_int(3));
        let g = t.diag(&[two, three]).unwrap();
        assert_eq!(t.entries(g), vec![two, three]);
        assert_eq!(t.table().label(g), "diag(2,3)");
        assert_eq!(t.table().label(0), "diag(1,1)");
    }

    #[test]
    fn k_over_f3_repeats_vanish() {
        let f = FiniteField::from_order(3).unwrap();
        let two = f.from_int(2);
        let k = torus_class(TorusClassKind::K, &f, &[two, two, two]).unwrap();
        // diag(1,2) appears twice, so the signed sum cancels
        assert!(k.chain().is_zero());
        let k2 = torus_class(TorusClassKind::K, &FiniteField::from_order(5).unwrap(), &[
            FiniteField::from_order(5).unwrap().from_int(2),
            FiniteField::from_order(5).unwrap().from_int(2),
            FiniteField::from_order(5).unwrap().from_int(3),
        ])
        .unwrap();
        assert_eq!(k2.chain().len(), 6);
    }

    #[test]
    fn s_is_cycle_and_w_inverts() {
        let f = FiniteField::from_order(5).unwrap();
        let (a, b, c) = (f.from_int(2), f.from_int(3), f.from_int(2));
        let t = Torus::new(&f, 2).unwrap();
        let s = torus_class_in(TorusClassKind::S, &t, &[a, b, c]).unwrap();
        let inv = |x| f.inv(x).unwrap();
        let s_inv = torus_class_in(TorusClassKind::S, &t, &[inv(a), inv(b), inv(c)]).unwrap();
        let w = conj_w(&t).unwrap();
        assert_eq!(map_chain(&w, s.chain()).unwrap(), *s_inv.chain());
        let one = f.one();
        assert!(torus_class_in(TorusClassKind::S, &t, &[one, one, one]).unwrap().chain().is_zero());
    }

    #[test]
    fn inclusion_of_k() {
        let f = FiniteField::from_order(4).unwrap();
        let (t2, t3) = (Torus::new(&f, 2).unwrap(), Torus::new(&f, 3).unwrap());
        let w = f.generator();
        let w2 = f.mul(w, w);
        let one = f.one();
        let k = torus_class_in(TorusClassKind::K, &t2, &[w, w, w2]).unwrap();
        let inc = inclusion(&t2, &t3).unwrap();
        let expect = t3.c(&[vec![w, one, one], vec![one, w, one], vec![one, w2, one]]).unwrap();
        assert_eq!(k.map(&inc).unwrap(), expect);
        let psi = torus_class(TorusClassKind::Psi, &f, &[w, w, w2]).unwrap();
        let expect = t3.c(&[vec![w, one, one], vec![one, w, one], vec![one, w2, w]]).unwrap();
        assert_eq!(psi, expect);
    }

    #[test]
    fn arity_errors() {
        let f = FiniteField::from_order(5).unwrap();
        assert!(torus_class(TorusClassKind::Iota, &f, &[f.one()]).is_err());
        assert!("bogus".parse::<TorusClassKind>().is_err());
        assert_eq!("psi".parse::<TorusClassKind>().unwrap(), TorusClassKind::Psi);
    }
}
