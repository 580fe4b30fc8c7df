//! Finitely presented abelian groups `ℤⁿ / ⟨relations⟩` and maps between them.
//!
//! Presentations are never minimized: generator order and labels stay exactly
//! as constructed so that report coordinates are reproducible. Classification
//! is the only canonicalizing operation.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::intlin::{integer_kernel, lattice_equal_with, snf_with, Caps, HermiteBasis, IntMatrix, SparseIntMatrix};
use crate::{Error, Result};

/// Isomorphism type `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `d₁ | d₂ | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl Classification {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().product())
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element given by its coordinates on the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbElem {
    coords: Vec<BigInt>,
}

impl AbElem {
    pub fn new(coords: Vec<BigInt>) -> Self {
        AbElem { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        AbElem {
            coords: coords.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        AbElem {
            coords: vec![BigInt::zero(); n],
        }
    }

    /// The `i`-th generator.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.coords[i] = BigInt::one();
        e
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// True when every coordinate vanishes (not the same as being zero in the group).
    pub fn is_zero_vector(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &AbElem) -> AbElem {
        assert_eq!(self.len(), other.len(), "elements of different presentations");
        AbElem {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &AbElem) -> AbElem {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> AbElem {
        AbElem {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    /// Adds `k` times generator `i` in place.
    pub fn add_gen(&mut self, i: usize, k: impl Into<BigInt>) {
        self.coords[i] += k.into();
    }
}

#[derive(Debug, Clone)]
pub struct AbPres {
    ngens: usize,
    relations: IntMatrix,
    labels: Option<Vec<String>>,
    /// Generator counts of the factors when built by [`AbPres::tensor`].
    tensor_of: Option<(usize, usize)>,
    caps: Caps,
    lattice: OnceLock<HermiteBasis>,
}

impl PartialEq for AbPres {
    fn eq(&self, other: &Self) -> bool {
        self.ngens == other.ngens && self.relations == other.relations && self.labels == other.labels
    }
}

impl AbPres {
    pub fn new(ngens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != ngens {
            return Err(Error::Mismatch(format!(
                "relation matrix has {} columns for {ngens} generators",
                relations.cols()
            )));
        }
        Ok(AbPres {
            ngens,
            relations,
            labels: None,
            tensor_of: None,
            caps: Caps::default(),
            lattice: OnceLock::new(),
        })
    }

    pub fn from_relations(ngens: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(ngens, IntMatrix::from_rows(rows, ngens)?)
    }

    /// `ℤ/d₁ ⊕ … ⊕ ℤ/d_k`, with `dᵢ = 0` meaning a free summand.
    pub fn cyclic_sum(orders: &[u64]) -> Self {
        let n = orders.len();
        let rows: Vec<Vec<i64>> = orders
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| {
                let mut r = vec![0i64; n];
                r[i] = d as i64;
                r
            })
            .collect();
        Self::from_relations(n, &rows).expect("consistent widths")
    }

    pub fn free(n: usize) -> Self {
        Self::new(n, IntMatrix::zeros(0, n)).expect("consistent widths")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.ngens {
            return Err(Error::Mismatch(format!(
                "{} labels for {} generators",
                labels.len(),
                self.ngens
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self.lattice = OnceLock::new();
        self
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("e{i}"),
        }
    }

    /// Presentation with extra relation rows appended.
    pub fn add_relations(&self, extra: &IntMatrix) -> Result<Self> {
        let mut p = AbPres::new(self.ngens, self.relations.vcat(extra)?)?;
        p.labels = self.labels.clone();
        p.tensor_of = self.tensor_of;
        p.caps = self.caps.clone();
        Ok(p)
    }

    fn relation_lattice(&self) -> Result<&HermiteBasis> {
        if let Some(h) = self.lattice.get() {
            return Ok(h);
        }
        let h = HermiteBasis::from_rows(&self.relations, &self.caps)?;
        Ok(self.lattice.get_or_init(|| h))
    }

    pub fn classify(&self) -> Result<Classification> {
        // the Hermite basis has at most `ngens` rows, which keeps the SNF transforms small
        let s = snf_with(&self.relation_lattice()?.basis(), &self.caps)?;
        Ok(Classification {
            free_rank: self.ngens - s.rank(),
            invariant_factors: s.invariant_factors,
        })
    }

    fn check_elem(&self, x: &AbElem) -> Result<()> {
        if x.len() != self.ngens {
            return Err(Error::Mismatch(format!(
                "element with {} coordinates in a presentation on {} generators",
                x.len(),
                self.ngens
            )));
        }
        Ok(())
    }

    /// Whether `x` is zero in the group.
    pub fn is_zero(&self, x: &AbElem) -> Result<bool> {
        self.check_elem(x)?;
        if x.is_zero_vector() {
            return Ok(true);
        }
        Ok(self.relation_lattice()?.contains(x.coords()))
    }

    pub fn elem_eq(&self, x: &AbElem, y: &AbElem) -> Result<bool> {
        self.check_elem(x)?;
        self.check_elem(y)?;
        self.is_zero(&x.sub(y))
    }

    /// Tensor product with generators `eᵢ⊗fⱼ` at index `i·n_Q + j`.
    pub fn tensor(&self, other: &AbPres) -> Result<AbPres> {
        let (np, nq) = (self.ngens, other.ngens);
        let n = np.checked_mul(nq).filter(|&n| n <= self.caps.max_cols).ok_or(Error::ResourceLimit {
            what: "tensor product generators",
            cap: self.caps.max_cols as u64,
            actual: (np as u64).saturating_mul(nq as u64),
        })?;
        let mut rows = Vec::new();
        for r in 0..self.relations.rows() {
            for j in 0..nq {
                let mut row = vec![BigInt::zero(); n];
                for i in 0..np {
                    row[i * nq + j] = self.relations.get(r, i).clone();
                }
                rows.push(row);
            }
        }
        for i in 0..np {
            for s in 0..other.relations.rows() {
                let mut row = vec![BigInt::zero(); n];
                for j in 0..nq {
                    row[i * nq + j] = other.relations.get(s, j).clone();
                }
                rows.push(row);
            }
        }
        let mut t = AbPres::new(n, IntMatrix::from_big_rows(rows, n)?)?;
        if self.labels.is_some() || other.labels.is_some() {
            let labels = (0..np)
                .flat_map(|i| (0..nq).map(move |j| (i, j)))
                .map(|(i, j)| format!("{}⊗{}", self.label(i), other.label(j)))
                .collect();
            t.labels = Some(labels);
        }
        t.tensor_of = Some((np, nq));
        t.caps = self.caps.clone();
        Ok(t)
    }

    /// Generator counts of the tensor factors, if built by [`AbPres::tensor`].
    pub fn tensor_factors(&self) -> Option<(usize, usize)> {
        self.tensor_of
    }

    /// `T / ⟨eᵢ⊗eⱼ + eⱼ⊗eᵢ⟩` for a tensor square `T = U⊗U`.
    pub fn sigma_quotient(&self) -> Result<AbPres> {
        let Some((a, b)) = self.tensor_of.filter(|(a, b)| a == b) else {
            return Err(Error::domain("σ-quotient needs a tensor square"));
        };
        debug_assert_eq!(a, b);
        let mut rows = Vec::new();
        for i in 0..a {
            for j in i..a {
                let mut row = vec![BigInt::zero(); self.ngens];
                row[i * a + j] += 1;
                row[j * a + i] += 1;
                rows.push(row);
            }
        }
        let extra = IntMatrix::from_big_rows(rows, self.ngens)?;
        let mut t = self.add_relations(&extra)?;
        t.tensor_of = None;
        Ok(t)
    }

    /// Compares the subgroups generated by `a` and by `b`.
    pub fn subgroup_compare(&self, a: &[AbElem], b: &[AbElem]) -> Result<SubgroupRelation> {
        for x in a.iter().chain(b) {
            self.check_elem(x)?;
        }
        let rel = self.relation_lattice()?.basis().transpose();
        let span = |gens: &[AbElem]| -> Result<IntMatrix> {
            let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords().to_vec()).collect();
            IntMatrix::from_columns(self.ngens, &cols)?.hcat(&rel)
        };
        let c = lattice_equal_with(&span(a)?, &span(b)?, &self.caps)?;
        Ok(match (c.a_in_b, c.b_in_a) {
            (true, true) => SubgroupRelation::Equal,
            (true, false) => SubgroupRelation::AInB {
                index: c.index.expect("nested lattices carry an index"),
            },
            (false, true) => SubgroupRelation::BInA {
                index: c.index.expect("nested lattices carry an index"),
            },
            (false, false) => SubgroupRelation::Incomparable,
        })
    }

    /// Relation matrix in the sparse text format.
    pub fn to_text(&self) -> Result<String> {
        Ok(SparseIntMatrix::from_dense(&self.relations)?.to_text())
    }

    /// One label per line (generated labels when none were set).
    pub fn labels_text(&self) -> String {
        (0..self.ngens).map(|i| self.label(i) + "\n").collect()
    }

    pub fn from_text(relations: &str, labels: &str) -> Result<Self> {
        let m = SparseIntMatrix::from_text(relations)?;
        let labels: Vec<String> = labels.lines().map(str::to_string).collect();
        AbPres::new(m.cols(), m.to_dense())?.with_labels(labels)
    }
}

/// Result of [`AbPres::subgroup_compare`]. Index 0 means infinite index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgroupRelation {
    Equal,
    AInB { index: BigInt },
    BInA { index: BigInt },
    Incomparable,
}

impl SubgroupRelation {
    pub fn a_contained_in_b(&self) -> bool {
        matches!(self, SubgroupRelation::Equal | SubgroupRelation::AInB { .. })
    }

    /// Index of the smaller subgroup in the larger; 1 when equal.
    pub fn index(&self) -> Option<BigInt> {
        match self {
            SubgroupRelation::Equal => Some(BigInt::one()),
            SubgroupRelation::AInB { index } | SubgroupRelation::BInA { index } => Some(index.clone()),
            SubgroupRelation::Incomparable => None,
        }
    }
}

impl fmt::Display for SubgroupRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = |i: &BigInt| if i.is_zero() { "infinite".to_string() } else { i.to_string() };
        match self {
            SubgroupRelation::Equal => write!(f, "A = B"),
            SubgroupRelation::AInB { index } => write!(f, "A ⊂ B (index {})", idx(index)),
            SubgroupRelation::BInA { index } => write!(f, "B ⊂ A (index {})", idx(index)),
            SubgroupRelation::Incomparable => write!(f, "incomparable"),
        }
    }
}

/// Homomorphism given on generators: column `j` is the image of domain generator `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbMap {
    domain: AbPres,
    codomain: AbPres,
    matrix: IntMatrix,
}

impl AbMap {
    /// Checks that every domain relation lands in the codomain relation lattice.
    pub fn new(domain: AbPres, codomain: AbPres, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.ngens || matrix.cols() != domain.ngens {
            return Err(Error::Mismatch(format!(
                "map matrix {}x{} between groups on {} and {} generators",
                matrix.rows(),
                matrix.cols(),
                domain.ngens,
                codomain.ngens
            )));
        }
        let images = domain.relations.mul(&matrix.transpose())?;
        for r in 0..images.rows() {
            let img = AbElem::new(images.row(r).to_vec());
            if !codomain.is_zero(&img)? {
                return Err(Error::IllDefined(format!(
                    "domain relation {r} maps to a nonzero element"
                )));
            }
        }
        Ok(AbMap {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn domain(&self) -> &AbPres {
        &self.domain
    }

    pub fn codomain(&self) -> &AbPres {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &AbElem) -> Result<AbElem> {
        self.domain.check_elem(x)?;
        Ok(AbElem::new(self.matrix.mul_vec(x.coords())?))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AbMap) -> Result<AbMap> {
        if other.domain != self.codomain {
            return Err(Error::Mismatch("composing maps through different groups".into()));
        }
        Ok(AbMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            matrix: other.matrix.mul(&self.matrix)?,
        })
    }

    /// Images of the domain generators.
    pub fn image_generators(&self) -> Vec<AbElem> {
        (0..self.matrix.cols()).map(|j| AbElem::new(self.matrix.column(j))).collect()
    }

    /// Presentation of the cokernel.
    pub fn cokernel(&self) -> Result<AbPres> {
        self.codomain.add_relations(&self.matrix.transpose())
    }

    /// Kernel as a presentation, plus the domain coordinates of its
    /// generators (as columns).
    pub fn kernel(&self) -> Result<(AbPres, IntMatrix)> {
        map_kernel(self)
    }
}

/// Kernel of `f`. The embedding's columns map to zero, and every domain
/// element mapping to zero lies in their span modulo the domain relations.
pub fn map_kernel(f: &AbMap) -> Result<(AbPres, IntMatrix)> {
    let n = f.domain.ngens;
    let caps = &f.domain.caps;
    // M·x = Rᵀ·y over the integers: kernel of [M | −Rᵀ]
    let neg_rt = {
        let rt = f.codomain.relation_lattice()?.basis().transpose();
        let mut m = rt.clone();
        for i in 0..m.rows() {
            m.negate_row(i);
        }
        m
    };
    let joint = f.matrix.hcat(&neg_rt)?;
    let k = integer_kernel(&joint)?;
    let xs = k.select_rows(&(0..n).collect::<Vec<_>>());
    let basis = HermiteBasis::from_columns(&xs, caps)?;
    let b = basis.basis().transpose();
    // domain relations in kernel coordinates
    let mut rel_rows = Vec::with_capacity(f.domain.relations.rows());
    for r in 0..f.domain.relations.rows() {
        let rho = f.domain.relations.row(r);
        let z = basis
            .reduce(rho)
            .ok_or_else(|| Error::IllDefined(format!("domain relation {r} outside the kernel lattice")))?;
        rel_rows.push(z);
    }
    let k_rank = basis.rank();
    let mut pres = AbPres::new(k_rank, IntMatrix::from_big_rows(rel_rows, k_rank)?)?;
    pres.caps = caps.clone();
    Ok((pres, b))
}

impl fmt::Display for AbPres {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} generators | {} relations>", self.ngens, self.relations.rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classify_examples() {
        let p = AbPres::from_relations(2, &[vec![2, 0], vec![0, 3]]).unwrap();
        let c = p.classify().unwrap();
        assert_eq!((c.free_rank, c.invariant_factors.clone()), (0, big(&[6])));
        assert_eq!(c.to_string(), "Z/6");
        assert_eq!(AbPres::free(2).classify().unwrap().free_rank, 2);
        assert!(AbPres::free(0).classify().unwrap().is_trivial());
    }

    #[test]
    fn elem_eq_examples() {
        let z2 = AbPres::cyclic_sum(&[2]);
        assert!(z2.elem_eq(&AbElem::from_i64(&[1]), &AbElem::from_i64(&[3])).unwrap());
        assert!(!z2.elem_eq(&AbElem::from_i64(&[1]), &AbElem::from_i64(&[0])).unwrap());
        let z = AbPres::free(2);
        assert!(z.elem_eq(&AbElem::from_i64(&[1, 1]), &AbElem::from_i64(&[1, 1])).unwrap());
        assert!(z.elem_eq(&AbElem::from_i64(&[1]), &AbElem::from_i64(&[1])).is_err());
    }

    #[test]
    fn tensor_examples() {
        let t = AbPres::cyclic_sum(&[4]).tensor(&AbPres::cyclic_sum(&[6])).unwrap();
        assert_eq!(t.classify().unwrap().invariant_factors, big(&[2]));
        let t = AbPres::free(1).tensor(&AbPres::cyclic_sum(&[3])).unwrap();
        assert_eq!(t.classify().unwrap().invariant_factors, big(&[3]));
        let t = AbPres::cyclic_sum(&[2]).tensor(&AbPres::cyclic_sum(&[3])).unwrap();
        assert!(t.classify().unwrap().is_trivial());
    }

    #[test]
    fn sigma_examples() {
        let u = AbPres::cyclic_sum(&[2]);
        let s = u.tensor(&u).unwrap().sigma_quotient().unwrap();
        assert_eq!(s.classify().unwrap().to_string(), "Z/2");
        let u = AbPres::free(1);
        let s = u.tensor(&u).unwrap().sigma_quotient().unwrap();
        assert_eq!(s.classify().unwrap().to_string(), "Z/2");
        let u = AbPres::free(0);
        assert!(u.tensor(&u).unwrap().sigma_quotient().unwrap().classify().unwrap().is_trivial());
        assert!(AbPres::free(2).sigma_quotient().is_err());
    }

    #[test]
    fn kernel_examples() {
        let f = AbMap::new(AbPres::free(1), AbPres::cyclic_sum(&[2]), IntMatrix::from_rows(&[vec![1]], 1).unwrap())
            .unwrap();
        let (k, emb) = map_kernel(&f).unwrap();
        assert_eq!(k.classify().unwrap().free_rank, 1);
        assert_eq!(emb, IntMatrix::from_rows(&[vec![2]], 1).unwrap());

        let z6 = AbPres::cyclic_sum(&[6]);
        let id = AbMap::new(z6.clone(), z6, IntMatrix::identity(1)).unwrap();
        assert!(map_kernel(&id).unwrap().0.classify().unwrap().is_trivial());

        let sum = AbMap::new(AbPres::free(2), AbPres::free(1), IntMatrix::from_rows(&[vec![1, 1]], 2).unwrap()).unwrap();
        let (k, emb) = map_kernel(&sum).unwrap();
        assert_eq!(k.classify().unwrap().free_rank, 1);
        let v = emb.column(0);
        assert_eq!(&v[0] + &v[1], BigInt::zero());
        assert_eq!(v[0].abs(), BigInt::one());
    }

    #[test]
    fn ill_defined_map_rejected() {
        let r = AbMap::new(AbPres::cyclic_sum(&[2]), AbPres::free(1), IntMatrix::identity(1));
        assert!(matches!(r, Err(Error::IllDefined(_))));
    }

    #[test]
    fn subgroup_examples() {
        let z4 = AbPres::cyclic_sum(&[4]);
        let r = z4
            .subgroup_compare(&[AbElem::from_i64(&[2])], &[AbElem::from_i64(&[2]), AbElem::from_i64(&[0])])
            .unwrap();
        assert_eq!(r, SubgroupRelation::Equal);
        let z = AbPres::free(1);
        let r = z.subgroup_compare(&[AbElem::from_i64(&[2])], &[AbElem::from_i64(&[1])]).unwrap();
        assert_eq!(r, SubgroupRelation::AInB { index: 2.into() });
        let z2 = AbPres::free(2);
        let r = z2
            .subgroup_compare(&[AbElem::from_i64(&[1, 0])], &[AbElem::from_i64(&[0, 1])])
            .unwrap();
        assert_eq!(r, SubgroupRelation::Incomparable);
    }

    #[test]
    fn text_round_trip() {
        let p = AbPres::from_relations(2, &[vec![2, 0], vec![0, 3]])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into()])
            .unwrap();
        let back = AbPres::from_text(&p.to_text().unwrap(), &p.labels_text()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn cokernel() {
        let f = AbMap::new(AbPres::free(1), AbPres::cyclic_sum(&[6]), IntMatrix::from_rows(&[vec![2]], 1).unwrap())
            .unwrap();
        assert_eq!(f.cokernel().unwrap().classify().unwrap().to_string(), "Z/2");
    }
}
