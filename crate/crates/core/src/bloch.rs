//! Pre-Bloch group, the maps λ′ and λ, the Bloch group, and the exact
//! sequence `0 → B(F) → 𝒫(F) → (F*⊗F*)_σ → K₂(F) → 0` over a finite field.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::abpres::{AbElem, AbMap, AbPres, Classification, SubgroupRelation};
use crate::fields::{FieldElem, FiniteField};
use crate::intlin::IntMatrix;
use crate::milnor::{milnor_pres, UnitModel};
use crate::{Error, Result};

/// Free group `Q(F)` on symbols `[a]`, `a ∈ F−{0,1}`, modulo five-term relations.
#[derive(Debug, Clone)]
pub struct PreBloch {
    field: FiniteField,
    symbols: Vec<FieldElem>,
    position: HashMap<FieldElem, usize>,
    pres: AbPres,
}

impl PreBloch {
    /// Symbols in element-index order.
    pub fn new(field: &FiniteField) -> Result<Self> {
        let one = field.one();
        let symbols: Vec<FieldElem> = field.elements().filter(|a| !a.is_zero() && *a != one).collect();
        Self::with_symbol_order(field, symbols)
    }

    /// Same group with the symbols in a caller-chosen order.
    pub fn with_symbol_order(field: &FiniteField, symbols: Vec<FieldElem>) -> Result<Self> {
        let one = field.one();
        let mut sorted = symbols.clone();
        sorted.sort();
        let mut expected: Vec<FieldElem> = field.elements().filter(|a| !a.is_zero() && *a != one).collect();
        expected.sort();
        if sorted != expected {
            return Err(Error::domain("symbol order must list F−{0,1} exactly once"));
        }
        let position = symbols.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let labels = symbols.iter().map(|&a| format!("[{}]", field.label(a))).collect();
        let mut pb = PreBloch {
            field: field.clone(),
            symbols,
            position,
            pres: AbPres::free(0),
        };
        let n = pb.symbols.len();
        let mut rows = Vec::with_capacity(n * n.saturating_sub(1));
        for &a in &pb.symbols {
            for &b in &pb.symbols {
                if a != b {
                    rows.push(pb.fiveterm(a, b)?.coords().to_vec());
                }
            }
        }
        pb.pres = AbPres::new(n, IntMatrix::from_big_rows(rows, n)?)?.with_labels(labels)?;
        Ok(pb)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn symbols(&self) -> &[FieldElem] {
        &self.symbols
    }

    pub fn pres(&self) -> &AbPres {
        &self.pres
    }

    /// Coordinates of `[a]` in `Q(F)`.
    pub fn symbol(&self, a: FieldElem) -> Result<AbElem> {
        let i = self.index_of(a)?;
        Ok(AbElem::basis(self.symbols.len(), i))
    }

    fn index_of(&self, a: FieldElem) -> Result<usize> {
        self.position
            .get(&a)
            .copied()
            .ok_or_else(|| Error::domain(format!("[{}] is not a symbol (needs a ∉ {{0,1}})", self.field.label(a))))
    }

    /// `[a] − [b] + [b/a] − [(1−a⁻¹)/(1−b⁻¹)] + [(1−a)/(1−b)]` in `Q(F)`.
    pub fn fiveterm(&self, a: FieldElem, b: FieldElem) -> Result<AbElem> {
        let args = fiveterm_args(&self.field, a, b)?;
        let mut x = AbElem::zero(self.symbols.len());
        for (k, &arg) in args.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            x.add_gen(self.index_of(arg)?, sign);
        }
        Ok(x)
    }

    pub fn classify(&self) -> Result<Classification> {
        self.pres.classify()
    }
}

/// The five arguments of the five-term relation, in order of appearance
/// (signs `+,−,+,−,+`). Every argument is checked to lie in `F−{0,1}`.
pub fn fiveterm_args(f: &FiniteField, a: FieldElem, b: FieldElem) -> Result<[FieldElem; 5]> {
    let one = f.one();
    let valid = |x: FieldElem| !x.is_zero() && x != one;
    if !valid(a) || !valid(b) {
        return Err(Error::domain("five-term arguments must lie in F−{0,1}"));
    }
    if a == b {
        return Err(Error::domain("five-term relation needs a ≠ b"));
    }
    let b_over_a = f.div(b, a)?;
    let mid = f.div(f.one_minus(f.inv(a)?), f.one_minus(f.inv(b)?))?;
    let last = f.div(f.one_minus(a), f.one_minus(b))?;
    let args = [a, b, b_over_a, mid, last];
    if !args.iter().all(|&x| valid(x)) {
        return Err(Error::domain("five-term argument fell outside F−{0,1}"));
    }
    Ok(args)
}

/// `λ′`, `λ` and the map `(F*⊗F*)_σ → K₂` for one field.
#[derive(Debug, Clone)]
pub struct BlochComplex {
    pub prebloch: PreBloch,
    /// `F*⊗F*`.
    pub tensor: AbPres,
    /// `(F*⊗F*)_σ`.
    pub sigma: AbPres,
    pub k2: AbPres,
    /// `λ: 𝒫(F) → (F*⊗F*)_σ`.
    pub lambda: AbMap,
    /// `(F*⊗F*)_σ → K₂`, `a⊗b ↦ {a,b}`.
    pub to_k2: AbMap,
    lambda_matrix: IntMatrix,
}

impl BlochComplex {
    pub fn new(field: &FiniteField) -> Result<Self> {
        Self::from_prebloch(PreBloch::new(field)?)
    }

    pub fn from_prebloch(prebloch: PreBloch) -> Result<Self> {
        let field = prebloch.field().clone();
        let model = UnitModel::Finite(field.clone());
        let u = model.unit_group();
        let tensor = u.tensor(&u)?;
        let sigma = tensor.sigma_quotient()?;
        let k2 = milnor_pres(&model, 2, false)?.pres().clone();
        let lambda_matrix = lambda_prime_matrix(&field, prebloch.symbols())?;
        let lambda = AbMap::new(prebloch.pres().clone(), sigma.clone(), lambda_matrix.clone())?;
        let to_k2 = AbMap::new(sigma.clone(), k2.clone(), IntMatrix::identity(sigma.ngens()))?;
        Ok(BlochComplex {
            prebloch,
            tensor,
            sigma,
            k2,
            lambda,
            to_k2,
            lambda_matrix,
        })
    }

    /// `λ′(x)` in `F*⊗F*` for `x ∈ Q(F)`.
    pub fn lambda_prime(&self, x: &AbElem) -> Result<AbElem> {
        Ok(AbElem::new(self.lambda_matrix.mul_vec(x.coords())?))
    }

    /// `λ(x)` in `(F*⊗F*)_σ` (same coordinates, coarser relations).
    pub fn lambda(&self, x: &AbElem) -> Result<AbElem> {
        self.lambda.apply(x)
    }

    /// `a⊗b` in `F*⊗F*` coordinates.
    pub fn tensor_elem(&self, a: FieldElem, b: FieldElem) -> Result<AbElem> {
        let f = self.prebloch.field();
        let v = BigInt::from(f.dlog(a)?) * BigInt::from(f.dlog(b)?);
        Ok(AbElem::new(vec![v]))
    }
}

/// `[a] ↦ a⊗(1−a)` on the single generator `g⊗g` of `F*⊗F*`.
fn lambda_prime_matrix(f: &FiniteField, symbols: &[FieldElem]) -> Result<IntMatrix> {
    let mut row = Vec::with_capacity(symbols.len());
    for &a in symbols {
        let b = f.one_minus(a);
        row.push(BigInt::from(f.dlog(a)?) * BigInt::from(f.dlog(b)?));
    }
    IntMatrix::from_big_rows(vec![row], symbols.len())
}

/// `B(F) = ker λ` with its embedding into `𝒫(F)` (columns).
#[derive(Debug, Clone)]
pub struct BlochGroup {
    pub pres: AbPres,
    pub embedding: IntMatrix,
    pub classification: Classification,
}

pub fn bloch_group(field: &FiniteField) -> Result<BlochGroup> {
    bloch_group_of(&BlochComplex::new(field)?)
}

pub fn bloch_group_of(c: &BlochComplex) -> Result<BlochGroup> {
    let (pres, embedding) = c.lambda.kernel()?;
    let classification = pres.classify()?;
    Ok(BlochGroup {
        pres,
        embedding,
        classification,
    })
}

/// Classifications and the three exactness verdicts.
#[derive(Debug, Clone)]
pub struct ExactSeqReport {
    pub prebloch: Classification,
    pub bloch: Classification,
    pub sigma: Classification,
    pub k2: Classification,
    /// `λ ∘ (B → 𝒫) = 0`.
    pub e1: bool,
    /// `im λ` against `ker((F*⊗F*)_σ → K₂)`.
    pub e2: SubgroupRelation,
    /// `coker((F*⊗F*)_σ → K₂)`.
    pub e3_cokernel: Classification,
}

impl ExactSeqReport {
    pub fn e2(&self) -> bool {
        self.e2 == SubgroupRelation::Equal
    }

    pub fn e3(&self) -> bool {
        self.e3_cokernel.is_trivial()
    }

    pub fn all_pass(&self) -> bool {
        self.e1 && self.e2() && self.e3()
    }
}

pub fn exact_seq_report(field: &FiniteField) -> Result<ExactSeqReport> {
    let c = BlochComplex::new(field)?;
    let b = bloch_group_of(&c)?;
    let mut e1 = true;
    for j in 0..b.embedding.cols() {
        let img = c.lambda(&AbElem::new(b.embedding.column(j)))?;
        if !c.sigma.is_zero(&img)? {
            e1 = false;
        }
    }
    let (_, kemb) = c.to_k2.kernel()?;
    let kernel_gens: Vec<AbElem> = (0..kemb.cols()).map(|j| AbElem::new(kemb.column(j))).collect();
    let e2 = c.sigma.subgroup_compare(&c.lambda.image_generators(), &kernel_gens)?;
    Ok(ExactSeqReport {
        prebloch: c.prebloch.classify()?,
        bloch: b.classification,
        sigma: c.sigma.classify()?,
        k2: c.k2.classify()?,
        e1,
        e2,
        e3_cokernel: c.to_k2.cokernel()?.classify()?,
    })
}

/// Five-term checks over every ordered pair `a ≠ b` in `F−{0,1}`.
#[derive(Debug, Clone)]
pub struct FiveTermReport {
    pub pairs: usize,
    /// Pairs where `λ′(fiveterm(a,b)) ≠ a⊗x + x⊗a`, `x = (1−a)/(1−b)`, in `F*⊗F*`.
    pub lambda_prime_failures: Vec<(FieldElem, FieldElem)>,
    /// Pairs where `λ(fiveterm(a,b)) ≠ 0` in `(F*⊗F*)_σ`.
    pub lambda_failures: Vec<(FieldElem, FieldElem)>,
}

pub fn five_term_check(field: &FiniteField) -> Result<FiveTermReport> {
    let c = BlochComplex::new(field)?;
    let f = field;
    let syms = c.prebloch.symbols().to_vec();
    let mut report = FiveTermReport {
        pairs: 0,
        lambda_prime_failures: Vec::new(),
        lambda_failures: Vec::new(),
    };
    for &a in &syms {
        for &b in &syms {
            if a == b {
                continue;
            }
            report.pairs += 1;
            let r = c.prebloch.fiveterm(a, b)?;
            let x = f.div(f.one_minus(a), f.one_minus(b))?;
            let expect = c.tensor_elem(a, x)?.add(&c.tensor_elem(x, a)?);
            if !c.tensor.elem_eq(&c.lambda_prime(&r)?, &expect)? {
                report.lambda_prime_failures.push((a, b));
            }
            if !c.sigma.is_zero(&c.lambda(&r)?)? {
                report.lambda_failures.push((a, b));
            }
        }
    }
    Ok(report)
}
