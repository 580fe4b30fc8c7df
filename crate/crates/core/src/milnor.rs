//! Milnor K-groups of weight ≤ 3 as presented abelian groups, the product
//! map `F*⊗K₂ → K₃`, and local symbols on ℚ.
//!
//! A unit model fixes coordinates on `F*`: one generator `g` of `F_q*`, or
//! `−1, p₁, …, p_k` for the S-units of ℚ. `K_n` is then presented on the
//! `n`-fold tensor power of those generators (index `(i₁,…,iₙ) ↦ Σ i_k N^{n−k}`).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abpres::{AbElem, AbMap, AbPres, Classification, SubgroupRelation};
use crate::fields::{factor_rational, is_prime, mod_pow, qstar_factor, FactoredRational, FieldElem, FiniteField};
use crate::intlin::IntMatrix;
use crate::{Error, Result};

/// Default exponent bound for the S-unit search in the truncated ℚ model.
pub const DEFAULT_EXPONENT_BOUND: i64 = 6;

/// Coordinates on a unit group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitModel {
    Finite(FiniteField),
    /// S-units `±∏ p^e` over the listed primes; `bound` limits the
    /// exponents searched for Steinberg pairs.
    TruncatedQ { primes: Vec<u64>, bound: i64 },
}

/// A unit in one of the models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unit {
    Field(FieldElem),
    Rational(FactoredRational),
}

impl UnitModel {
    /// The model for `S`; entries `−1` are accepted and implied anyway.
    pub fn truncated_q(s: &[i64], bound: i64) -> Result<Self> {
        let mut primes = Vec::new();
        for &p in s {
            if p == -1 {
                continue;
            }
            if p < 2 || !is_prime(p as u64) {
                return Err(Error::domain(format!("{p} is not a prime or -1")));
            }
            primes.push(p as u64);
        }
        primes.sort_unstable();
        primes.dedup();
        if bound < 1 {
            return Err(Error::domain("exponent bound must be positive"));
        }
        Ok(UnitModel::TruncatedQ { primes, bound })
    }

    /// Generator count `N`.
    pub fn rank(&self) -> usize {
        match self {
            UnitModel::Finite(_) => 1,
            UnitModel::TruncatedQ { primes, .. } => primes.len() + 1,
        }
    }

    /// `ℤ/(q−1)` on `g`, or `ℤ/2 ⊕ ℤ^k` on `−1, p₁, …`.
    pub fn unit_group(&self) -> AbPres {
        match self {
            UnitModel::Finite(f) => AbPres::cyclic_sum(&[f.unit_order() as u64])
                .with_labels(vec![f.label(f.generator())])
                .expect("one label"),
            UnitModel::TruncatedQ { primes, .. } => {
                let mut orders = vec![2u64];
                orders.extend(primes.iter().map(|_| 0));
                let mut labels = vec!["-1".to_string()];
                labels.extend(primes.iter().map(u64::to_string));
                AbPres::cyclic_sum(&orders).with_labels(labels).expect("matching labels")
            }
        }
    }

    pub fn coords(&self, u: &Unit) -> Result<Vec<i64>> {
        match (self, u) {
            (UnitModel::Finite(f), Unit::Field(a)) => {
                if a.field_order() != f.order() {
                    return Err(Error::Mismatch("unit from another field".into()));
                }
                Ok(vec![f.dlog(*a)? as i64])
            }
            (UnitModel::TruncatedQ { primes, .. }, Unit::Rational(r)) => {
                if let Some(p) = r.exponents().keys().find(|p| !primes.contains(p)) {
                    return Err(Error::OutOfModel {
                        value: r.to_string(),
                        prime: p.to_string(),
                    });
                }
                let mut c = vec![r.is_negative() as i64];
                c.extend(primes.iter().map(|&p| r.valuation(p)));
                Ok(c)
            }
            _ => Err(Error::Mismatch("unit does not belong to this model".into())),
        }
    }

    /// Parses a field element label or a rational `n/d`.
    pub fn parse_unit(&self, s: &str) -> Result<Unit> {
        match self {
            UnitModel::Finite(f) => {
                let a = f.parse_elem(s)?;
                if a.is_zero() {
                    return Err(Error::domain("zero is not a unit"));
                }
                Ok(Unit::Field(a))
            }
            UnitModel::TruncatedQ { .. } => {
                let r = crate::fields::parse_rational(s)?;
                let u = Unit::Rational(factor_rational(&r)?);
                self.coords(&u)?;
                Ok(u)
            }
        }
    }

    /// Coordinate pairs `(a, 1−a)` over every `a` with both sides units of
    /// the model.
    pub fn steinberg_pairs(&self) -> Vec<(Vec<i64>, Vec<i64>)> {
        match self {
            UnitModel::Finite(f) => f
                .units()
                .filter(|&a| !f.one_minus(a).is_zero())
                .map(|a| (vec![f.dlog(a).expect("unit") as i64], vec![f.dlog(f.one_minus(a)).expect("unit") as i64]))
                .collect(),
            UnitModel::TruncatedQ { primes, bound } => {
                let s: Vec<i64> = primes.iter().map(|&p| p as i64).collect();
                let mut out = Vec::new();
                let span = (2 * bound + 1) as usize;
                let total = span.pow(primes.len() as u32);
                for neg in [false, true] {
                    for t in 0..total {
                        let mut rest = t;
                        let exps: Vec<(u64, i64)> = primes
                            .iter()
                            .map(|&p| {
                                let e = (rest % span) as i64 - bound;
                                rest /= span;
                                (p, e)
                            })
                            .collect();
                        let a = FactoredRational::from_parts(neg, exps);
                        let one_minus = BigRational::one() - a.to_rational();
                        if one_minus.is_zero() {
                            continue;
                        }
                        if let Ok(b) = qstar_factor(&one_minus, &s) {
                            let ua = self.coords(&Unit::Rational(a)).expect("in model");
                            let ub = self.coords(&Unit::Rational(b)).expect("in model");
                            out.push((ua, ub));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            UnitModel::Finite(f) => f.to_string(),
            UnitModel::TruncatedQ { primes, bound } => {
                let s: Vec<String> = primes.iter().map(u64::to_string).collect();
                format!("Q truncated to S = {{-1,{}}}, exponent bound {bound}", s.join(","))
            }
        }
    }
}

/// Where the Steinberg relation is imposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteinbergSlots {
    /// Every adjacent slot pair.
    Adjacent,
    /// Only the last two slots; swaps move it elsewhere.
    LastPair,
}

#[derive(Debug, Clone)]
pub struct MilnorPres {
    model: UnitModel,
    weight: usize,
    mod2: bool,
    pres: AbPres,
    steinberg_pairs: usize,
}

pub fn milnor_pres(model: &UnitModel, n: usize, mod2: bool) -> Result<MilnorPres> {
    milnor_pres_with(model, n, mod2, SteinbergSlots::Adjacent)
}

pub fn milnor_pres_with(model: &UnitModel, n: usize, mod2: bool, slots: SteinbergSlots) -> Result<MilnorPres> {
    if !(1..=3).contains(&n) {
        return Err(Error::domain(format!("weight {n} outside 1..=3")));
    }
    let base = model.unit_group();
    let big_n = model.rank();
    let mut pres = base.clone();
    for _ in 1..n {
        pres = pres.tensor(&base)?;
    }
    let total = big_n.pow(n as u32);
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let pairs = if n >= 2 { model.steinberg_pairs() } else { Vec::new() };
    let steinberg_slots: Vec<usize> = match slots {
        SteinbergSlots::Adjacent => (0..n.saturating_sub(1)).collect(),
        SteinbergSlots::LastPair => (n.saturating_sub(2)..n.saturating_sub(1)).collect(),
    };
    for &s in &steinberg_slots {
        for (x, y) in &pairs {
            // basis vectors in the remaining n−2 slots
            for rest in 0..big_n.pow(n as u32 - 2) {
                let mut factors: Vec<Vec<i64>> = Vec::with_capacity(n);
                let mut r = rest;
                let mut others = Vec::new();
                for _ in 0..n - 2 {
                    others.push(r % big_n);
                    r /= big_n;
                }
                others.reverse();
                let mut it = others.into_iter();
                for slot in 0..n {
                    if slot == s {
                        factors.push(x.clone());
                    } else if slot == s + 1 {
                        factors.push(y.clone());
                    } else {
                        let mut e = vec![0i64; big_n];
                        e[it.next().expect("n−2 slots")] = 1;
                        factors.push(e);
                    }
                }
                rows.push(outer(&factors));
            }
        }
    }
    if n >= 2 {
        for s in 0..n - 1 {
            for t in 0..total {
                let mut idx = digits(t, big_n, n);
                let mut row = vec![BigInt::zero(); total];
                row[t] += 1;
                idx.swap(s, s + 1);
                row[undigits(&idx, big_n)] += 1;
                rows.push(row);
            }
        }
    }
    if mod2 {
        for t in 0..total {
            let mut row = vec![BigInt::zero(); total];
            row[t] = BigInt::from(2);
            rows.push(row);
        }
    }
    let pres = pres.add_relations(&IntMatrix::from_big_rows(rows, total)?)?;
    Ok(MilnorPres {
        model: model.clone(),
        weight: n,
        mod2,
        pres,
        steinberg_pairs: pairs.len(),
    })
}

/// Coefficient vector of `v₁⊗…⊗vₙ` in the lexicographic tensor basis.
fn outer(factors: &[Vec<i64>]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for f in factors {
        let mut next = Vec::with_capacity(acc.len() * f.len());
        for a in &acc {
            for &x in f {
                next.push(a * x);
            }
        }
        acc = next;
    }
    acc
}

fn digits(mut t: usize, base: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for k in (0..n).rev() {
        d[k] = t % base;
        t /= base;
    }
    d
}

fn undigits(d: &[usize], base: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * base + x)
}

impl MilnorPres {
    pub fn pres(&self) -> &AbPres {
        &self.pres
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn is_mod2(&self) -> bool {
        self.mod2
    }

    pub fn model(&self) -> &UnitModel {
        &self.model
    }

    /// Number of `a` with `a, 1−a` both units in the model.
    pub fn steinberg_pair_count(&self) -> usize {
        self.steinberg_pairs
    }

    pub fn classify(&self) -> Result<Classification> {
        self.pres.classify()
    }

    /// The symbol `{a₁,…,aₙ}`.
    pub fn symbol(&self, units: &[Unit]) -> Result<AbElem> {
        if units.len() != self.weight {
            return Err(Error::Mismatch(format!(
                "{} entries for a weight-{} symbol",
                units.len(),
                self.weight
            )));
        }
        let factors = units.iter().map(|u| self.model.coords(u)).collect::<Result<Vec<_>>>()?;
        Ok(AbElem::new(outer(&factors)))
    }

    /// Symbol on basis generators (indices into the unit model's generators).
    pub fn basis_symbol(&self, idx: &[usize]) -> AbElem {
        AbElem::basis(self.pres.ngens(), undigits(idx, self.model.rank()))
    }
}

/// `a⊗{b,c} ↦ {a,b,c}` from `F*⊗K₂` to `K₃` (or `k₃ = K₃/2`).
pub fn product_map(model: &UnitModel, mod2: bool) -> Result<AbMap> {
    let k2 = milnor_pres(model, 2, false)?;
    let k3 = milnor_pres(model, 3, mod2)?;
    let domain = model.unit_group().tensor(k2.pres())?;
    let n = domain.ngens();
    // the tensor index map i·N² + (j·N + k) coincides with the weight-3 index
    AbMap::new(domain, k3.pres().clone(), IntMatrix::identity(n))
}

/// Comparison of the generated subgroups with the product-map kernels.
#[derive(Debug, Clone)]
pub struct KernelGenReport {
    pub model: String,
    /// `F*⊗K₂`.
    pub domain: Classification,
    pub kernel_k3: Classification,
    pub kernel_k3_mod2: Classification,
    /// ⟨a⊗{b,c}+b⊗{a,c}⟩ against ker(→K₃).
    pub k1: SubgroupRelation,
    /// ⟨a⊗{b,c}+b⊗{a,c}, 2d⊗{e,f}⟩ against ker(→K₃/2).
    pub k2: SubgroupRelation,
    pub generator_count: usize,
}

impl KernelGenReport {
    pub fn k1_contained(&self) -> bool {
        self.k1.a_contained_in_b()
    }

    pub fn k2_contained(&self) -> bool {
        self.k2.a_contained_in_b()
    }
}

/// The generated subgroups are spanned by basis triples, since both
/// generator families are trilinear in their arguments.
pub fn kernel_gen_check(model: &UnitModel) -> Result<KernelGenReport> {
    let f = product_map(model, false)?;
    let f2 = product_map(model, true)?;
    let domain = f.domain();
    let n = model.rank();
    let total = n * n * n;
    let idx = |a: usize, b: usize, c: usize| a * n * n + b * n + c;
    let mut swap_gens = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut e = AbElem::zero(total);
                e.add_gen(idx(a, b, c), 1);
                e.add_gen(idx(b, a, c), 1);
                swap_gens.push(e);
            }
        }
    }
    let mut with_two = swap_gens.clone();
    with_two.extend((0..total).map(|t| AbElem::basis(total, t).scale(&BigInt::from(2))));

    let columns = |m: &IntMatrix| -> Vec<AbElem> { (0..m.cols()).map(|j| AbElem::new(m.column(j))).collect() };
    let (kp, kemb) = f.kernel()?;
    let (kp2, kemb2) = f2.kernel()?;
    let k1 = domain.subgroup_compare(&swap_gens, &columns(&kemb))?;
    let k2 = domain.subgroup_compare(&with_two, &columns(&kemb2))?;
    Ok(KernelGenReport {
        model: model.describe(),
        domain: domain.classify()?,
        kernel_k3: kp.classify()?,
        kernel_k3_mod2: kp2.classify()?,
        k1,
        k2,
        generator_count: with_two.len(),
    })
}

/// A completion of ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Two,
    Odd(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Two => write!(f, "2"),
            Place::Odd(p) => write!(f, "{p}"),
        }
    }
}

/// Value of a local symbol: a residue in `[1, p)` at an odd prime, `±1` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSymbolValue {
    pub place: Place,
    pub value: i64,
}

impl LocalSymbolValue {
    pub fn is_trivial(&self) -> bool {
        self.value == 1
    }

    /// The ±1 Hilbert symbol at this place (Legendre symbol of the tame value at odd primes).
    pub fn hilbert_sign(&self) -> i32 {
        match self.place {
            Place::Odd(p) => legendre(self.value as u64, p),
            _ => self.value as i32,
        }
    }
}

pub fn local_symbol(place: Place, a: &BigRational, b: &BigRational) -> Result<LocalSymbolValue> {
    local_symbol_factored(place, &factor_rational(a)?, &factor_rational(b)?)
}

/// Tame symbol `(−1)^{v(a)v(b)} a^{v(b)} b^{−v(a)} mod p` at odd `p`; the
/// Hilbert symbol at 2 and at the real place.
pub fn local_symbol_factored(place: Place, a: &FactoredRational, b: &FactoredRational) -> Result<LocalSymbolValue> {
    let value = match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Two => {
            let (al, be) = (a.valuation(2), b.valuation(2));
            let (u, v) = (odd_part_mod8(a), odd_part_mod8(b));
            let eps = |x: u64| ((x % 4) == 3) as i64;
            let omega = |x: u64| (x % 8 == 3 || x % 8 == 5) as i64;
            let e = eps(u) * eps(v) + al.rem_euclid(2) * omega(v) + be.rem_euclid(2) * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Odd(p) => {
            if p < 3 || !is_prime(p) {
                return Err(Error::domain(format!("{p} is not an odd prime")));
            }
            let (va, vb) = (a.valuation(p), b.valuation(p));
            let sign = if (va * vb).rem_euclid(2) == 1 {
                FactoredRational::minus_one()
            } else {
                FactoredRational::one()
            };
            let u = sign.mul(&a.pow(vb)).mul(&b.pow(-va));
            u.residue_mod(p)? as i64
        }
    };
    Ok(LocalSymbolValue { place, value })
}

/// `x·2^{−v₂(x)}` modulo 8 (odd numerator times odd denominator, since an odd square is 1 mod 8).
fn odd_part_mod8(x: &FactoredRational) -> u64 {
    let mut r: u64 = if x.is_negative() { 7 } else { 1 };
    for (&p, &e) in x.exponents() {
        if p == 2 {
            continue;
        }
        let pe = mod_pow(p % 8, e.unsigned_abs(), 8);
        r = r * pe % 8;
    }
    r
}

/// Legendre symbol `(a/p)` for an odd prime `p`; 0 when `p | a`.
pub fn legendre(a: u64, p: u64) -> i32 {
    match mod_pow(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Local symbols of `{a,b}` at the real place, at 2, and at every odd prime ≤ `bound`.
pub fn k2q_decompose(a: &BigRational, b: &BigRational, bound: u64) -> Result<Vec<LocalSymbolValue>> {
    let fa = factor_rational(a)?;
    let fb = factor_rational(b)?;
    if let Some(&p) = fa.exponents().keys().chain(fb.exponents().keys()).find(|&&p| p > bound) {
        return Err(Error::domain(format!("prime {p} above the bound {bound}")));
    }
    let mut out = vec![
        local_symbol_factored(Place::Real, &fa, &fb)?,
        local_symbol_factored(Place::Two, &fa, &fb)?,
    ];
    for p in (3..=bound).filter(|&p| is_prime(p)) {
        out.push(local_symbol_factored(Place::Odd(p), &fa, &fb)?);
    }
    Ok(out)
}

/// Product of the ±1 Hilbert symbols over the listed places.
pub fn reciprocity_product(values: &[LocalSymbolValue]) -> i32 {
    values.iter().map(LocalSymbolValue::hilbert_sign).product()
}

/// Parses `"a,b"` (or `"a,b,c"`) into rationals.
pub fn parse_symbol(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(crate::fields::parse_rational).collect()
}

/// Rational `n/d` from small integers, for tests and samplers.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ff(q: u32) -> UnitModel {
        UnitModel::Finite(FiniteField::from_order(q).unwrap())
    }

    #[test]
    fn k1_is_unit_group() {
        let k1 = milnor_pres(&ff(7), 1, false).unwrap();
        assert_eq!(k1.classify().unwrap().to_string(), "Z/6");
    }

    #[test]
    fn k2_finite_trivial() {
        for q in [3, 5] {
            assert!(milnor_pres(&ff(q), 2, false).unwrap().classify().unwrap().is_trivial());
        }
    }

    #[test]
    fn weight_bounds() {
        assert!(milnor_pres(&ff(3), 4, false).is_err());
        assert!(milnor_pres(&ff(3), 0, false).is_err());
    }

    #[test]
    fn truncated_q_pairs_include_classics() {
        let m = UnitModel::truncated_q(&[-1, 2, 3], 6).unwrap();
        let pairs = m.steinberg_pairs();
        // a = −1: 1 − a = 2; a = 2: 1 − a = −1; a = 3: 1 − a = −2; a = 4: 1 − a = −3
        for (a, b) in [(vec![1, 0, 0], vec![0, 1, 0]), (vec![0, 1, 0], vec![1, 0, 0]), (vec![0, 2, 0], vec![1, 0, 1])] {
            assert!(pairs.contains(&(a, b)));
        }
    }

    #[test]
    fn product_map_truncated() {
        let m = UnitModel::truncated_q(&[-1, 2], 6).unwrap();
        let f = product_map(&m, false).unwrap();
        let k3 = milnor_pres(&m, 3, false).unwrap();
        let neg = Unit::Rational(FactoredRational::minus_one());
        let x = AbElem::basis(f.domain().ngens(), 0);
        let img = f.apply(&x).unwrap();
        assert!(f
            .codomain()
            .elem_eq(&img, &k3.symbol(&[neg.clone(), neg.clone(), neg]).unwrap())
            .unwrap());
        let f2 = product_map(&m, true).unwrap();
        let y = AbElem::basis(f2.domain().ngens(), 5).scale(&BigInt::from(2));
        assert!(f2.codomain().is_zero(&f2.apply(&y).unwrap()).unwrap());
    }

    #[test]
    fn kernel_gens_finite() {
        let r = kernel_gen_check(&ff(5)).unwrap();
        assert_eq!(r.k1, SubgroupRelation::Equal);
        assert_eq!(r.k2, SubgroupRelation::Equal);
    }

    #[test]
    fn tame_examples() {
        let v = local_symbol(Place::Odd(3), &ratio(6, 1), &ratio(5, 1)).unwrap();
        assert_eq!(v.value, 2);
        let a = ratio(-7, 9);
        let v = local_symbol(Place::Odd(7), &a, &(BigRational::one() - &a)).unwrap();
        assert!(v.is_trivial());
        assert_eq!(local_symbol(Place::Real, &ratio(-1, 1), &ratio(-1, 1)).unwrap().value, -1);
    }

    #[test]
    fn decompose_examples() {
        let v = k2q_decompose(&ratio(2, 1), &ratio(3, 1), 7).unwrap();
        assert_eq!(v[0], LocalSymbolValue { place: Place::Real, value: 1 });
        assert_eq!(v[1], LocalSymbolValue { place: Place::Two, value: -1 });
        assert_eq!(v[2], LocalSymbolValue { place: Place::Odd(3), value: 2 });
        assert!(v[3..].iter().all(LocalSymbolValue::is_trivial));
        assert_eq!(reciprocity_product(&v), 1);

        let v = k2q_decompose(&ratio(1, 1), &ratio(10, 3), 7).unwrap();
        assert!(v.iter().all(LocalSymbolValue::is_trivial));

        let v = k2q_decompose(&ratio(-1, 1), &ratio(-1, 1), 7).unwrap();
        assert_eq!((v[0].value, v[1].value), (-1, -1));
        assert_eq!(reciprocity_product(&v), 1);

        assert!(k2q_decompose(&ratio(11, 1), &ratio(3, 1), 7).is_err());
    }
}
