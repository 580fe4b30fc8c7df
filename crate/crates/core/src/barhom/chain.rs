//! Normalized bar chains with trivial integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::group::{GroupHom, GroupTable};
use crate::{Error, Result};

/// Largest arity accepted by [`c_cycle`].
pub const MAX_CYCLE_ARITY: usize = 4;

/// A sum of bar cells `[g₁|…|gₙ]`, none containing the identity.
#[derive(Clone)]
pub struct BarChain {
    group: Arc<GroupTable>,
    degree: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl PartialEq for BarChain {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_as(&other.group) && self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for BarChain {}

impl fmt::Debug for BarChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BarChain[{}; deg {}] {{{}}}", self.group.name(), self.degree, self.to_text().trim_end().replace('\n', ", "))
    }
}

impl BarChain {
    pub fn zero(group: Arc<GroupTable>, degree: usize) -> Self {
        BarChain {
            group,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A single cell; the zero chain if it contains the identity.
    pub fn cell(group: Arc<GroupTable>, cell: &[u32]) -> Result<Self> {
        let mut c = Self::zero(group, cell.len());
        c.add_term(cell, 1)?;
        Ok(c)
    }

    pub fn from_terms(group: Arc<GroupTable>, degree: usize, terms: impl IntoIterator<Item = (Vec<u32>, i64)>) -> Result<Self> {
        let mut c = Self::zero(group, degree);
        for (t, k) in terms {
            c.add_term(&t, k)?;
        }
        Ok(c)
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, cell: &[u32]) -> i64 {
        self.terms.get(cell).copied().unwrap_or(0)
    }

    /// Adds `k·[cell]`; identity-containing cells are dropped.
    pub fn add_term(&mut self, cell: &[u32], k: i64) -> Result<()> {
        if cell.len() != self.degree {
            return Err(Error::Mismatch(format!("cell of length {} in degree {}", cell.len(), self.degree)));
        }
        for &g in cell {
            self.group.element(g)?;
        }
        self.add_unchecked(cell, k)
    }

    fn add_unchecked(&mut self, cell: &[u32], k: i64) -> Result<()> {
        if k == 0 || cell.contains(&0) {
            return Ok(());
        }
        let e = self.terms.entry(cell.to_vec()).or_insert(0);
        *e = e.checked_add(k).ok_or_else(overflow)?;
        if *e == 0 {
            self.terms.remove(cell);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &BarChain) -> Result<()> {
        if !self.group.same_as(&other.group) || self.degree != other.degree {
            return Err(Error::Mismatch(format!(
                "chains over {} (degree {}) and {} (degree {})",
                self.group.name(),
                self.degree,
                other.group.name(),
                other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &BarChain) -> Result<BarChain> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (t, &k) in &other.terms {
            out.add_unchecked(t, k)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BarChain) -> Result<BarChain> {
        self.add(&other.scale(-1)?)
    }

    pub fn scale(&self, k: i64) -> Result<BarChain> {
        let mut out = Self::zero(self.group.clone(), self.degree);
        if k != 0 {
            for (t, &v) in &self.terms {
                out.terms.insert(t.clone(), v.checked_mul(k).ok_or_else(overflow)?);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> BarChain {
        self.scale(-1).expect("negation of i64 coefficients below i64::MIN")
    }

    /// The bar boundary, computed term by term.
    pub fn boundary(&self) -> Result<BarChain> {
        let d = self.degree.saturating_sub(1);
        let mut out = Self::zero(self.group.clone(), d);
        if self.degree == 0 {
            return Ok(out);
        }
        let g = &self.group;
        for (t, &k) in &self.terms {
            for (face, s) in faces(t, |a, b| g.mul(a, b)) {
                out.add_unchecked(&face, s.checked_mul(k).ok_or_else(overflow)?)?;
            }
        }
        Ok(out)
    }

    pub fn is_cycle(&self) -> Result<bool> {
        Ok(self.boundary()?.is_zero())
    }

    /// Tuple-wise image under a homomorphism.
    pub fn map(&self, f: &GroupHom) -> Result<BarChain> {
        if !self.group.same_as(f.src()) {
            return Err(Error::Mismatch(format!("chain over {} mapped from {}", self.group.name(), f.src().name())));
        }
        let mut out = Self::zero(f.dst().clone(), self.degree);
        for (t, &k) in &self.terms {
            let img: Vec<u32> = t.iter().map(|&g| f.apply(g)).collect();
            out.add_unchecked(&img, k)?;
        }
        Ok(out)
    }

    /// One `coeff: g1|g2|…|gn` line per term, in cell order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (t, k) in &self.terms {
            let cells: Vec<&str> = t.iter().map(|&g| self.group.label(g)).collect();
            s += &format!("{k}: {}\n", cells.join("|"));
        }
        s
    }

    pub fn from_text(group: Arc<GroupTable>, degree: usize, text: &str) -> Result<BarChain> {
        let mut c = Self::zero(group, degree);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, cell) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(format!("expected `coeff: g1|…|gn`, got `{line}`")))?;
            let k: i64 = k.trim().parse().map_err(|_| Error::parse(format!("bad coefficient `{}`", k.trim())))?;
            let cell = cell.trim();
            let idx: Vec<u32> = if cell.is_empty() {
                Vec::new()
            } else {
                cell.split('|')
                    .map(|l| {
                        let l = l.trim();
                        c.group.index_of(l).ok_or_else(|| Error::parse(format!("unknown element `{l}` of {}", c.group.name())))
                    })
                    .collect::<Result<_>>()?
            };
            c.add_term(&idx, k)?;
        }
        Ok(c)
    }
}

fn overflow() -> Error {
    Error::ResourceLimit {
        what: "chain coefficient bit length",
        cap: 63,
        actual: 64,
    }
}

/// Faces of a bar cell with their signs: drop the first entry, merge
/// neighbours with alternating signs, drop the last entry. Degenerate faces
/// (containing the identity 0) are omitted.
pub(crate) fn faces(cell: &[u32], mul: impl Fn(u32, u32) -> u32) -> Vec<(Vec<u32>, i64)> {
    let n = cell.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    out.push((cell[1..].to_vec(), 1));
    for i in 1..n {
        let m = mul(cell[i - 1], cell[i]);
        if m == 0 {
            continue;
        }
        let mut f = Vec::with_capacity(n - 1);
        f.extend_from_slice(&cell[..i - 1]);
        f.push(m);
        f.extend_from_slice(&cell[i + 1..]);
        out.push((f, if i % 2 == 0 { 1 } else { -1 }));
    }
    out.push((cell[..n - 1].to_vec(), if n.is_multiple_of(2) { 1 } else { -1 }));
    out.retain(|(f, _)| !f.contains(&0));
    out
}

/// All permutations of `0..n` with their signs, in lexicographic order.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if prefix.len() == n {
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| prefix[i] > prefix[j]).count();
            out.push((prefix.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// A chain known to have zero boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleClass {
    chain: BarChain,
}

impl CycleClass {
    pub fn new(chain: BarChain) -> Result<Self> {
        if !chain.is_cycle()? {
            return Err(Error::domain(format!("chain of degree {} over {} is not a cycle", chain.degree(), chain.group().name())));
        }
        Ok(CycleClass { chain })
    }

    pub fn zero(group: Arc<GroupTable>, degree: usize) -> Self {
        CycleClass {
            chain: BarChain::zero(group, degree),
        }
    }

    pub fn chain(&self) -> &BarChain {
        &self.chain
    }

    pub fn into_chain(self) -> BarChain {
        self.chain
    }

    pub fn degree(&self) -> usize {
        self.chain.degree()
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.chain.group()
    }

    pub fn is_cycle(&self) -> bool {
        true
    }

    pub fn add(&self, other: &CycleClass) -> Result<CycleClass> {
        Ok(CycleClass {
            chain: self.chain.add(&other.chain)?,
        })
    }

    pub fn sub(&self, other: &CycleClass) -> Result<CycleClass> {
        Ok(CycleClass {
            chain: self.chain.sub(&other.chain)?,
        })
    }

    pub fn scale(&self, k: i64) -> Result<CycleClass> {
        Ok(CycleClass {
            chain: self.chain.scale(k)?,
        })
    }

    pub fn map(&self, f: &GroupHom) -> Result<CycleClass> {
        // chain maps send cycles to cycles
        Ok(CycleClass {
            chain: self.chain.map(f)?,
        })
    }
}

/// `c(g₁,…,gₙ) = Σ_σ sign(σ)[g_σ(1)|…|g_σ(n)]` for pairwise commuting elements.
pub fn c_cycle(group: &Arc<GroupTable>, elems: &[u32]) -> Result<CycleClass> {
    let n = elems.len();
    if n > MAX_CYCLE_ARITY {
        return Err(Error::domain(format!("c-cycles are built for at most {MAX_CYCLE_ARITY} elements, got {n}")));
    }
    for &g in elems {
        group.element(g)?;
    }
    for i in 0..n {
        for j in i + 1..n {
            if !group.commute(elems[i], elems[j]) {
                return Err(Error::domain(format!(
                    "{} and {} do not commute",
                    group.label(elems[i]),
                    group.label(elems[j])
                )));
            }
        }
    }
    let mut chain = BarChain::zero(group.clone(), n);
    for (p, s) in signed_permutations(n) {
        let cell: Vec<u32> = p.iter().map(|&i| elems[i]).collect();
        chain.add_unchecked(&cell, s)?;
    }
    CycleClass::new(chain)
}

/// The shuffle (Eilenberg–Zilber) product of chains over G and H, landing in
/// `product`, which must be `GroupTable::direct_product(G, H)`.
pub fn shuffle_product(product: &Arc<GroupTable>, x: &BarChain, y: &BarChain) -> Result<BarChain> {
    let (g, h) = (x.group(), y.group());
    let k = h.order() as u32;
    if product.order() != g.order() * h.order() || product.name() != format!("({})x({})", g.name(), h.name()) {
        return Err(Error::Mismatch(format!("{} is not the product of {} and {}", product.name(), g.name(), h.name())));
    }
    let (p, q) = (x.degree(), y.degree());
    let mut out = BarChain::zero(product.clone(), p + q);
    let shuffles = shuffles(p, q);
    for (a, &ka) in x.terms() {
        for (b, &kb) in y.terms() {
            let coeff = ka.checked_mul(kb).ok_or_else(overflow)?;
            for (mask, sign) in &shuffles {
                let (mut i, mut j) = (0, 0);
                let cell: Vec<u32> = mask
                    .iter()
                    .map(|&from_x| {
                        if from_x {
                            i += 1;
                            a[i - 1] * k
                        } else {
                            j += 1;
                            b[j - 1]
                        }
                    })
                    .collect();
                out.add_unchecked(&cell, coeff * sign)?;
            }
        }
    }
    Ok(out)
}

/// Cup (cross) product of cycles over G and H, as a cycle over G × H.
pub fn shuffle_cup(product: &Arc<GroupTable>, x: &CycleClass, y: &CycleClass) -> Result<CycleClass> {
    CycleClass::new(shuffle_product(product, x.chain(), y.chain())?)
}

/// (p,q)-shuffles as position masks (true = slot from the first factor)
/// with the sign of the shuffle permutation.
fn shuffles(p: usize, q: usize) -> Vec<(Vec<bool>, i64)> {
    let n = p + q;
    let mut out = Vec::new();
    for bits in 0u32..(1 << n) {
        if bits.count_ones() as usize != p {
            continue;
        }
        let mask: Vec<bool> = (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect();
        // inversions: each y-slot preceding an x-slot
        let mut ys = 0;
        let mut inv = 0;
        for &m in &mask {
            if m {
                inv += ys;
            } else {
                ys += 1;
            }
        }
        out.push((mask, if inv % 2 == 0 { 1 } else { -1 }));
    }
    out.sort();
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32) -> Arc<GroupTable> {
        Arc::new(GroupTable::cyclic(m).unwrap())
    }

    #[test]
    fn boundary_of_tt_in_z5() {
        let g = z(5);
        let c = BarChain::cell(g.clone(), &[1, 1]).unwrap();
        let d = c.boundary().unwrap();
        assert_eq!(d.coefficient(&[1]), 2);
        assert_eq!(d.coefficient(&[2]), -1);
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn degree_one_boundary_vanishes() {
        let g = z(5);
        for a in 1..5 {
            assert!(BarChain::cell(g.clone(), &[a]).unwrap().is_cycle().unwrap());
        }
    }

    #[test]
    fn ggg_in_z2_is_cycle() {
        let c = BarChain::cell(z(2), &[1, 1, 1]).unwrap();
        assert!(c.boundary().unwrap().is_zero());
    }

    #[test]
    fn c_small_cases() {
        let g = Arc::new(GroupTable::product_of_cyclic(&[2, 3]).unwrap());
        let c1 = c_cycle(&g, &[4]).unwrap();
        assert_eq!(c1.chain().coefficient(&[4]), 1);
        let c2 = c_cycle(&g, &[1, 3]).unwrap();
        assert_eq!(c2.chain().coefficient(&[1, 3]), 1);
        assert_eq!(c2.chain().coefficient(&[3, 1]), -1);
        assert!(c_cycle(&g, &[2, 2, 2]).unwrap().chain().is_zero());
        assert!(c_cycle(&g, &[1, 2, 3, 4, 5]).is_err());
    }

    #[test]
    fn c_rejects_noncommuting() {
        let f = crate::fields::FiniteField::from_order(3).unwrap();
        let gl = super::super::group::MatrixGroup::gl2(&f).unwrap();
        let t = gl.table();
        let (a, b) = (0..48)
            .flat_map(|a| (0..48).map(move |b| (a, b)))
            .find(|&(a, b)| !t.commute(a, b))
            .unwrap();
        assert!(c_cycle(t, &[a, b]).is_err());
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 2).len(), 3);
        assert_eq!(shuffles(2, 2).len(), 6);
        let signs: Vec<i64> = shuffles(1, 1).into_iter().map(|s| s.1).collect();
        assert_eq!(signs, vec![1, -1]);
    }

    #[test]
    fn cup_of_degree_one() {
        let (g, h) = (z(3), z(4));
        let gh = Arc::new(GroupTable::direct_product(&g, &h).unwrap());
        let x = c_cycle(&g, &[1]).unwrap();
        let y = c_cycle(&h, &[3]).unwrap();
        let cup = shuffle_cup(&gh, &x, &y).unwrap();
        let expect = c_cycle(&gh, &[4, 3]).unwrap();
        assert_eq!(cup, expect);
        let zero = CycleClass::zero(h.clone(), 2);
        assert!(shuffle_cup(&gh, &x, &zero).unwrap().chain().is_zero());
    }

    #[test]
    fn cup_one_two_term_count() {
        let (g, h) = (z(3), z(5));
        let gh = Arc::new(GroupTable::direct_product(&g, &h).unwrap());
        let x = BarChain::cell(g, &[1]).unwrap();
        let y = BarChain::cell(h, &[1, 2]).unwrap();
        assert_eq!(shuffle_product(&gh, &x, &y).unwrap().len(), 3);
    }

    #[test]
    fn text_round_trip() {
        let g = z(4);
        let c = c_cycle(&g, &[1, 2]).unwrap().into_chain();
        let s = c.to_text();
        assert_eq!(s, "1: t|t^2\n-1: t^2|t\n");
        assert_eq!(BarChain::from_text(g, 2, &s).unwrap(), c);
    }

    #[test]
    fn permutation_signs() {
        let ps = signed_permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps.iter().map(|p| p.1).sum::<i64>(), 0);
        assert_eq!(ps[1], (vec![0, 2, 1], -1));
    }
}
