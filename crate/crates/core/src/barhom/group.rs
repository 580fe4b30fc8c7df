//! Finite group tables with the identity at index 0.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::fields::{FieldElem, FiniteField};
use crate::{Error, Result};

/// Tables up to this order are checked for associativity on construction.
pub const ASSOCIATIVITY_CHECK_CAP: usize = 256;

#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    abelian: bool,
    labels: Vec<String>,
    /// Orders of cyclic factors when the group is a product of cyclic groups
    /// indexed in mixed radix, first factor most significant.
    cyclic_factors: Option<Vec<u32>>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupTable({}, order {})", self.name, self.order)
    }
}

impl GroupTable {
    /// Builds a group from a row-major multiplication table. Element 0 must be
    /// the identity.
    pub fn from_table(name: impl Into<String>, labels: Vec<String>, mul: Vec<u32>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || mul.len() != n * n {
            return Err(Error::Mismatch(format!(
                "table of size {} for {} elements",
                mul.len(),
                n
            )));
        }
        if mul.iter().any(|&x| x as usize >= n) {
            return Err(Error::domain("table entry out of range"));
        }
        for g in 0..n {
            if mul[g] as usize != g || mul[g * n] as usize != g {
                return Err(Error::domain("element 0 is not the identity"));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| mul[g * n + h] == 0) {
                Some(h) if mul[h * n + g] == 0 => inv[g] = h as u32,
                _ => return Err(Error::domain(format!("element {g} has no two-sided inverse"))),
            }
        }
        if n <= ASSOCIATIVITY_CHECK_CAP {
            for a in 0..n {
                for b in 0..n {
                    let ab = mul[a * n + b] as usize;
                    for c in 0..n {
                        let bc = mul[b * n + c] as usize;
                        if mul[ab * n + c] != mul[a * n + bc] {
                            return Err(Error::domain(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        }
        let abelian = (0..n).all(|a| (0..a).all(|b| mul[a * n + b] == mul[b * n + a]));
        Ok(GroupTable {
            name: name.into(),
            order: n,
            mul,
            inv,
            abelian,
            labels,
            cyclic_factors: None,
        })
    }

    /// ℤ/m written multiplicatively with generator `t`; index k is `t^k`.
    pub fn cyclic(m: u32) -> Result<Self> {
        Self::product_of_cyclic(&[m])
    }

    /// ℤ/m₁ × … × ℤ/m_k, indexed in mixed radix.
    pub fn product_of_cyclic(orders: &[u32]) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::domain("cyclic factor orders must be positive"));
        }
        let n = orders
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m as usize))
            .filter(|&n| n <= u32::MAX as usize)
            .ok_or_else(|| Error::domain("group order too large"))?;
        let digits = |mut x: usize| {
            let mut d = vec![0u32; orders.len()];
            for (i, &m) in orders.iter().enumerate().rev() {
                d[i] = (x % m as usize) as u32;
                x /= m as usize;
            }
            d
        };
        let undigits = |d: &[u32]| d.iter().zip(orders).fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize);
        let ds: Vec<Vec<u32>> = (0..n).map(digits).collect();
        let mut mul = Vec::with_capacity(n * n);
        for a in &ds {
            for b in &ds {
                let s: Vec<u32> = a.iter().zip(b).zip(orders).map(|((x, y), m)| (x + y) % m).collect();
                mul.push(undigits(&s) as u32);
            }
        }
        let labels = if orders.len() == 1 {
            (0..n)
                .map(|k| match k {
                    0 => "1".to_string(),
                    1 => "t".to_string(),
                    k => format!("t^{k}"),
                })
                .collect()
        } else {
            ds.iter()
                .map(|d| format!("({})", d.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
                .collect()
        };
        let name = orders.iter().map(|m| format!("Z/{m}")).collect::<Vec<_>>().join("x");
        let inv = (0..n)
            .map(|g| {
                let d: Vec<u32> = ds[g].iter().zip(orders).map(|(&x, &m)| (m - x) % m).collect();
                undigits(&d) as u32
            })
            .collect();
        Ok(GroupTable {
            name,
            order: n,
            mul,
            inv,
            abelian: true,
            labels,
            cyclic_factors: Some(orders.to_vec()),
        })
    }

    /// G × H with `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(g: &GroupTable, h: &GroupTable) -> Result<Self> {
        let (m, k) = (g.order, h.order);
        let n = m.checked_mul(k).filter(|&n| n <= u32::MAX as usize).ok_or_else(|| Error::domain("group order too large"))?;
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let x = g.mul((a / k) as u32, (b / k) as u32) as usize;
                let y = h.mul((a % k) as u32, (b % k) as u32) as usize;
                mul.push((x * k + y) as u32);
            }
        }
        let inv = (0..n).map(|a| (g.inv((a / k) as u32) as usize * k + h.inv((a % k) as u32) as usize) as u32).collect();
        let labels = (0..n).map(|a| format!("({},{})", g.labels[a / k], h.labels[a % k])).collect();
        let cyclic_factors = match (&g.cyclic_factors, &h.cyclic_factors) {
            (Some(a), Some(b)) => Some([a.as_slice(), b.as_slice()].concat()),
            _ => None,
        };
        Ok(GroupTable {
            name: format!("({})x({})", g.name, h.name),
            order: n,
            mul,
            inv,
            abelian: g.abelian && h.abelian,
            labels,
            cyclic_factors,
        })
    }

    /// Same table under a new name and labels.
    pub fn relabeled(mut self, name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::Mismatch(format!("{} labels for order {}", labels.len(), self.order)));
        }
        self.name = name.into();
        self.labels = labels;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn cyclic_factors(&self) -> Option<&[u32]> {
        self.cyclic_factors.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    /// Checks `a` is a valid element index.
    pub fn element(&self, a: u32) -> Result<u32> {
        if (a as usize) < self.order {
            Ok(a)
        } else {
            Err(Error::domain(format!("{a} is not an element of {}", self.name)))
        }
    }

    /// Same underlying group, by name and order.
    pub(crate) fn same_as(&self, other: &GroupTable) -> bool {
        self.name == other.name && self.order == other.order
    }
}

/// A homomorphism given by its full table of images.
#[derive(Debug, Clone)]
pub struct GroupHom {
    src: Arc<GroupTable>,
    dst: Arc<GroupTable>,
    images: Vec<u32>,
}

impl GroupHom {
    pub fn new(src: Arc<GroupTable>, dst: Arc<GroupTable>, images: Vec<u32>) -> Result<Self> {
        if images.len() != src.order() || images.iter().any(|&x| x as usize >= dst.order()) {
            return Err(Error::Mismatch("image table does not match the groups".into()));
        }
        for a in 0..src.order() as u32 {
            for b in 0..src.order() as u32 {
                if images[src.mul(a, b) as usize] != dst.mul(images[a as usize], images[b as usize]) {
                    return Err(Error::IllDefined(format!(
                        "not a homomorphism at ({}, {})",
                        src.label(a),
                        src.label(b)
                    )));
                }
            }
        }
        Ok(GroupHom { src, dst, images })
    }

    pub fn from_fn(src: Arc<GroupTable>, dst: Arc<GroupTable>, f: impl Fn(u32) -> Result<u32>) -> Result<Self> {
        let images = (0..src.order() as u32).map(f).collect::<Result<Vec<_>>>()?;
        Self::new(src, dst, images)
    }

    pub fn identity(g: Arc<GroupTable>) -> Self {
        let images = (0..g.order() as u32).collect();
        GroupHom {
            src: g.clone(),
            dst: g,
            images,
        }
    }

    pub fn src(&self) -> &Arc<GroupTable> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<GroupTable> {
        &self.dst
    }

    pub fn apply(&self, a: u32) -> u32 {
        self.images[a as usize]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.dst.order()];
        self.images.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true)) && self.src.order() == self.dst.order()
    }
}

/// GL₂(F_q) as a table, with a lookup for diagonal matrices.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    table: Arc<GroupTable>,
    field: FiniteField,
    lookup: HashMap<[u32; 4], u32>,
}

impl MatrixGroup {
    /// Refuses fields with q > 5 (order 480 and beyond are out of reach).
    pub fn gl2(field: &FiniteField) -> Result<Self> {
        if field.order() > 5 {
            return Err(Error::ResourceLimit {
                what: "field order for GL2 tables",
                cap: 5,
                actual: field.order() as u64,
            });
        }
        let f = field;
        let elems: Vec<FieldElem> = f.elements().collect();
        let det = |m: &[FieldElem; 4]| f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]));
        let one = f.one();
        let zero = f.zero();
        let identity = [one, zero, zero, one];
        let mut mats = vec![identity];
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    for &d in &elems {
                        let m = [a, b, c, d];
                        if m != identity && !det(&m).is_zero() {
                            mats.push(m);
                        }
                    }
                }
            }
        }
        let key = |m: &[FieldElem; 4]| [f.index(m[0]), f.index(m[1]), f.index(m[2]), f.index(m[3])];
        let lookup: HashMap<[u32; 4], u32> = mats.iter().enumerate().map(|(i, m)| (key(m), i as u32)).collect();
        let n = mats.len();
        let mut mul = Vec::with_capacity(n * n);
        for x in &mats {
            for y in &mats {
                let p = [
                    f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
                    f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
                    f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
                    f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
                ];
                mul.push(lookup[&key(&p)]);
            }
        }
        let labels = mats
            .iter()
            .map(|m| format!("[{} {}; {} {}]", f.label(m[0]), f.label(m[1]), f.label(m[2]), f.label(m[3])))
            .collect();
        let table = GroupTable::from_table(format!("GL2(F_{})", f.order()), labels, mul)?;
        Ok(MatrixGroup {
            table: Arc::new(table),
            field: f.clone(),
            lookup,
        })
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn diag(&self, a: FieldElem, b: FieldElem) -> Result<u32> {
        let f = &self.field;
        if a.is_zero() || b.is_zero() {
            return Err(Error::domain("diagonal entries must be units"));
        }
        let z = f.index(f.zero());
        Ok(self.lookup[&[f.index(a), z, z, f.index(b)]])
    }
}
