//! Finite fields with discrete-logarithm tables, and factored S-unit rationals.
//!
//! Elements of `F_q` are addressed by the base-`p` digits of their polynomial
//! representative (coefficient of `x^i` is digit `i`). Multiplication goes
//! through the log tables, addition through the digits.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub const DEFAULT_FIELD_CAP: u32 = 1 << 10;

const NO_LOG: u32 = u32::MAX;

/// An element of a finite field: zero, or `g^exp` with `exp < q − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    q: u32,
    exp: Option<u32>,
}

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        self.exp.is_none()
    }

    /// Exponent with respect to the field's generator; `None` for zero.
    pub fn exponent(&self) -> Option<u32> {
        self.exp
    }

    pub fn field_order(&self) -> u32 {
        self.q
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    d: u32,
    q: u32,
    /// Monic modulus, coefficients low to high (length `d + 1`).
    modulus: Vec<u32>,
    /// `exp[k]` is the index of `g^k`.
    exp: Vec<u32>,
    /// `log[i]` is the exponent of element index `i`, `NO_LOG` for zero.
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u32, d: u32, poly: Option<&[u32]>) -> Result<Self> {
        Self::with_cap(p, d, poly, DEFAULT_FIELD_CAP)
    }

    /// Builds `F_{p^d}`. Without a modulus the lexicographically least monic
    /// irreducible is used, comparing coefficients from `x^{d−1}` down.
    pub fn with_cap(p: u32, d: u32, poly: Option<&[u32]>, cap: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if d == 0 {
            return Err(Error::domain("field degree must be positive"));
        }
        let q = (p as u64)
            .checked_pow(d)
            .filter(|&q| q <= cap as u64)
            .ok_or(Error::ResourceLimit {
                what: "field order",
                cap: cap as u64,
                actual: (p as u64).saturating_pow(d),
            })? as u32;
        let modulus = match poly {
            Some(c) => {
                if c.len() != d as usize + 1 || c[d as usize] != 1 || c.iter().any(|&x| x >= p) {
                    return Err(Error::domain(format!(
                        "modulus must be monic of degree {d} with coefficients below {p}"
                    )));
                }
                if !is_irreducible(c, p) {
                    return Err(Error::domain(format!("modulus {c:?} is reducible over F_{p}")));
                }
                c.to_vec()
            }
            None => (0..q)
                .map(|t| {
                    let mut c = digits(t, p, d);
                    c.push(1);
                    c
                })
                .find(|c| is_irreducible(c, p))
                .expect("an irreducible polynomial exists in every degree"),
        };

        let mulx = |i: u32, j: u32| -> u32 { poly_mulmod(&digits(i, p, d), &digits(j, p, d), &modulus, p) };
        let n = q - 1;
        let mut found = None;
        for g in 1..q {
            let mut powers = Vec::with_capacity(n as usize);
            let mut cur = 1u32;
            loop {
                powers.push(cur);
                cur = mulx(cur, g);
                if cur == 1 {
                    break;
                }
            }
            if powers.len() as u32 == n {
                found = Some(powers);
                break;
            }
        }
        let exp = found.ok_or_else(|| Error::domain("no unit generator found"))?;
        let mut log = vec![NO_LOG; q as usize];
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        Ok(FiniteField { p, d, q, modulus, exp, log })
    }

    /// Builds `F_q` from its order alone.
    pub fn from_order(q: u32) -> Result<Self> {
        let (p, d) = prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
        Self::new(p, d, None)
    }

    /// Parses `"q=9"` or `"p=3,d=2,poly=1,0,1"` (coefficients low to high).
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(q) = spec.strip_prefix("q=") {
            let q: u32 = q.parse().map_err(|_| Error::parse(format!("bad field order {q:?}")))?;
            return Self::from_order(q);
        }
        let mut p = None;
        let mut d = None;
        let mut poly = None;
        let mut rest = spec;
        while !rest.is_empty() {
            let (key, tail) = rest
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("bad field spec {spec:?}")))?;
            match key {
                "p" | "d" => {
                    let (v, t) = tail.split_once(',').unwrap_or((tail, ""));
                    let v: u32 = v.parse().map_err(|_| Error::parse(format!("bad value for {key}")))?;
                    if key == "p" {
                        p = Some(v);
                    } else {
                        d = Some(v);
                    }
                    rest = t;
                }
                "poly" => {
                    let c: std::result::Result<Vec<u32>, _> = tail.split(',').map(str::parse).collect();
                    poly = Some(c.map_err(|_| Error::parse(format!("bad modulus {tail:?}")))?);
                    rest = "";
                }
                _ => return Err(Error::parse(format!("unknown field spec key {key:?}"))),
            }
        }
        let p = p.ok_or_else(|| Error::parse("field spec needs p"))?;
        Self::new(p, d.unwrap_or(1), poly.as_deref())
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Order of the unit group, `q − 1`.
    pub fn unit_order(&self) -> u32 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { q: self.q, exp: None }
    }

    pub fn one(&self) -> FieldElem {
        self.from_exponent(0)
    }

    pub fn generator(&self) -> FieldElem {
        self.from_exponent(1)
    }

    pub fn from_exponent(&self, k: u64) -> FieldElem {
        FieldElem {
            q: self.q,
            exp: Some((k % self.unit_order() as u64) as u32),
        }
    }

    /// Element with polynomial-digit index `i`.
    pub fn from_index(&self, i: u32) -> Result<FieldElem> {
        if i >= self.q {
            return Err(Error::domain(format!("element index {i} outside F_{}", self.q)));
        }
        let l = self.log[i as usize];
        Ok(FieldElem {
            q: self.q,
            exp: (l != NO_LOG).then_some(l),
        })
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        let r = n.rem_euclid(self.p as i64) as u32;
        self.from_index(r).expect("prime subfield index")
    }

    pub fn index(&self, a: FieldElem) -> u32 {
        self.check(a);
        match a.exp {
            None => 0,
            Some(k) => self.exp[k as usize],
        }
    }

    /// Polynomial coefficients of `a`, low to high.
    pub fn coefficients(&self, a: FieldElem) -> Vec<u32> {
        digits(self.index(a), self.p, self.d)
    }

    /// Nonzero elements in exponent order `g^0, g^1, …`.
    pub fn units(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.unit_order() as u64).map(|k| self.from_exponent(k))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(|i| self.from_index(i).expect("in range"))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (x, y) = (self.index(a), self.index(b));
        let mut r = 0u32;
        let mut w = 1u32;
        let (mut x, mut y) = (x, y);
        for _ in 0..self.d {
            r += ((x % self.p + y % self.p) % self.p) * w;
            x /= self.p;
            y /= self.p;
            w *= self.p;
        }
        self.from_index(r).expect("digits stay in range")
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let mut x = self.index(a);
        let mut r = 0u32;
        let mut w = 1u32;
        for _ in 0..self.d {
            r += ((self.p - x % self.p) % self.p) * w;
            x /= self.p;
            w *= self.p;
        }
        self.from_index(r).expect("digits stay in range")
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        match (a.exp, b.exp) {
            (Some(x), Some(y)) => self.from_exponent(x as u64 + y as u64),
            _ => self.zero(),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        self.check(a);
        let k = a.exp.ok_or_else(|| Error::domain("zero has no inverse"))?;
        Ok(self.from_exponent((self.unit_order() - k) as u64))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: i64) -> Result<FieldElem> {
        self.check(a);
        match a.exp {
            None if e > 0 => Ok(self.zero()),
            None if e == 0 => Ok(self.one()),
            None => Err(Error::domain("zero to a negative power")),
            Some(k) => {
                let n = self.unit_order() as i128;
                Ok(self.from_exponent((k as i128 * e as i128).rem_euclid(n) as u64))
            }
        }
    }

    /// `1 − a`; zero exactly when `a = 1`.
    pub fn one_minus(&self, a: FieldElem) -> FieldElem {
        self.sub(self.one(), a)
    }

    /// Exponent `k` with `g^k = a`.
    pub fn dlog(&self, a: FieldElem) -> Result<u32> {
        self.check(a);
        a.exp.ok_or_else(|| Error::domain("discrete logarithm of zero"))
    }

    /// `0`, or the exponent of `g` (`g^k`); prime fields print the integer.
    pub fn label(&self, a: FieldElem) -> String {
        if self.d == 1 {
            return self.index(a).to_string();
        }
        match a.exp {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(k) => format!("g^{k}"),
        }
    }

    /// Inverse of [`FiniteField::label`]; prime fields also accept negative integers.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("g^") {
            let k: u64 = k.parse().map_err(|_| Error::parse(format!("bad exponent {k:?}")))?;
            return Ok(self.from_exponent(k));
        }
        if s == "g" {
            return Ok(self.generator());
        }
        let n: i64 = s.parse().map_err(|_| Error::parse(format!("bad field element {s:?}")))?;
        if self.d > 1 && !(0..=1).contains(&n) {
            return Err(Error::parse(format!("use g^k for elements of F_{}", self.q)));
        }
        Ok(self.from_int(n))
    }

    fn check(&self, a: FieldElem) {
        assert_eq!(a.q, self.q, "element of F_{} used in F_{}", a.q, self.q);
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)?;
        if self.d > 1 {
            write!(f, " = F_{}[x]/(", self.p)?;
            let mut first = true;
            for (i, &c) in self.modulus.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                match (i, c) {
                    (0, _) => write!(f, "{c}")?,
                    (_, 1) => write!(f, "x^{i}")?,
                    _ => write!(f, "{c}x^{i}")?,
                }
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn digits(mut i: u32, p: u32, d: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(d as usize);
    for _ in 0..d {
        c.push(i % p);
        i /= p;
    }
    c
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> u32 {
    let d = m.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (d..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (t, &mt) in m.iter().enumerate() {
            let idx = k - d + t;
            prod[idx] = (prod[idx] + (p as u64 - c) * mt as u64) % p as u64;
        }
    }
    let r: Vec<u32> = prod[..d].iter().map(|&x| x as u32).collect();
    undigits(&r, p)
}

/// Remainder of `a` modulo a monic `m`, coefficients low to high.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = r.pop().expect("non-empty");
        if c == 0 {
            continue;
        }
        let off = r.len() - dm;
        for (t, &mt) in m[..dm].iter().enumerate() {
            r[off + t] = (r[off + t] + (p - c) * mt % p) % p;
        }
    }
    r
}

/// Trial division by every monic polynomial of degree at most `deg/2`.
fn is_irreducible(c: &[u32], p: u32) -> bool {
    let d = (c.len() - 1) as u32;
    for k in 1..=d / 2 {
        for t in 0..p.pow(k) {
            let mut f = digits(t, p, k);
            f.push(1);
            if poly_rem(c, &f, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut d = 0;
    while r.is_multiple_of(p) {
        r /= p;
        d += 1;
    }
    (r == 1).then_some((p, d))
}

/// A nonzero rational as `sign · ∏ p^{e_p}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredRational {
    negative: bool,
    exps: BTreeMap<u64, i64>,
}

impl FactoredRational {
    pub fn one() -> Self {
        FactoredRational {
            negative: false,
            exps: BTreeMap::new(),
        }
    }

    pub fn minus_one() -> Self {
        FactoredRational {
            negative: true,
            exps: BTreeMap::new(),
        }
    }

    /// `sign · ∏ p^e`, dropping zero exponents.
    pub fn from_parts(negative: bool, exps: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut m = BTreeMap::new();
        for (p, e) in exps {
            *m.entry(p).or_insert(0) += e;
        }
        m.retain(|_, e| *e != 0);
        FactoredRational { negative, exps: m }
    }

    pub fn sign(&self) -> i32 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exps
    }

    /// Valuation at the prime `p`.
    pub fn valuation(&self, p: u64) -> i64 {
        self.exps.get(&p).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_parts(
            self.negative != other.negative,
            self.exps.iter().chain(&other.exps).map(|(&p, &e)| (p, e)),
        )
    }

    pub fn inv(&self) -> Self {
        FactoredRational {
            negative: self.negative,
            exps: self.exps.iter().map(|(&p, &e)| (p, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        FactoredRational {
            negative: self.negative && k.rem_euclid(2) == 1,
            exps: if k == 0 {
                BTreeMap::new()
            } else {
                self.exps.iter().map(|(&p, &e)| (p, e * k)).collect()
            },
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&p, &e) in &self.exps {
            let pp = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            if e > 0 {
                num *= pp;
            } else {
                den *= pp;
            }
        }
        if self.negative {
            num = -num;
        }
        BigRational::new(num, den)
    }

    /// Residue mod an odd prime `p` not in the support.
    pub fn residue_mod(&self, p: u64) -> Result<u64> {
        if self.valuation(p) != 0 {
            return Err(Error::domain(format!("{self} is not a unit at {p}")));
        }
        let mut r = if self.negative { p - 1 } else { 1 };
        for (&l, &e) in &self.exps {
            let base = if e >= 0 { l % p } else { mod_inv(l % p, p) };
            r = r * mod_pow(base, e.unsigned_abs(), p) % p;
        }
        Ok(r)
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

/// Factors `r` over the primes in `s`; entries `−1` in `s` are ignored (the
/// sign is always in the model).
pub fn qstar_factor(r: &BigRational, s: &[i64]) -> Result<FactoredRational> {
    if r.is_zero() {
        return Err(Error::domain("zero is not a unit"));
    }
    let mut exps = BTreeMap::new();
    let mut num = r.numer().abs();
    let mut den = r.denom().abs();
    for &p in s.iter().filter(|&&p| p > 1) {
        let bp = BigInt::from(p);
        let mut e = 0i64;
        while (&num % &bp).is_zero() {
            num /= &bp;
            e += 1;
        }
        while (&den % &bp).is_zero() {
            den /= &bp;
            e -= 1;
        }
        if e != 0 {
            exps.insert(p as u64, e);
        }
    }
    if !num.is_one() || !den.is_one() {
        let rest = if num.is_one() { den } else { num };
        return Err(Error::OutOfModel {
            value: r.to_string(),
            prime: smallest_factor(&rest).to_string(),
        });
    }
    Ok(FactoredRational {
        negative: r.is_negative(),
        exps,
    })
}

/// Factors an integer completely (trial division), for rationals of modest size.
pub fn factor_rational(r: &BigRational) -> Result<FactoredRational> {
    if r.is_zero() {
        return Err(Error::domain("zero is not a unit"));
    }
    let mut parts = Vec::new();
    for (x, sgn) in [(r.numer().abs(), 1i64), (r.denom().abs(), -1)] {
        let mut x = x;
        while !x.is_one() {
            let p = smallest_factor(&x);
            x /= &p;
            let p = p
                .to_u64()
                .ok_or_else(|| Error::domain(format!("prime factor of {r} too large")))?;
            parts.push((p, sgn));
        }
    }
    Ok(FactoredRational::from_parts(r.is_negative(), parts))
}

fn smallest_factor(n: &BigInt) -> BigInt {
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return d;
        }
        d += 1;
    }
    n.clone()
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

/// Parses `"n"` or `"n/d"` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.parse().map_err(|_| Error::parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| Error::parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f3 = FiniteField::new(3, 1, None).unwrap();
        assert_eq!(f3.unit_order(), 2);
        let f4 = FiniteField::new(2, 2, None).unwrap();
        assert_eq!(f4.unit_order(), 3);
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.index(f4.generator()), 2);
    }

    #[test]
    fn dlog_table_f7() {
        let f = FiniteField::new(7, 1, None).unwrap();
        assert_eq!(f.index(f.generator()), 3);
        let expected = [(3, 1), (2, 2), (6, 3), (4, 4), (5, 5), (1, 0)];
        for (x, k) in expected {
            assert_eq!(f.dlog(f.from_int(x)).unwrap(), k);
        }
        assert!(f.dlog(f.zero()).is_err());
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FiniteField::from_order(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::from_order(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::from_order(16).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn one_minus_cases() {
        let f5 = FiniteField::from_order(5).unwrap();
        assert_eq!(f5.one_minus(f5.from_int(2)), f5.from_int(4));
        let f7 = FiniteField::from_order(7).unwrap();
        assert!(f7.one_minus(f7.one()).is_zero());
        let f4 = FiniteField::from_order(4).unwrap();
        let w = f4.generator();
        assert_eq!(f4.one_minus(w), f4.mul(w, w));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FiniteField::new(4, 1, None).is_err());
        assert!(FiniteField::new(2, 2, Some(&[1, 0, 1])).is_err());
        assert!(FiniteField::new(2, 11, None).unwrap_err().is_resource_limit());
        assert!(FiniteField::from_order(6).is_err());
    }

    #[test]
    fn spec_strings() {
        let a = FiniteField::parse_spec("q=9").unwrap();
        let b = FiniteField::parse_spec("p=3,d=2,poly=1,0,1").unwrap();
        assert_eq!(a, b);
        assert_eq!(FiniteField::parse_spec("p=7").unwrap().order(), 7);
        assert!(FiniteField::parse_spec("p=3,d=2,poly=2,0,1").is_err());
        assert!(FiniteField::parse_spec("r=3").is_err());
        assert_eq!(b.to_string(), "F_9 = F_3[x]/(x^2 + 1)");
    }

    #[test]
    fn labels_round_trip() {
        for q in [7, 8, 9] {
            let f = FiniteField::from_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.parse_elem(&f.label(a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn qstar_examples() {
        let r = qstar_factor(&BigRational::new((-8).into(), 9.into()), &[2, 3]).unwrap();
        assert_eq!(r.sign(), -1);
        assert_eq!(r.exponents().iter().map(|(&p, &e)| (p, e)).collect::<Vec<_>>(), vec![(2, 3), (3, -2)]);
        let one = qstar_factor(&BigRational::one(), &[2, 3]).unwrap();
        assert_eq!(one, FactoredRational::one());
        let err = qstar_factor(&BigRational::from_integer(10.into()), &[2, 3]).unwrap_err();
        assert!(matches!(err, Error::OutOfModel { .. }));
        assert!(qstar_factor(&BigRational::zero(), &[2]).is_err());
    }

    #[test]
    fn residues() {
        let r = FactoredRational::from_parts(true, [(2, 1), (5, -1)]);
        // -2/5 mod 3 = -2 * 2 = -4 = 2
        assert_eq!(r.residue_mod(3).unwrap(), 2);
        assert!(r.residue_mod(5).is_err());
    }
}
