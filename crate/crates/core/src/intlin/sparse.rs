use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use super::IntMatrix;
use crate::{Error, Result};

/// Sparse integer matrix stored as `(row, col, value)` triplets.
///
/// Triplets keep their insertion order so that the text format round-trips
/// byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    triplets: Vec<(usize, usize, i64)>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize, triplets: Vec<(usize, usize, i64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(triplets.len());
        for &(r, c, v) in &triplets {
            if r >= rows || c >= cols {
                return Err(Error::domain(format!("triplet ({r},{c}) outside {rows}x{cols}")));
            }
            if v == 0 {
                return Err(Error::domain(format!("explicit zero at ({r},{c})")));
            }
            if !seen.insert((r, c)) {
                return Err(Error::domain(format!("duplicate triplet at ({r},{c})")));
            }
        }
        Ok(SparseIntMatrix { rows, cols, triplets })
    }

    /// Builds from per-column entry lists, merging duplicates and dropping zeros.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        let cols = columns.len();
        let mut triplets = Vec::new();
        for (c, mut entries) in columns.into_iter().enumerate() {
            entries.sort_unstable_by_key(|e| e.0);
            let mut i = 0;
            while i < entries.len() {
                let r = entries[i].0;
                let mut v = 0i64;
                while i < entries.len() && entries[i].0 == r {
                    v = v
                        .checked_add(entries[i].1)
                        .ok_or(Error::ResourceLimit {
                            what: "sparse entry overflow",
                            cap: i64::MAX as u64,
                            actual: u64::MAX,
                        })?;
                    i += 1;
                }
                if r >= rows {
                    return Err(Error::domain(format!("row {r} outside {rows} rows")));
                }
                if v != 0 {
                    triplets.push((r, c, v));
                }
            }
        }
        Ok(SparseIntMatrix { rows, cols, triplets })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            triplets: Vec::new(),
        }
    }

    pub fn from_dense(m: &IntMatrix) -> Result<Self> {
        let mut triplets = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if !v.is_zero() {
                    let v: i64 = v.try_into().map_err(|_| Error::ResourceLimit {
                        what: "sparse entry bit length",
                        cap: 63,
                        actual: v.bits(),
                    })?;
                    triplets.push((i, j, v));
                }
            }
        }
        Ok(SparseIntMatrix {
            rows: m.rows(),
            cols: m.cols(),
            triplets,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn triplets(&self) -> &[(usize, usize, i64)] {
        &self.triplets
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for &(r, c, v) in &self.triplets {
            m.set(r, c, BigInt::from(v));
        }
        m
    }

    pub fn transpose(&self) -> Self {
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            triplets: self.triplets.iter().map(|&(r, c, v)| (c, r, v)).collect(),
        }
    }

    /// Column-wise entry lists.
    pub fn column_lists(&self) -> Vec<Vec<(usize, i64)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.triplets {
            cols[c].push((r, v));
        }
        cols
    }

    pub fn column(&self, c: usize) -> Vec<(usize, i64)> {
        self.triplets
            .iter()
            .filter(|t| t.1 == c)
            .map(|&(r, _, v)| (r, v))
            .collect()
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::Mismatch(format!("vector of length {} against {} columns", x.len(), self.cols)));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for &(r, c, v) in &self.triplets {
            if !x[c].is_zero() {
                out[r] += &x[c] * v;
            }
        }
        Ok(out)
    }

    pub fn mul_vec_i64(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols {
            return Err(Error::Mismatch(format!("vector of length {} against {} columns", x.len(), self.cols)));
        }
        let mut out = vec![0i64; self.rows];
        for &(r, c, v) in &self.triplets {
            if x[c] != 0 {
                out[r] = x[c]
                    .checked_mul(v)
                    .and_then(|p| out[r].checked_add(p))
                    .ok_or(Error::ResourceLimit {
                        what: "chain coefficient overflow",
                        cap: i64::MAX as u64,
                        actual: u64::MAX,
                    })?;
            }
        }
        Ok(out)
    }

    /// Product `self · other` (sparse × sparse), used for ∂∘∂ checks.
    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let left_cols = self.column_lists();
        let mut out_cols = Vec::with_capacity(other.cols);
        for col in other.column_lists() {
            let mut acc: std::collections::BTreeMap<usize, i128> = Default::default();
            for (k, w) in col {
                for &(r, v) in &left_cols[k] {
                    *acc.entry(r).or_default() += v as i128 * w as i128;
                }
            }
            let mut entries = Vec::new();
            for (r, v) in acc {
                if v != 0 {
                    let v = i64::try_from(v).map_err(|_| Error::ResourceLimit {
                        what: "sparse product overflow",
                        cap: i64::MAX as u64,
                        actual: u64::MAX,
                    })?;
                    entries.push((r, v));
                }
            }
            out_cols.push(entries);
        }
        SparseIntMatrix::from_columns(self.rows, out_cols)
    }

    /// Text format: header `R C NNZ`, then one `r c v` line per triplet.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 * (self.triplets.len() + 1));
        let _ = writeln!(s, "{} {} {}", self.rows, self.cols, self.triplets.len());
        for &(r, c, v) in &self.triplets {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().ok_or_else(|| Error::parse("empty sparse matrix text"))?;
        let h = parse_fields(header, 3)?;
        let (rows, cols, nnz) = (to_usize(&h[0])?, to_usize(&h[1])?, to_usize(&h[2])?);
        let mut triplets = Vec::with_capacity(nnz);
        for k in 0..nnz {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(format!("expected {nnz} triplets, found {k}")))?;
            let f = parse_fields(line, 3)?;
            let v: i64 = canonical_int(&f[2])?;
            triplets.push((to_usize(&f[0])?, to_usize(&f[1])?, v));
        }
        let rest: Vec<&str> = lines.collect();
        if !(rest.is_empty() || rest == [""]) {
            return Err(Error::parse("trailing content after triplets"));
        }
        SparseIntMatrix::new(rows, cols, triplets)
    }
}

fn parse_fields(line: &str, n: usize) -> Result<Vec<String>> {
    let f: Vec<String> = line.split(' ').map(str::to_string).collect();
    if f.len() != n || f.iter().any(String::is_empty) {
        return Err(Error::parse(format!("expected {n} space-separated fields in {line:?}")));
    }
    Ok(f)
}

fn to_usize(s: &str) -> Result<usize> {
    let v: i64 = canonical_int(s)?;
    usize::try_from(v).map_err(|_| Error::parse(format!("negative index {s}")))
}

/// Accepts only canonical decimal spellings, so that parsing and printing are inverse.
fn canonical_int(s: &str) -> Result<i64> {
    let v: i64 = s.parse().map_err(|_| Error::parse(format!("bad integer {s:?}")))?;
    if v.to_string() != s {
        return Err(Error::parse(format!("non-canonical integer {s:?}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m = SparseIntMatrix::new(3, 4, vec![(2, 1, -7), (0, 3, 1), (1, 1, 12)]).unwrap();
        let t = m.to_text();
        assert_eq!(t, "3 4 3\n2 1 -7\n0 3 1\n1 1 12\n");
        let back = SparseIntMatrix::from_text(&t).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_text(), t);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SparseIntMatrix::from_text("2 2 1\n0 0 0\n").is_err());
        assert!(SparseIntMatrix::from_text("2 2 1\n2 0 1\n").is_err());
        assert!(SparseIntMatrix::from_text("2 2 2\n0 0 1\n0 0 2\n").is_err());
        assert!(SparseIntMatrix::from_text("2 2 1\n0 0 +1\n").is_err());
        assert!(SparseIntMatrix::from_text("2 2 1\n0 0 1\n1 1 1\n").is_err());
        assert!(SparseIntMatrix::from_text("2 2 1\r\n0 0 1\n").is_err());
    }

    #[test]
    fn from_columns_merges() {
        let m = SparseIntMatrix::from_columns(2, vec![vec![(0, 1), (1, 2), (0, 1)], vec![(1, 1), (1, -1)]]).unwrap();
        assert_eq!(m.triplets(), &[(0, 0, 2), (1, 0, 2)]);
        assert_eq!(m.cols(), 2);
    }

    #[test]
    fn empty_matrix_text() {
        let m = SparseIntMatrix::zero(0, 5);
        assert_eq!(m.to_text(), "0 5 0\n");
        assert_eq!(SparseIntMatrix::from_text("0 5 0\n").unwrap(), m);
    }
}
