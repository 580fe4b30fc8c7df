use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{check_bits, Caps, IntMatrix};
use crate::Result;

/// Row-style Hermite normal form with default caps. Returns `(H, U)` with
/// `U·A = H`, `U` unimodular.
pub fn hnf(a: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    hnf_with(a, &Caps::default())
}

/// Row-style Hermite normal form: pivots positive, entries above each pivot
/// reduced into `[0, pivot)`, zero rows at the bottom.
pub fn hnf_with(a: &IntMatrix, caps: &Caps) -> Result<(IntMatrix, IntMatrix)> {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    hnf_in_place(&mut h, Some(&mut u), caps)?;
    Ok((h, u))
}

/// Reduces `h` in place and returns the pivot column of each nonzero row.
/// Row operations are mirrored on `u` when supplied.
pub(crate) fn hnf_in_place(h: &mut IntMatrix, mut u: Option<&mut IntMatrix>, caps: &Caps) -> Result<Vec<usize>> {
    let (m, n) = (h.rows(), h.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            // minimal-absolute-value pivot among the remaining rows
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..m {
                let v = h.get(i, c);
                if v.is_zero() {
                    continue;
                }
                let av = v.abs();
                if best.as_ref().is_none_or(|(_, b)| av < *b) {
                    best = Some((i, av));
                }
            }
            let Some((p, _)) = best else { break };
            h.swap_rows(r, p);
            if let Some(u) = u.as_deref_mut() {
                u.swap_rows(r, p);
            }
            let piv = h.get(r, c).clone();
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c) / &piv;
                if !q.is_zero() {
                    h.sub_row_multiple(i, r, &q);
                    if let Some(u) = u.as_deref_mut() {
                        u.sub_row_multiple(i, r, &q);
                    }
                    check_row_bits(h, i, caps)?;
                }
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(r);
            }
        }
        let piv = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&piv);
            if !q.is_zero() {
                h.sub_row_multiple(i, r, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.sub_row_multiple(i, r, &q);
                }
                check_row_bits(h, i, caps)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if let Some(u) = u {
        for x in u.entries() {
            check_bits(x, caps)?;
        }
    }
    Ok(pivots)
}

fn check_row_bits(h: &IntMatrix, i: usize, caps: &Caps) -> Result<()> {
    for x in h.row(i) {
        check_bits(x, caps)?;
    }
    Ok(())
}

/// Pivot columns of a matrix already in row Hermite form.
#[cfg(test)]
pub(crate) fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows())
        .map_while(|i| (0..h.cols()).find(|&j| !h.get(i, j).is_zero()))
        .collect()
}
