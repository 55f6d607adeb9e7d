//! Hermite and Smith normal forms over the integers.
//!
//! Hermite convention (fixed, canonical forms depend on it): row-style and
//! upper triangular. For an `n x d` input of full column rank, `U * m = H`
//! where the first `d` rows of `H` are upper triangular with positive
//! diagonal, every entry above a diagonal entry lies in `[0, diagonal)`,
//! and the remaining `n - d` rows are zero. The row space of `H` equals the
//! row space of `m`.

use super::IntMatrix;
use crate::arith;
use crate::error::{Error, Result};

/// Returns `(H, U)` with `U` unimodular and `U * m = H`.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let (n, d) = (m.rows(), m.cols());
    if n < d {
        return Err(Error::RankDeficient);
    }
    let mut h = m.clone();
    let mut u = IntMatrix::identity(n);
    for c in 0..d {
        loop {
            let pivot = (c..n)
                .filter(|&r| h.get(r, c) != 0)
                .min_by_key(|&r| h.get(r, c).unsigned_abs());
            let Some(p) = pivot else {
                return Err(Error::RankDeficient);
            };
            h.swap_rows(c, p);
            u.swap_rows(c, p);
            let pv = h.get(c, c);
            let mut clean = true;
            for r in c + 1..n {
                let x = h.get(r, c);
                if x == 0 {
                    continue;
                }
                let q = x / pv;
                h.add_row_multiple(r, c, -q)?;
                u.add_row_multiple(r, c, -q)?;
                if h.get(r, c) != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(c, c) < 0 {
            h.negate_row(c);
            u.negate_row(c);
        }
        let pv = h.get(c, c);
        for r in 0..c {
            let q = h.get(r, c).div_euclid(pv);
            h.add_row_multiple(r, c, -q)?;
            u.add_row_multiple(r, c, -q)?;
        }
    }
    Ok((h, u))
}

/// Returns `(S, U, V)` with `U * m * V = S`, `S` diagonal with nonnegative
/// entries forming a divisibility chain (zeros last), `U`, `V` unimodular.
pub fn smith_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
    let (r, c) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = s.get(i, j);
                if x != 0 && best.map_or(true, |(bi, bj)| x.unsigned_abs() < s.get(bi, bj).unsigned_abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let pv = s.get(t, t);
            let mut clean = true;
            for i in t + 1..r {
                let q = s.get(i, t) / pv;
                s.add_row_multiple(i, t, -q)?;
                u.add_row_multiple(i, t, -q)?;
                clean &= s.get(i, t) == 0;
            }
            for j in t + 1..c {
                let q = s.get(t, j) / pv;
                s.add_col_multiple(j, t, -q)?;
                v.add_col_multiple(j, t, -q)?;
                clean &= s.get(t, j) == 0;
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..r {
                    let x = s.get(i, t);
                    if x != 0 && x.unsigned_abs() < s.get(best.0, best.1).unsigned_abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    let x = s.get(t, j);
                    if x != 0 && x.unsigned_abs() < s.get(best.0, best.1).unsigned_abs() {
                        best = (t, j);
                    }
                }
                s.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                s.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| s.get(i, j) % pv != 0));
            match bad {
                Some(i) => {
                    s.add_row_multiple(t, i, 1)?;
                    u.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if s.get(t, t) < 0 {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok((s, u, v))
}

/// Diagonal of a Smith form, in order.
pub(crate) fn smith_diagonal(m: &IntMatrix) -> Result<Vec<i128>> {
    let (s, _, _) = smith_normal_form(m)?;
    Ok((0..s.rows().min(s.cols())).map(|i| s.get(i, i)).collect())
}

#[allow(dead_code)]
pub(crate) fn product(xs: &[i128]) -> Result<i128> {
    xs.iter().try_fold(1i128, |acc, &x| arith::mul(acc, x))
}
