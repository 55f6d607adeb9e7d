//! Digit sums over `Z_p` and exhaustive checks of the small-dimensional
//! bounds on `m(F) = min_{x ∈ F \ 0} s(x)`.
//!
//! `s(x)` sums the canonical representatives in `{0, .., p-1}`. Subspaces
//! are visited once each through their reduced row echelon form, so the
//! number visited must equal the Gaussian binomial coefficient.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpVector {
    p: u64,
    entries: Vec<u64>,
}

impl FpVector {
    pub fn new(p: u64, entries: &[i64]) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FpVector { p, entries: entries.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, c: u64) -> FpVector {
        FpVector { p: self.p, entries: self.entries.iter().map(|&x| x * c % self.p).collect() }
    }
}

pub fn digit_sum(v: &FpVector) -> u64 {
    v.entries.iter().sum()
}

/// A subspace of `Z_p^n` held by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpSubspace {
    p: u64,
    n: usize,
    basis: Vec<Vec<u64>>,
}

impl FpSubspace {
    /// Span of `vectors` in `Z_p^n`.
    pub fn span(p: u64, n: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for v in vectors {
            if v.len() != n {
                return Err(Error::Dimension(format!("vector of length {} in Z_p^{n}", v.len())));
            }
            rows.push(v.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect());
        }
        Ok(FpSubspace { p, n, basis: rref(p, rows) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.iter().map(|x| x % self.p).collect());
        rref(self.p, rows).len() == self.basis.len()
    }

    /// Calls `f` on every nonzero element, coefficient tuples in
    /// lexicographic order.
    fn for_each_nonzero(&self, mut f: impl FnMut(&[u64])) {
        let k = self.basis.len();
        let mut coeffs = vec![0u64; k];
        let mut v = vec![0u64; self.n];
        loop {
            // increment the coefficient tuple, last coordinate fastest
            let mut pos = k;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                coeffs[pos] += 1;
                if coeffs[pos] < self.p {
                    break;
                }
                coeffs[pos] = 0;
            }
            for (j, slot) in v.iter_mut().enumerate() {
                *slot = coeffs.iter().zip(&self.basis).map(|(c, b)| c * b[j]).sum::<u64>() % self.p;
            }
            f(&v);
        }
    }
}

fn rref(p: u64, mut rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = arith::mod_inverse(rows[rank][col] as i64, p as i64).expect("p prime") as u64;
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..n {
                    rows[r][c] = (rows[r][c] + (p - f) * rows[rank][c]) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Exact `m(F)` by scanning all `p^dim - 1` nonzero elements. The witness is
/// the first minimiser in coefficient order.
pub fn m_of_subspace(f: &FpSubspace) -> Result<(u64, FpVector)> {
    if f.dim() == 0 {
        return Err(Error::InvalidArgument("m(F) is undefined for the zero subspace".into()));
    }
    let mut best: Option<(u64, Vec<u64>)> = None;
    f.for_each_nonzero(|v| {
        let s: u64 = v.iter().sum();
        if best.as_ref().map_or(true, |(b, _)| s < *b) {
            best = Some((s, v.to_vec()));
        }
    });
    let (m, w) = best.expect("nonzero subspace has nonzero elements");
    Ok((m, FpVector { p: f.p, entries: w }))
}

/// `m` of the line through `direction`, from its `p - 1` nonzero multiples.
pub fn m_of_line(direction: &FpVector) -> Result<(u64, FpVector)> {
    if direction.is_zero() {
        return Err(Error::InvalidArgument("zero direction vector".into()));
    }
    let (x, _) = (1..direction.p)
        .map(|x| (x, digit_sum(&direction.scaled(x))))
        .min_by_key(|&(x, s)| (s, x))
        .expect("p >= 2");
    let w = direction.scaled(x);
    Ok((digit_sum(&w), w))
}

/// Number of `k`-dimensional subspaces of `Z_p^n`.
pub fn gaussian_binomial(p: u64, n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let q = p as u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// Every `k`-dimensional subspace of `Z_p^n`, once each, in canonical order
/// (pivot columns lexicographic, then free entries lexicographic).
pub fn subspaces(p: u64, n: usize, k: usize) -> Result<Vec<FpSubspace>> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // free slots: (row, col) with col > pivot[row], col not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pivots = pivots.clone();
                (pivots[r] + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut vals = vec![0u64; free.len()];
        loop {
            let mut basis = vec![vec![0u64; n]; k];
            for (r, &c) in pivots.iter().enumerate() {
                basis[r][c] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&vals) {
                basis[r][c] = v;
            }
            out.push(FpSubspace { p, n, basis });
            let mut pos = free.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                vals[pos] += 1;
                if vals[pos] < p {
                    break;
                }
                vals[pos] = 0;
            }
            if vals.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTally {
    pub case: String,
    pub checked: u64,
    pub failures: u64,
}

/// Outcome of one exhaustive per-prime scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: u8,
    pub prime: u64,
    pub subspaces_checked: u64,
    pub expected_subspaces: u64,
    pub cases: Vec<CaseTally>,
    pub failures: u64,
    pub max_m: u64,
    /// Basis of the first subspace attaining `max_m`.
    pub witness: Vec<Vec<u64>>,
    /// First failing subspace, if any.
    pub first_failure: Option<Vec<Vec<u64>>>,
    /// Lines on which two case predicates hold at once (`verify_lemma2` only).
    pub overlaps: u64,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.subspaces_checked == self.expected_subspaces
    }
}

struct Outcome {
    case: usize,
    m: u64,
    ok: bool,
    overlap: bool,
}

fn build_report(lemma: u8, p: u64, n: usize, k: usize, case_names: &[&str], spaces: &[FpSubspace], outcomes: Vec<Outcome>) -> LemmaReport {
    let mut cases: Vec<CaseTally> = case_names.iter().map(|c| CaseTally { case: c.to_string(), checked: 0, failures: 0 }).collect();
    let mut report = LemmaReport {
        lemma,
        prime: p,
        subspaces_checked: spaces.len() as u64,
        expected_subspaces: gaussian_binomial(p, n, k),
        cases: Vec::new(),
        failures: 0,
        max_m: 0,
        witness: Vec::new(),
        first_failure: None,
        overlaps: 0,
    };
    for (f, o) in spaces.iter().zip(outcomes) {
        cases[o.case].checked += 1;
        if !o.ok {
            cases[o.case].failures += 1;
            report.failures += 1;
            report.first_failure.get_or_insert_with(|| f.basis.clone());
        }
        if o.m > report.max_m {
            report.max_m = o.m;
            report.witness = f.basis.clone();
        }
        report.overlaps += o.overlap as u64;
    }
    report.cases = cases;
    report
}

/// Lines `L = Z_p (a, b, c)` of `Z_p^3`: `m(L) = p + 1` when `abc != 0` and
/// `(a+b)(a+c)(b+c) = 0`, otherwise `m(L) <= p`.
pub fn verify_lemma1(p: u64) -> Result<LemmaReport> {
    let lines = subspaces(p, 3, 1)?;
    let outcomes = lines
        .par_iter()
        .map(|l| {
            let d = &l.basis[0];
            let (a, b, c) = (d[0], d[1], d[2]);
            let exact = a * b * c % p != 0 && ((a + b) % p) * ((a + c) % p) % p * ((b + c) % p) % p == 0;
            let (m, _) = m_of_line(&FpVector { p, entries: d.clone() }).expect("nonzero direction");
            if exact {
                Outcome { case: 0, m, ok: m == p + 1, overlap: false }
            } else {
                Outcome { case: 1, m, ok: m <= p, overlap: false }
            }
        })
        .collect();
    Ok(build_report(1, p, 3, 1, &["abc!=0 and (a+b)(a+c)(b+c)=0: m = p+1", "otherwise: m <= p"], &lines, outcomes))
}

/// Lines `Z_p (a, b)` of `Z_p^2`, `p` odd: `m = p` if `a + b = 0`, else
/// `m = (p+1)/2` if `(a+2b)(b+2a) = 0`, else `m <= (p-1)/2`. Cases are
/// applied in that order.
pub fn verify_lemma2(p: u64) -> Result<LemmaReport> {
    if p == 2 {
        return Err(Error::InvalidArgument("the two-dimensional bound needs an odd prime".into()));
    }
    let lines = subspaces(p, 2, 1)?;
    let outcomes = lines
        .par_iter()
        .map(|l| {
            let (a, b) = (l.basis[0][0], l.basis[0][1]);
            let first = (a + b) % p == 0;
            let second = (a + 2 * b) % p * ((b + 2 * a) % p) % p == 0;
            let (m, _) = m_of_line(&FpVector { p, entries: l.basis[0].clone() }).expect("nonzero direction");
            let overlap = first && second;
            if first {
                Outcome { case: 0, m, ok: m == p, overlap }
            } else if second {
                Outcome { case: 1, m, ok: m == (p + 1) / 2, overlap }
            } else {
                Outcome { case: 2, m, ok: m <= (p - 1) / 2, overlap }
            }
        })
        .collect();
    Ok(build_report(
        2,
        p,
        2,
        1,
        &["a+b=0: m = p", "(a+2b)(b+2a)=0: m = (p+1)/2", "otherwise: m <= (p-1)/2"],
        &lines,
        outcomes,
    ))
}

/// Planes `P` of `Z_p^4`: `m(P) <= p`. Tallied separately for planes inside
/// a coordinate hyperplane and planes meeting every coordinate hyperplane
/// in a line.
pub fn verify_lemma3(p: u64) -> Result<LemmaReport> {
    let planes = subspaces(p, 4, 2)?;
    let outcomes = planes
        .par_iter()
        .map(|f| {
            let (m, _) = m_of_subspace(f).expect("plane is nonzero");
            let in_hyperplane = (0..4).any(|i| f.basis.iter().all(|b| b[i] == 0));
            Outcome { case: if in_hyperplane { 0 } else { 1 }, m, ok: m <= p, overlap: false }
        })
        .collect();
    Ok(build_report(
        3,
        p,
        4,
        2,
        &["inside a coordinate hyperplane: m <= p", "meets every coordinate hyperplane in a line: m <= p"],
        &planes,
        outcomes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(p: u64, d: &[i64]) -> FpSubspace {
        FpSubspace::span(p, d.len(), &[d.to_vec()]).unwrap()
    }

    #[test]
    fn digit_sum_examples() {
        assert_eq!(digit_sum(&FpVector::new(5, &[0, 0, 0]).unwrap()), 0);
        assert_eq!(digit_sum(&FpVector::new(5, &[1, 2, 3]).unwrap()), 6);
        assert_eq!(digit_sum(&FpVector::new(7, &[6, 6]).unwrap()), 12);
        assert_eq!(digit_sum(&FpVector::new(7, &[-1, 13]).unwrap()), 12);
        assert!(FpVector::new(6, &[1]).is_err());
    }

    #[test]
    fn m_examples() {
        for p in [2, 3, 5, 7] {
            let (m, w) = m_of_subspace(&line(p, &[1, 0])).unwrap();
            assert_eq!(m, 1);
            assert_eq!(w.entries(), &[1, 0]);
        }
        // multiples of (1,2) mod 5: sums 3, 6, 4, 7
        let (m, w) = m_of_subspace(&line(5, &[1, 2])).unwrap();
        assert_eq!(m, 3);
        assert_eq!(w.entries(), &[1, 2]);
        // multiples of (1,2,3) mod 5: sums 6, 7, 8, 9
        let (m, _) = m_of_subspace(&line(5, &[1, 2, 3])).unwrap();
        assert_eq!(m, 6);
        assert!(m_of_subspace(&FpSubspace::span(5, 3, &[]).unwrap()).is_err());
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
        assert_eq!(gaussian_binomial(3, 4, 2), 130);
        assert_eq!(gaussian_binomial(5, 4, 2), 806);
        assert_eq!(gaussian_binomial(7, 4, 2), 2850);
        for p in [2u64, 3, 5] {
            assert_eq!(subspaces(p, 3, 1).unwrap().len() as u64, p * p + p + 1);
            assert_eq!(subspaces(p, 2, 1).unwrap().len() as u64, p + 1);
            let planes = subspaces(p, 4, 2).unwrap();
            assert_eq!(planes.len() as u64, (p * p + 1) * (p * p + p + 1));
            let distinct: std::collections::HashSet<_> = planes.iter().collect();
            assert_eq!(distinct.len(), planes.len());
            // RREF is canonical: re-spanning a random-looking basis lands on the same rep
            for f in planes.iter().take(20) {
                let b = &f.basis;
                let mixed: Vec<Vec<i64>> = vec![
                    (0..4).map(|j| (b[0][j] + 2 * b[1][j]) as i64).collect(),
                    (0..4).map(|j| (b[0][j] + b[1][j]) as i64).collect(),
                ];
                let g = FpSubspace::span(p, 4, &mixed).unwrap();
                if g.dim() == 2 {
                    assert_eq!(&g, f);
                }
            }
        }
    }

    #[test]
    fn line_scan_agrees_with_generic_enumeration() {
        for p in [2u64, 3, 5, 7, 11] {
            for l in subspaces(p, 3, 1).unwrap() {
                let dir = FpVector { p, entries: l.basis[0].clone() };
                assert_eq!(m_of_line(&dir).unwrap().0, m_of_subspace(&l).unwrap().0);
            }
        }
    }

    #[test]
    fn monotone_under_containment() {
        for p in [3u64, 5] {
            for f in subspaces(p, 4, 2).unwrap().iter().step_by(7) {
                let (mf, _) = m_of_subspace(f).unwrap();
                for d in [vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]] {
                    let v: Vec<i64> = (0..4).map(|j| (d[0] * f.basis[0][j] + d[1] * f.basis[1][j]) as i64).collect();
                    let l = FpSubspace::span(p, 4, &[v]).unwrap();
                    assert!(f.contains(&l.basis[0]));
                    assert!(mf <= m_of_subspace(&l).unwrap().0);
                }
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        let p = 5;
        for f in subspaces(p, 4, 2).unwrap().iter().step_by(11) {
            let perm = [2usize, 0, 3, 1];
            let permuted: Vec<Vec<i64>> = f.basis.iter().map(|b| perm.iter().map(|&i| b[i] as i64).collect()).collect();
            let g = FpSubspace::span(p, 4, &permuted).unwrap();
            assert_eq!(m_of_subspace(f).unwrap().0, m_of_subspace(&g).unwrap().0);
        }
    }

    #[test]
    fn lemma1_small_primes() {
        let r = verify_lemma1(2).unwrap();
        assert_eq!(r.subspaces_checked, 7);
        assert!(r.passed());
        let r = verify_lemma1(5).unwrap();
        assert_eq!(r.subspaces_checked, 31);
        assert!(r.passed());
        // p = 3, direction (1,1,1) sits in the bound case with m = 3
        let (m, _) = m_of_line(&FpVector::new(3, &[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(m, 3);
    }

    #[test]
    fn lemma2_examples() {
        let (m, _) = m_of_line(&FpVector::new(5, &[1, 4]).unwrap()).unwrap();
        assert_eq!(m, 5);
        let (m, _) = m_of_line(&FpVector::new(5, &[1, 2]).unwrap()).unwrap();
        assert_eq!(m, 3);
        let (m, _) = m_of_line(&FpVector::new(7, &[1, 3]).unwrap()).unwrap();
        assert_eq!(m, 4);
        assert!(verify_lemma2(2).is_err());
        for p in [3, 5, 7, 11] {
            let r = verify_lemma2(p).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.overlaps, 0);
        }
    }

    #[test]
    fn lemma3_small_primes() {
        for (p, count) in [(2, 35), (3, 130), (5, 806)] {
            let r = verify_lemma3(p).unwrap();
            assert_eq!(r.subspaces_checked, count);
            assert!(r.passed());
            assert!(r.max_m <= p);
        }
    }
}
