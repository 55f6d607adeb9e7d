use std::fmt;

use serde::{Deserialize, Serialize};

use super::normal_form::{hermite_normal_form, smith_diagonal};
use super::IntMatrix;
use crate::arith;
use crate::error::{Error, Result};

/// Largest admissible common denominator; keeps every product of two
/// reduced residues inside `i128`.
const MAX_DENOMINATOR: i128 = 1 << 62;

/// A rational vector with a common positive denominator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FracVec {
    pub num: Vec<i128>,
    pub den: i128,
}

impl FracVec {
    pub fn new(num: Vec<i128>, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            FracVec { num: num.into_iter().map(|x| -x).collect(), den: -den }
        } else {
            FracVec { num, den }
        }
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    /// Same vector with the common denominator reduced as far as possible.
    pub fn normalized(&self) -> FracVec {
        let g = self.num.iter().fold(self.den, |g, &x| arith::gcd(g, x));
        FracVec { num: self.num.iter().map(|x| x / g).collect(), den: self.den / g }
    }

    /// Numerator of the coordinate sum (over `self.den`).
    pub fn coordinate_sum(&self) -> i128 {
        self.num.iter().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.num.iter().all(|x| x % self.den == 0)
    }

    /// Componentwise fractional part.
    pub fn fractional_part(&self) -> FracVec {
        FracVec { num: self.num.iter().map(|x| x.rem_euclid(self.den)).collect(), den: self.den }
    }

    fn coord_string(&self, i: usize) -> String {
        let g = arith::gcd(self.num[i], self.den);
        let (n, d) = (self.num[i] / g.max(1), self.den / g.max(1));
        if d == 1 {
            n.to_string()
        } else {
            format!("{n}/{d}")
        }
    }
}

impl PartialEq for FracVec {
    fn eq(&self, other: &Self) -> bool {
        self.num.len() == other.num.len()
            && self.num.iter().zip(&other.num).all(|(&a, &b)| a * other.den == b * self.den)
    }
}

impl Eq for FracVec {}

impl fmt::Display for FracVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.num.len()).map(|i| self.coord_string(i)).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A lattice `D` with `Z^d ⊆ D ⊆ (1/M) Z^d`.
///
/// Stored in normal form: `M` is the exponent of `D / Z^d` (the smallest
/// admissible denominator) and `basis` is the Hermite normal form of the row
/// lattice `M·D`. Equality compares exactly this normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperLattice {
    dim: usize,
    denom: i128,
    basis: IntMatrix,
}

impl SuperLattice {
    /// `Z^d + Σ Z·(g / denom)` for the given numerator vectors `g`.
    pub fn new<R: AsRef<[i128]>>(dim: usize, denom: i128, generators: &[R]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("lattice dimension must be positive".into()));
        }
        if denom <= 0 {
            return Err(Error::InvalidArgument(format!("denominator must be positive, got {denom}")));
        }
        if denom > MAX_DENOMINATOR {
            return Err(Error::Overflow("superlattice denominator"));
        }
        let mut rows: Vec<Vec<i128>> = (0..dim)
            .map(|i| {
                let mut r = vec![0; dim];
                r[i] = denom;
                r
            })
            .collect();
        for g in generators {
            let g = g.as_ref();
            if g.len() != dim {
                return Err(Error::Dimension(format!("generator of length {} in dimension {dim}", g.len())));
            }
            let g: Vec<i128> = g.iter().map(|x| x.rem_euclid(denom)).collect();
            if g.iter().any(|&x| x != 0) {
                rows.push(g);
            }
        }
        let (h, _) = hermite_normal_form(&IntMatrix::from_rows(&rows)?)?;
        let h = IntMatrix::from_rows(&h.to_rows()[..dim])?;

        // exponent of D/Z^d: lcm of the row denominators in lowest terms
        let mut exponent = 1i128;
        for i in 0..dim {
            let content = h.row(i).iter().fold(denom, |g, &x| arith::gcd(g, x));
            exponent = arith::lcm(exponent, denom / content)?;
        }
        let shrink = denom / exponent;
        let basis = if shrink == 1 {
            h
        } else {
            let scaled: Vec<Vec<i128>> = h.to_rows().into_iter().map(|r| r.into_iter().map(|x| x / shrink).collect()).collect();
            hermite_normal_form(&IntMatrix::from_rows(&scaled)?)?.0
        };
        Ok(SuperLattice { dim, denom: exponent, basis })
    }

    /// The base lattice `Z^d` itself.
    pub fn integer(dim: usize) -> Self {
        SuperLattice { dim, denom: 1, basis: IntMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Smallest `M` with `M·D ⊆ Z^d`.
    pub fn denominator(&self) -> i128 {
        self.denom
    }

    /// Hermite basis of `M·D` (rows).
    pub fn hermite_basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// `[D : Z^d] = M^d / det(H)`.
    pub fn index(&self) -> i128 {
        let diag: i128 = (0..self.dim).map(|i| self.basis.get(i, i)).product();
        let md = (0..self.dim).try_fold(1i128, |acc, _| arith::mul(acc, self.denom));
        md.expect("index fits in i128 by construction") / diag
    }

    /// Basis rows that are nontrivial modulo `Z^d`, each with its order in
    /// the quotient group `D/Z^d` along the Hermite digit decomposition.
    pub fn generators(&self) -> Vec<FracVec> {
        (0..self.dim)
            .filter(|&i| self.basis.get(i, i) != self.denom)
            .map(|i| FracVec::new(self.basis.row(i).to_vec(), self.denom).fractional_part())
            .collect()
    }

    /// Membership test for a rational point.
    pub fn contains(&self, p: &FracVec) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        // M·p must be integral
        let mut v = Vec::with_capacity(self.dim);
        for &x in &p.num {
            let scaled = match x.checked_mul(self.denom) {
                Some(s) => s,
                None => return false,
            };
            if scaled % p.den != 0 {
                return false;
            }
            v.push(scaled / p.den);
        }
        // then M·p must be in the row lattice of the (upper triangular) basis
        for i in 0..self.dim {
            let d = self.basis.get(i, i);
            if v[i] % d != 0 {
                return false;
            }
            let q = v[i] / d;
            for j in i..self.dim {
                v[j] -= q * self.basis.get(i, j);
            }
        }
        true
    }

    /// Calls `visit` on the numerators (over `M`, reduced into `[0, M)`) of one
    /// representative per coset of `D/Z^d`, in enumeration order. Stops early
    /// when `visit` returns `false`.
    pub fn visit_cosets(&self, mut visit: impl FnMut(&[i128]) -> bool) {
        let mut walker = CosetWalker::new(self);
        loop {
            if !visit(&walker.cur) {
                return;
            }
            if !walker.advance() {
                return;
            }
        }
    }
}

struct CosetWalker {
    m: i128,
    rows: Vec<Vec<i128>>,
    orders: Vec<i128>,
    counters: Vec<i128>,
    cur: Vec<i128>,
}

impl CosetWalker {
    fn new(l: &SuperLattice) -> Self {
        let m = l.denom;
        let mut rows = Vec::new();
        let mut orders = Vec::new();
        for i in 0..l.dim {
            let diag = l.basis.get(i, i);
            if diag != m {
                rows.push(l.basis.row(i).iter().map(|x| x.rem_euclid(m)).collect());
                orders.push(m / diag);
            }
        }
        let counters = vec![0; rows.len()];
        CosetWalker { m, rows, orders, counters, cur: vec![0; l.dim] }
    }

    /// Mixed-radix increment, first digit fastest. Returns false once every
    /// coset has been produced.
    fn advance(&mut self) -> bool {
        for pos in 0..self.rows.len() {
            self.counters[pos] += 1;
            let row = &self.rows[pos];
            if self.counters[pos] < self.orders[pos] {
                for (c, &h) in self.cur.iter_mut().zip(row) {
                    *c = (*c + h) % self.m;
                }
                return true;
            }
            self.counters[pos] = 0;
            let back = (self.orders[pos] - 1) % self.m;
            for (c, &h) in self.cur.iter_mut().zip(row) {
                *c = (*c - back * h).rem_euclid(self.m);
            }
        }
        false
    }
}

/// Invariant factors of a finite abelian group, `m_1 | m_2 | ... | m_r`, all `>= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStructure {
    pub invariant_factors: Vec<i128>,
    pub order: i128,
}

impl GroupStructure {
    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.invariant_factors.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Structure of `D / Z^d`.
///
/// With `S = diag(s_i)` the Smith form of the Hermite basis `H` of `M·D`,
/// `D/Z^d ≅ M·D / M·Z^d ≅ ⊕ s_i Z / M Z`, so the factors are `M / s_i`.
pub fn group_structure(l: &SuperLattice) -> GroupStructure {
    let diag = smith_diagonal(&l.basis).expect("Smith form of a Hermite basis cannot overflow");
    let mut factors: Vec<i128> = diag.iter().map(|&s| l.denom / s).filter(|&f| f > 1).collect();
    factors.sort_unstable();
    let order = factors.iter().product();
    GroupStructure { invariant_factors: factors, order }
}

/// One representative per coset of `D/Z^d`, coordinates in `[0, 1)`.
///
/// Representatives are `Σ c_i h_i / M` over the Hermite basis rows `h_i`
/// that are nontrivial modulo `Z^d`, with `0 <= c_i < M / h_ii`. The
/// exponent tuple is enumerated with the first digit varying fastest, so the
/// zero vector always comes first and a cyclic lattice `Z^d + Z·g` yields
/// `k·g mod 1` for `k = 0, 1, ...` in order.
pub fn coset_representatives(l: &SuperLattice) -> Cosets {
    Cosets { walker: CosetWalker::new(l), finished: false }
}

pub struct Cosets {
    walker: CosetWalker,
    finished: bool,
}

impl Iterator for Cosets {
    type Item = FracVec;

    fn next(&mut self) -> Option<FracVec> {
        if self.finished {
            return None;
        }
        let out = FracVec { num: self.walker.cur.clone(), den: self.walker.m };
        self.finished = !self.walker.advance();
        Some(out)
    }
}

/// Whether the integer functional `y` takes integer values on `D`, i.e.
/// `y` lies in the dual lattice `D* ⊆ Z^d`.
pub fn dual_membership(l: &SuperLattice, y: &[i64]) -> bool {
    if y.len() != l.dim {
        return false;
    }
    (0..l.dim).all(|i| {
        let dot = l
            .basis
            .row(i)
            .iter()
            .zip(y)
            .try_fold(0i128, |acc, (&h, &yi)| arith::add(acc, arith::mul(h, yi as i128)?));
        match dot {
            Ok(d) => d % l.denom == 0,
            Err(_) => false,
        }
    })
}
