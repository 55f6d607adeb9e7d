//! Simplex representations, standard form, emptiness and canonical forms.
//!
//! A cyclic simplex in standard form is the unimodular-looking simplex
//! `conv(0, e1, e2, e3, e4)` sitting inside the finer lattice
//! `D = Z^4 + Z·(a1, a2, a3, a4)/N`. It is empty exactly when no nonzero
//! coset representative of `D/Z^4` lands in the closed simplex, i.e. when
//! every fractional vector `({k a1/N}, ..., {k a4/N})`, `0 < k < N`, has
//! coordinate sum strictly greater than one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::exactalg::{group_structure, FracVec, GroupStructure, IntMatrix, SuperLattice};

/// Largest accepted determinant of a cyclic spec. Keeps `k * a_i` inside `i64`.
pub const MAX_DET: i64 = 1 << 31;

/// Five vertices in `Z^4` spanning a full-dimensional simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneralSimplex {
    vertices: [[i64; 4]; 5],
}

impl GeneralSimplex {
    pub fn new(vertices: [[i64; 4]; 5]) -> Result<Self> {
        let s = GeneralSimplex { vertices };
        if s.signed_volume()? == 0 {
            return Err(Error::DegenerateSimplex);
        }
        Ok(s)
    }

    /// Parses five lines of four whitespace-separated integers. `#` starts a
    /// comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let coords = line
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: lineno + 1, msg: e.to_string() })?;
            let v: [i64; 4] = coords.try_into().map_err(|c: Vec<i64>| Error::Parse {
                line: lineno + 1,
                msg: format!("expected 4 coordinates, found {}", c.len()),
            })?;
            vertices.push(v);
        }
        let n = vertices.len();
        let vertices: [[i64; 4]; 5] = vertices.try_into().map_err(|_| Error::Parse {
            line: text.lines().count(),
            msg: format!("expected 5 vertices, found {n}"),
        })?;
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[[i64; 4]; 5] {
        &self.vertices
    }

    /// Rows `v_i - v_pivot` for `i != pivot`, in vertex order.
    pub fn edge_matrix(&self, pivot: usize) -> IntMatrix {
        let p = self.vertices[pivot];
        let rows: Vec<Vec<i128>> = (0..5)
            .filter(|&i| i != pivot)
            .map(|i| (0..4).map(|c| self.vertices[i][c] as i128 - p[c] as i128).collect())
            .collect();
        IntMatrix::from_rows(&rows).expect("four rows of length four")
    }

    fn signed_volume(&self) -> Result<i128> {
        self.edge_matrix(0).determinant()
    }

    /// Normalised volume `|det(v_i - v_0)|`.
    pub fn determinant(&self) -> i128 {
        self.signed_volume().expect("validated at construction").abs()
    }

    /// Image under `v ↦ v·U + shift`.
    pub fn transformed(&self, u: &IntMatrix, shift: [i64; 4]) -> Result<GeneralSimplex> {
        let mut out = [[0i64; 4]; 5];
        for (i, v) in self.vertices.iter().enumerate() {
            let img = u.left_mul_vec(&v.map(|x| x as i128))?;
            for c in 0..4 {
                out[i][c] = i64::try_from(img[c] + shift[c] as i128).map_err(|_| Error::Overflow("vertex coordinate"))?;
            }
        }
        GeneralSimplex::new(out)
    }
}

impl fmt::Display for GeneralSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "{} {} {} {}", v[0], v[1], v[2], v[3])?;
        }
        Ok(())
    }
}

/// Standard simplex in `Z^4 + Z·a/N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicSimplexSpec {
    det: i64,
    residues: [i64; 4],
}

impl CyclicSimplexSpec {
    /// Reduces the generator modulo `det`; rejects `gcd(a1..a4, N) != 1`.
    pub fn new(det: i64, generator: [i64; 4]) -> Result<Self> {
        if det < 1 {
            return Err(Error::InvalidSpec(format!("determinant must be positive, got {det}")));
        }
        if det > MAX_DET {
            return Err(Error::InvalidSpec(format!("determinant {det} exceeds {MAX_DET}")));
        }
        let residues = generator.map(|a| a.rem_euclid(det));
        let g = residues.iter().fold(det, |g, &a| arith::gcd_i64(g, a));
        if g != 1 {
            return Err(Error::InvalidSpec(format!(
                "gcd of generator {generator:?} and N = {det} is {g}, expected 1"
            )));
        }
        Ok(CyclicSimplexSpec { det, residues })
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn residues(&self) -> [i64; 4] {
        self.residues
    }

    /// Five-coordinate model: append `a5 = -(a1 + ... + a4) mod N`.
    pub fn extended(&self) -> [i64; 5] {
        let r = self.residues;
        let a5 = (-(r[0] + r[1] + r[2] + r[3])).rem_euclid(self.det);
        [r[0], r[1], r[2], r[3], a5]
    }

    /// Same simplex with the generator multiplied by the unit `u`.
    pub fn scaled(&self, u: i64) -> Result<Self> {
        Self::new(self.det, self.residues.map(|a| a * u.rem_euclid(self.det)))
    }

    pub fn lattice(&self) -> SuperLattice {
        SuperLattice::new(4, self.det as i128, &[self.residues.map(|a| a as i128)])
            .expect("valid spec gives a valid lattice")
    }

    /// Smallest `k` in `1..N` whose fractional point lies in the closed
    /// simplex, if any.
    pub fn first_violation(&self) -> Option<i64> {
        let n = self.det;
        let a = self.residues;
        let mut r = [0i64; 4];
        for k in 1..n {
            let mut sum = 0;
            for i in 0..4 {
                r[i] += a[i];
                if r[i] >= n {
                    r[i] -= n;
                }
                sum += r[i];
            }
            if sum <= n {
                return Some(k);
            }
        }
        None
    }

    /// A lattice simplex in `Z^4` equivalent to this spec.
    ///
    /// With `B = H/N` a basis of `D` (H the Hermite basis of `N·D`), the
    /// vertices `0, e1..e4` have integer coordinates `e_i B^{-1}`, the rows
    /// of `N·adj(H)/det(H)`.
    pub fn to_general_simplex(&self) -> GeneralSimplex {
        let l = self.lattice();
        let h = l.hermite_basis();
        let m = l.denominator();
        let det = h.determinant().expect("small Hermite basis");
        let adj = h.adjugate().expect("small Hermite basis");
        let mut vertices = [[0i64; 4]; 5];
        for i in 0..4 {
            for c in 0..4 {
                let x = adj.get(i, c) * m;
                debug_assert_eq!(x % det, 0);
                vertices[i + 1][c] = (x / det) as i64;
            }
        }
        GeneralSimplex::new(vertices).expect("basis change preserves full dimension")
    }
}

impl fmt::Display for CyclicSimplexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.residues;
        write!(f, "N={} a=({},{},{},{})", self.det, r[0], r[1], r[2], r[3])
    }
}

/// Result of converting a general simplex to standard form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardForm {
    Cyclic(CyclicSimplexSpec),
    /// `D/D'` is not cyclic; the lattice is expressed over `D' = Z^4`.
    NonCyclic { lattice: SuperLattice, group: GroupStructure },
}

impl StandardForm {
    pub fn cyclic(&self) -> Option<&CyclicSimplexSpec> {
        match self {
            StandardForm::Cyclic(s) => Some(s),
            StandardForm::NonCyclic { .. } => None,
        }
    }

    pub fn lattice(&self) -> SuperLattice {
        match self {
            StandardForm::Cyclic(s) => s.lattice(),
            StandardForm::NonCyclic { lattice, .. } => lattice.clone(),
        }
    }
}

/// Moves `pivot` to the origin and takes the four edge vectors as the basis
/// of `D'`. In those coordinates the original `Z^4` is spanned by the rows
/// of the inverse edge matrix, i.e. `adj(E)/det(E)`.
///
/// In the cyclic case the generator is the image of the first standard
/// basis vector whose coset has full order; if no single basis vector
/// generates, the first full-order coset in enumeration order is used.
pub fn to_standard_form(s: &GeneralSimplex, pivot: usize) -> Result<StandardForm> {
    if pivot > 4 {
        return Err(Error::InvalidArgument(format!("pivot {pivot} out of range 0..5")));
    }
    let e = s.edge_matrix(pivot);
    let det = e.determinant()?;
    if det == 0 {
        return Err(Error::DegenerateSimplex);
    }
    let m = det.abs();
    let adj = e.adjugate()?;
    let gens: Vec<Vec<i128>> = (0..4)
        .map(|i| adj.row(i).iter().map(|x| (x * det.signum()).rem_euclid(m)).collect())
        .collect();
    let lattice = SuperLattice::new(4, m, &gens)?;
    let group = group_structure(&lattice);
    if !group.is_cyclic() {
        return Ok(StandardForm::NonCyclic { lattice, group });
    }
    let n = group.order;
    if n == 1 {
        return Ok(StandardForm::Cyclic(CyclicSimplexSpec::new(1, [0; 4])?));
    }
    let order_of = |v: &[i128], den: i128| den / v.iter().fold(den, |g, &x| arith::gcd(g, x));
    let to_spec = |v: &[i128], den: i128| {
        let scale = den / n;
        let a: Vec<i64> = v.iter().map(|x| (x / scale).rem_euclid(n) as i64).collect();
        CyclicSimplexSpec::new(n as i64, [a[0], a[1], a[2], a[3]])
    };
    if let Some(g) = gens.iter().find(|g| order_of(g, m) == n) {
        return Ok(StandardForm::Cyclic(to_spec(g, m)?));
    }
    let mut found = None;
    lattice.visit_cosets(|v| {
        if order_of(v, lattice.denominator()) == n {
            found = Some(v.to_vec());
            false
        } else {
            true
        }
    });
    let g = found.expect("a cyclic group has a generator");
    Ok(StandardForm::Cyclic(to_spec(&g, lattice.denominator())?))
}

/// A lattice point of `D \ Z^4` in the closed standard simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Multiplier of the generator (cyclic path only).
    pub k: Option<i64>,
    pub point: FracVec,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "k={} point {}", k, self.point),
            None => write!(f, "point {}", self.point),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Emptiness {
    Empty,
    NotEmpty(Witness),
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Emptiness::Empty => None,
            Emptiness::NotEmpty(w) => Some(w),
        }
    }
}

/// Emptiness of the closed standard simplex in `Z^4 + Z·a/N`; the witness
/// is the smallest offending `k`.
pub fn is_empty(spec: &CyclicSimplexSpec) -> Emptiness {
    match spec.first_violation() {
        None => Emptiness::Empty,
        Some(k) => {
            let n = spec.det;
            let num = spec.residues.iter().map(|&a| ((k * a) % n) as i128).collect();
            Emptiness::NotEmpty(Witness { k: Some(k), point: FracVec::new(num, n as i128) })
        }
    }
}

/// Emptiness of the closed standard simplex of any dimension `d` inside an
/// arbitrary finite-index superlattice of `Z^d`, by scanning every coset.
/// The witness is the first offending coset in enumeration order.
pub fn is_empty_general(l: &SuperLattice) -> Emptiness {
    let m = l.denominator();
    let mut witness = None;
    let mut first = true;
    l.visit_cosets(|v| {
        if first {
            first = false;
            return true;
        }
        if v.iter().sum::<i128>() <= m {
            witness = Some(FracVec::new(v.to_vec(), m));
            return false;
        }
        true
    });
    match witness {
        None => Emptiness::Empty,
        Some(point) => Emptiness::NotEmpty(Witness { k: None, point }),
    }
}

/// Sorted five-tuple of residues, minimal over unit scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub det: i64,
    pub tuple: [i64; 5],
}

impl CanonicalForm {
    /// A spec representing this class (drop the fifth entry).
    pub fn to_spec(&self) -> CyclicSimplexSpec {
        let t = self.tuple;
        CyclicSimplexSpec::new(self.det, [t[0], t[1], t[2], t[3]]).expect("canonical tuples have unit content")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.tuple.iter().map(|x| x.to_string()).collect();
        write!(f, "N={} ({})", self.det, t.join(","))
    }
}

/// Canonical representative of the five-tuple `(a1, .., a4, a5)` under
/// unit scaling and permutation of the five entries.
pub fn canonical_form(spec: &CyclicSimplexSpec) -> CanonicalForm {
    canonical_tuple(spec.det, spec.extended())
}

pub(crate) fn canonical_tuple(n: i64, t: [i64; 5]) -> CanonicalForm {
    if n == 1 {
        return CanonicalForm { det: 1, tuple: [0; 5] };
    }
    let mut best: Option<[i64; 5]> = None;
    for u in 1..n {
        if arith::gcd_i64(u, n) != 1 {
            continue;
        }
        let mut v = t.map(|x| (x.rem_euclid(n) * u) % n);
        v.sort_unstable();
        if best.map_or(true, |b| v < b) {
            best = Some(v);
        }
    }
    CanonicalForm { det: n, tuple: best.expect("n > 1 has the unit 1") }
}

/// `Z^5 + Z·(1,-1,0,0,a)/p + Z·(0,0,1,-1,b)/p`: quotient `Z_p × Z_p`, yet the
/// standard 5-simplex stays empty.
pub fn dim5_counterexample(p: u64, a: i64, b: i64) -> Result<SuperLattice> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pi = p as i64;
    if a.rem_euclid(pi) == 0 || b.rem_euclid(pi) == 0 {
        return Err(Error::InvalidArgument(format!("p = {p} must divide neither a = {a} nor b = {b}")));
    }
    SuperLattice::new(
        5,
        p as i128,
        &[vec![1, -1, 0, 0, a as i128], vec![0, 0, 1, -1, b as i128]],
    )
}
