//! Stable quintuples, the families they generate and their width-2
//! certificates.
//!
//! A quintuple `q` (five integers summing to zero) together with a
//! projection index `j` and a denominator `n` gives the cyclic spec with
//! generator `k·q/n`, coordinate `j` omitted. Each quintuple carries linear
//! relations with coefficients in `{0, 1, 2}`; every relation turns into a
//! dual functional with vertex values in `{0,1,2}` or `{-1,0,1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::exactalg::{group_structure, SuperLattice};
use crate::fpdigits::{self, FpSubspace};
use crate::simplex::{is_empty, is_empty_general, CyclicSimplexSpec, Emptiness};
use crate::width::{functional_from_relation, width, WidthCertificate};

const TABLE: &str = include_str!("../data/stable_quintuples.txt");

/// Number of rows in the embedded table.
pub const TABLE_ROWS: usize = 29;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quintuple {
    /// 1-based row number in the embedded table, `None` for ad-hoc data.
    pub id: Option<usize>,
    pub entries: [i64; 5],
    pub relations: Vec<[i64; 5]>,
}

impl Quintuple {
    pub fn new(entries: [i64; 5], relations: Vec<[i64; 5]>) -> Self {
        Quintuple { id: None, entries, relations }
    }
}

impl fmt::Display for Quintuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.entries;
        write!(f, "({},{},{},{},{})", e[0], e[1], e[2], e[3], e[4])
    }
}

fn parse_ints<const N: usize>(s: &str, sep: impl Fn(char) -> bool, line: usize) -> Result<[i64; N]> {
    let v: Vec<i64> = s
        .split(sep)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|e| Error::Parse { line, msg: format!("{t:?}: {e}") }))
        .collect::<Result<_>>()?;
    let len = v.len();
    v.try_into().map_err(|_| Error::Parse { line, msg: format!("expected {N} integers, found {len}") })
}

/// Parses `a1 a2 a3 a4 a5 | r1,r2,r3,r4,r5 ; ...` lines; `#` starts a comment.
/// Rows are numbered from 1 in file order.
pub fn parse_table(text: &str) -> Result<Vec<Quintuple>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, tail) = line
            .split_once('|')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: "missing '|' separator".into() })?;
        let entries = parse_ints::<5>(head, char::is_whitespace, i + 1)?;
        let relations = tail
            .split(';')
            .map(|r| parse_ints::<5>(r, |c| c == ',', i + 1))
            .collect::<Result<Vec<_>>>()?;
        out.push(Quintuple { id: Some(out.len() + 1), entries, relations });
    }
    Ok(out)
}

/// Renders quintuples back into the table format.
pub fn format_table(rows: &[Quintuple]) -> String {
    let mut s = String::new();
    for q in rows {
        let e: Vec<String> = q.entries.iter().map(|x| x.to_string()).collect();
        let r: Vec<String> = q
            .relations
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        s.push_str(&format!("{} | {}\n", e.join(" "), r.join(" ; ")));
    }
    s
}

/// The embedded table, validated on first use.
pub fn load_table() -> &'static [Quintuple] {
    static ROWS: OnceLock<Vec<Quintuple>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let rows = parse_table(TABLE).expect("embedded quintuple table parses");
        assert_eq!(rows.len(), TABLE_ROWS, "embedded quintuple table has {} rows", rows.len());
        for q in &rows {
            let r = verify_quintuple(q);
            assert!(r.passed, "embedded quintuple {q} fails validation: {r:?}");
        }
        rows
    })
}

pub fn table_row(id: usize) -> Result<&'static Quintuple> {
    load_table()
        .get(id.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidArgument(format!("table row {id} not in 1..={TABLE_ROWS}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: [i64; 5],
    pub dot: i64,
    pub orthogonal: bool,
    pub coefficients_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuintupleReport {
    pub id: Option<usize>,
    pub entries: [i64; 5],
    pub sum: i64,
    pub relations: Vec<RelationCheck>,
    pub passed: bool,
}

pub fn verify_quintuple(q: &Quintuple) -> QuintupleReport {
    let sum = q.entries.iter().sum();
    let relations: Vec<RelationCheck> = q
        .relations
        .iter()
        .map(|r| {
            let dot = r.iter().zip(&q.entries).map(|(a, b)| a * b).sum();
            RelationCheck { relation: *r, dot, orthogonal: dot == 0, coefficients_ok: r.iter().all(|c| (0..=2).contains(c)) }
        })
        .collect();
    let passed = sum == 0 && !relations.is_empty() && relations.iter().all(|r| r.orthogonal && r.coefficients_ok);
    QuintupleReport { id: q.id, entries: q.entries, sum, relations, passed }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub quintuples: usize,
    pub relations: usize,
    pub failures: usize,
    pub rows: Vec<QuintupleReport>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.quintuples == TABLE_ROWS
    }
}

pub fn verify_table(rows: &[Quintuple]) -> TableReport {
    let reports: Vec<QuintupleReport> = rows.iter().map(verify_quintuple).collect();
    TableReport {
        quintuples: rows.len(),
        relations: rows.iter().map(|q| q.relations.len()).sum(),
        failures: reports.iter().filter(|r| !r.passed).count(),
        rows: reports,
    }
}

/// The two parametric families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParametricFamily {
    /// `(x, -x, y, z, -y-z)`
    I { x: i64, y: i64, z: i64 },
    /// `(x, -2x, y, -2y, x+y)`
    II { x: i64, y: i64 },
}

impl ParametricFamily {
    pub fn vector(&self) -> [i64; 5] {
        match *self {
            ParametricFamily::I { x, y, z } => [x, -x, y, z, -y - z],
            ParametricFamily::II { x, y } => [x, -2 * x, y, -2 * y, x + y],
        }
    }

    pub fn relations(&self) -> Vec<[i64; 5]> {
        match self {
            ParametricFamily::I { .. } => vec![[1, 1, 0, 0, 0]],
            ParametricFamily::II { .. } => vec![[2, 1, 0, 0, 0], [0, 0, 2, 1, 0]],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySource {
    Table { row: Option<usize>, k: i64 },
    Parametric(ParametricFamily),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub source: FamilySource,
    /// 1-based index of the omitted coordinate.
    pub projection: usize,
    pub denominator: i64,
    /// Unreduced five-coordinate vector (quintuple or parametric vector).
    pub vector: [i64; 5],
    pub relations: Vec<[i64; 5]>,
    pub spec: CyclicSimplexSpec,
}

pub fn project(v: &[i64; 5], j: usize) -> [i64; 4] {
    let mut out = [0; 4];
    for (slot, (_, &x)) in out.iter_mut().zip(v.iter().enumerate().filter(|&(i, _)| i != j - 1)) {
        *slot = x;
    }
    out
}

fn projected_spec(v: &[i64; 5], scale: i64, j: usize, n: i64) -> Result<CyclicSimplexSpec> {
    if !(1..=5).contains(&j) {
        return Err(Error::InvalidArgument(format!("projection index {j} not in 1..=5")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument(format!("denominator must be positive, got {n}")));
    }
    let gen = project(v, j).map(|x| (x as i128 * scale as i128).rem_euclid(n as i128) as i64);
    let g = gen.iter().fold(n, |g, &x| arith::gcd_i64(g, x));
    if g != 1 {
        return Err(Error::DegenerateInstance(format!(
            "projected generator {gen:?} has gcd {g} with n = {n}"
        )));
    }
    CyclicSimplexSpec::new(n, gen)
}

/// The spec generated by `k·q/n` with coordinate `j` omitted. Emptiness is
/// not implied; filter with [`is_empty`].
pub fn instantiate(q: &Quintuple, j: usize, k: i64, n: i64) -> Result<FamilyInstance> {
    if n >= 1 && arith::gcd_i64(k, n) != 1 {
        return Err(Error::InvalidArgument(format!("k = {k} and n = {n} are not coprime")));
    }
    let spec = projected_spec(&q.entries, k, j, n)?;
    Ok(FamilyInstance {
        source: FamilySource::Table { row: q.id, k },
        projection: j,
        denominator: n,
        vector: q.entries,
        relations: q.relations.clone(),
        spec,
    })
}

/// Parametric family member with integer parameters over the common
/// denominator `n`.
pub fn family_parametric(family: ParametricFamily, n: i64, j: usize) -> Result<FamilyInstance> {
    let vector = family.vector();
    let spec = projected_spec(&vector, 1, j, n)?;
    Ok(FamilyInstance {
        source: FamilySource::Parametric(family),
        projection: j,
        denominator: n,
        vector,
        relations: family.relations(),
        spec,
    })
}

/// Width certificate built from the first relation whose shifted form has
/// the smallest spread. Never claims optimality.
pub fn certify_instance(inst: &FamilyInstance) -> WidthCertificate {
    let best = inst
        .relations
        .iter()
        .map(|r| functional_from_relation(&inst.vector, r, inst.projection).expect("instance relations are valid"))
        .min_by_key(|f| f.spread)
        .expect("every source has at least one relation");
    let cert = WidthCertificate::standard(best.functional, false);
    debug_assert!(cert.validate(&inst.spec));
    cert
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n_max: i64,
    pub instances: u64,
    pub degenerate: u64,
    pub empty: u64,
    pub max_width: i64,
    /// Empty instances of optimal width above 2.
    pub width_violations: u64,
    /// Empty instances whose relation certificate is invalid, wider than 2,
    /// or narrower than the optimum.
    pub certificate_violations: u64,
    /// Denominators with at least one empty instance, per table row.
    pub admissible: BTreeMap<usize, Vec<i64>>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.width_violations == 0 && self.certificate_violations == 0
    }
}

/// Every table row × projection × `k ∈ units(n)` for `1 <= n <= n_max`;
/// empty instances must have width at most 2, bounded by their certificate.
pub fn sweep_table(n_max: i64) -> SweepReport {
    let rows = load_table();
    let jobs: Vec<(usize, i64)> = (0..rows.len()).flat_map(|r| (1..=n_max).map(move |n| (r, n))).collect();
    let partials: Vec<(usize, i64, u64, u64, u64, i64, u64, u64)> = jobs
        .par_iter()
        .map(|&(r, n)| {
            let q = &rows[r];
            let (mut inst_count, mut degenerate, mut empty, mut max_w, mut wv, mut cv) = (0, 0, 0, 0, 0, 0);
            for j in 1..=5 {
                for k in arith::units(n) {
                    inst_count += 1;
                    let Ok(inst) = instantiate(q, j, k, n) else {
                        degenerate += 1;
                        continue;
                    };
                    if !is_empty(&inst.spec).is_empty() {
                        continue;
                    }
                    empty += 1;
                    let w = width(&inst.spec);
                    let c = certify_instance(&inst);
                    max_w = max_w.max(w.width);
                    if w.width > 2 {
                        wv += 1;
                    }
                    if !c.validate(&inst.spec) || c.width > 2 || w.width > c.width {
                        cv += 1;
                    }
                }
            }
            (r, n, inst_count, degenerate, empty, max_w, wv, cv)
        })
        .collect();
    let mut report = SweepReport {
        n_max,
        instances: 0,
        degenerate: 0,
        empty: 0,
        max_width: 0,
        width_violations: 0,
        certificate_violations: 0,
        admissible: BTreeMap::new(),
    };
    for (r, n, i, d, e, w, wv, cv) in partials {
        report.instances += i;
        report.degenerate += d;
        report.empty += e;
        report.max_width = report.max_width.max(w);
        report.width_violations += wv;
        report.certificate_violations += cv;
        if e > 0 {
            report.admissible.entry(r + 1).or_default().push(n);
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoncyclicReport {
    pub prime: u64,
    pub planes: u64,
    pub expected_planes: u64,
    /// Planes whose lattice leaves the standard simplex empty (expected: none).
    pub empty_instances: u64,
    pub group_mismatches: u64,
    /// Non-emptiness witnesses that fail to scale to an integer point `A`
    /// with `A >= 0`, `ΣA <= p` and `A mod p` a nonzero element of the plane.
    pub witness_failures: u64,
    pub first_empty: Option<Vec<Vec<u64>>>,
}

impl NoncyclicReport {
    pub fn passed(&self) -> bool {
        self.planes == self.expected_planes
            && self.empty_instances == 0
            && self.group_mismatches == 0
            && self.witness_failures == 0
    }
}

/// For each plane `P ⊆ Z_p^4`, the lattice `Z^4 + (1/p)·P` has quotient
/// `Z_p × Z_p`; check that none of them leaves the standard simplex empty.
pub fn search_noncyclic_terminal(p: u64) -> Result<NoncyclicReport> {
    let planes = fpdigits::subspaces(p, 4, 2)?;
    let outcomes: Vec<(bool, bool, bool)> = planes
        .par_iter()
        .map(|plane| {
            let gens: Vec<Vec<i128>> = plane.basis().iter().map(|b| b.iter().map(|&x| x as i128).collect()).collect();
            let lattice = SuperLattice::new(4, p as i128, &gens).expect("valid generators");
            let group_ok = group_structure(&lattice).invariant_factors == vec![p as i128, p as i128];
            match is_empty_general(&lattice) {
                Emptiness::Empty => (true, group_ok, true),
                Emptiness::NotEmpty(w) => (false, group_ok, witness_ok(plane, &w.point.num, w.point.den, p)),
            }
        })
        .collect();
    let mut report = NoncyclicReport {
        prime: p,
        planes: planes.len() as u64,
        expected_planes: fpdigits::gaussian_binomial(p, 4, 2),
        empty_instances: 0,
        group_mismatches: 0,
        witness_failures: 0,
        first_empty: None,
    };
    for (plane, (empty, group_ok, witness_ok)) in planes.iter().zip(outcomes) {
        if empty {
            report.empty_instances += 1;
            report.first_empty.get_or_insert_with(|| plane.basis().to_vec());
        }
        report.group_mismatches += (!group_ok) as u64;
        report.witness_failures += (!witness_ok) as u64;
    }
    Ok(report)
}

fn witness_ok(plane: &FpSubspace, num: &[i128], den: i128, p: u64) -> bool {
    let p = p as i128;
    if num.iter().any(|x| (x * p) % den != 0) {
        return false;
    }
    let a: Vec<i128> = num.iter().map(|x| x * p / den).collect();
    let reduced: Vec<u64> = a.iter().map(|x| x.rem_euclid(p) as u64).collect();
    a.iter().all(|&x| x >= 0) && a.iter().sum::<i128>() <= p && reduced.iter().any(|&x| x != 0) && plane.contains(&reduced)
}

/// Compact family label used in survey output, e.g. `T1/j5/k1`,
/// `i/x1/y2/z3`, `ii/x1/y3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    Table { row: usize, j: usize, k: i64 },
    Parametric(ParametricFamily),
}

impl FamilyTag {
    /// Re-creates the family instance with denominator `n`.
    pub fn instantiate(&self, n: i64) -> Result<FamilyInstance> {
        match *self {
            FamilyTag::Table { row, j, k } => instantiate(table_row(row)?, j, k, n),
            FamilyTag::Parametric(f) => family_parametric(f, n, 5),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::Table { row, j, k } => write!(f, "T{row}/j{j}/k{k}"),
            FamilyTag::Parametric(ParametricFamily::I { x, y, z }) => write!(f, "i/x{x}/y{y}/z{z}"),
            FamilyTag::Parametric(ParametricFamily::II { x, y }) => write!(f, "ii/x{x}/y{y}"),
        }
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, msg: format!("bad family tag {s:?}") };
        let parts: Vec<&str> = s.split('/').collect();
        let field = |i: usize, prefix: &str| -> Result<i64> {
            parts.get(i).and_then(|p| p.strip_prefix(prefix)).and_then(|v| v.parse().ok()).ok_or_else(bad)
        };
        match parts.first() {
            Some(&"i") if parts.len() == 4 => Ok(FamilyTag::Parametric(ParametricFamily::I {
                x: field(1, "x")?,
                y: field(2, "y")?,
                z: field(3, "z")?,
            })),
            Some(&"ii") if parts.len() == 3 => {
                Ok(FamilyTag::Parametric(ParametricFamily::II { x: field(1, "x")?, y: field(2, "y")? }))
            }
            Some(t) if t.starts_with('T') && parts.len() == 3 => Ok(FamilyTag::Table {
                row: t[1..].parse().map_err(|_| bad())?,
                j: field(1, "j")? as usize,
                k: field(2, "k")?,
            }),
            _ => Err(bad()),
        }
    }
}
