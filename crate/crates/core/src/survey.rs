//! Determinant-bounded census of empty cyclic 4-simplices.
//!
//! Classes are keyed by [`CanonicalForm`]. A class is a multiset of five
//! residues summing to 0 mod N, so scanning sorted generators
//! `a1 <= a2 <= a3 <= a4 <= a5` (with `a5 = -Σa mod N`) meets every class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::mmm::{self, FamilyTag, ParametricFamily};
use crate::simplex::{canonical_form, canonical_tuple, is_empty, CanonicalForm, CyclicSimplexSpec};
use crate::width::{width, WidthCertificate};

/// Budget used when neither the caller nor `SIMPLEXLAB_MAX_DET` sets one.
pub const DEFAULT_MAX_DET: i64 = 150;

pub const CSV_HEADER: [&str; 12] = ["N", "a1", "a2", "a3", "a4", "a5", "width", "y1", "y2", "y3", "y4", "family"];

/// The determinant budget: `SIMPLEXLAB_MAX_DET` if set and valid, otherwise
/// [`DEFAULT_MAX_DET`].
pub fn budget_from_env() -> i64 {
    std::env::var("SIMPLEXLAB_MAX_DET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &i64| v >= 1)
        .unwrap_or(DEFAULT_MAX_DET)
}

/// All canonical classes of empty specs with determinant exactly `n`, sorted.
pub fn enumerate_empty(n: i64) -> Vec<CanonicalForm> {
    if n < 1 {
        return Vec::new();
    }
    if n == 1 {
        return vec![canonical_tuple(1, [0; 5])];
    }
    let found: BTreeSet<CanonicalForm> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a1| {
            let mut local = BTreeSet::new();
            for a2 in a1..n {
                let g2 = arith::gcd_i64(arith::gcd_i64(n, a1), a2);
                for a3 in a2..n {
                    let g3 = arith::gcd_i64(g2, a3);
                    for a4 in a3..n {
                        let a5 = (-(a1 + a2 + a3 + a4)).rem_euclid(n);
                        if a5 < a4 || arith::gcd_i64(g3, a4) != 1 {
                            continue;
                        }
                        let spec = CyclicSimplexSpec::new(n, [a1, a2, a3, a4]).expect("coprime generator");
                        if spec.first_violation().is_none() {
                            local.insert(canonical_form(&spec));
                        }
                    }
                }
            }
            local
        })
        .collect();
    found.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub canonical: CanonicalForm,
    pub width: i64,
    pub functional: [i64; 4],
    pub family: Option<FamilyTag>,
}

impl SurveyRecord {
    pub fn det(&self) -> i64 {
        self.canonical.det
    }

    /// Certificate of the canonical spec (generator = first four entries).
    pub fn certificate(&self) -> WidthCertificate {
        WidthCertificate::standard(self.functional, true)
    }

    fn csv_row(&self) -> Vec<String> {
        let mut row = vec![self.canonical.det.to_string()];
        row.extend(self.canonical.tuple.iter().map(|x| x.to_string()));
        row.push(self.width.to_string());
        row.extend(self.functional.iter().map(|x| x.to_string()));
        row.push(self.family.map(|f| f.to_string()).unwrap_or_default());
        row
    }

    fn from_csv_row(row: &csv::StringRecord, line: usize) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line, msg };
        if row.len() != CSV_HEADER.len() {
            return Err(bad(format!("expected {} columns, found {}", CSV_HEADER.len(), row.len())));
        }
        let int = |i: usize| row[i].trim().parse::<i64>().map_err(|e| bad(format!("column {}: {e}", CSV_HEADER[i])));
        let family = match row[11].trim() {
            "" => None,
            s => Some(s.parse()?),
        };
        Ok(SurveyRecord {
            canonical: CanonicalForm { det: int(0)?, tuple: [int(1)?, int(2)?, int(3)?, int(4)?, int(5)?] },
            width: int(6)?,
            functional: [int(7)?, int(8)?, int(9)?, int(10)?],
            family,
        })
    }
}

impl fmt::Display for SurveyRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} width {} functional {:?}", self.canonical, self.width, self.functional)?;
        if let Some(fam) = &self.family {
            write!(f, " family {fam}")?;
        }
        Ok(())
    }
}

/// Canonical forms of the table families at denominator `n`, first row wins.
/// Every projection and every unit `k` of a row share one canonical form,
/// so `j = 5, k = 1` stands for the whole row.
pub fn table_index(n: i64) -> BTreeMap<CanonicalForm, FamilyTag> {
    let mut index = BTreeMap::new();
    for q in mmm::load_table() {
        if let Ok(inst) = mmm::instantiate(q, 5, 1, n) {
            let tag = FamilyTag::Table { row: q.id.expect("table rows carry ids"), j: 5, k: 1 };
            index.entry(canonical_form(&inst.spec)).or_insert(tag);
        }
    }
    index
}

/// Parameters of family (i) or (ii) reproducing the residue multiset `t`.
pub fn match_parametric(n: i64, t: &[i64; 5]) -> Option<ParametricFamily> {
    let r = t.map(|x| x.rem_euclid(n));
    let m = |x: i64| x.rem_euclid(n);
    for a in 0..5 {
        for b in a + 1..5 {
            if m(r[a] + r[b]) == 0 {
                let rest: Vec<i64> = (0..5).filter(|&i| i != a && i != b).map(|i| r[i]).collect();
                return Some(ParametricFamily::I { x: r[a], y: rest[0], z: rest[1] });
            }
        }
    }
    for a in 0..5 {
        for b in 0..5 {
            if a == b {
                continue;
            }
            let (x, y) = (r[a], r[b]);
            let mut want = [m(-2 * x), m(-2 * y), m(x + y)];
            let mut have: Vec<i64> = (0..5).filter(|&i| i != a && i != b).map(|i| r[i]).collect();
            want.sort_unstable();
            have.sort_unstable();
            if have == want {
                return Some(ParametricFamily::II { x, y });
            }
        }
    }
    None
}

fn family_of(index: &BTreeMap<CanonicalForm, FamilyTag>, c: &CanonicalForm) -> Option<FamilyTag> {
    index
        .get(c)
        .copied()
        .or_else(|| match_parametric(c.det, &c.tuple).map(FamilyTag::Parametric))
}

/// Records for every empty class with determinant `n`.
pub fn survey_records(n: i64) -> Vec<SurveyRecord> {
    let index = table_index(n);
    enumerate_empty(n)
        .into_par_iter()
        .map(|c| {
            let cert = width(&c.to_spec());
            SurveyRecord { family: family_of(&index, &c), canonical: c, width: cert.width, functional: cert.functional }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetSummary {
    pub n: i64,
    pub classes: usize,
    pub matched: usize,
    pub histogram: BTreeMap<i64, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub n_max: i64,
    pub budget: i64,
    pub completed_through: i64,
    /// Set when the requested range exceeded the budget.
    pub partial: bool,
    pub total_classes: usize,
    pub histogram: BTreeMap<i64, usize>,
    pub per_det: Vec<DetSummary>,
    /// Classes of width 3 or more.
    pub exceptions: Vec<SurveyRecord>,
    pub runtime_ms: u128,
}

impl SurveySummary {
    pub fn from_records(records: &[SurveyRecord], n_max: i64, budget: i64, completed_through: i64) -> Self {
        let mut per: BTreeMap<i64, DetSummary> = (1..=completed_through)
            .map(|n| (n, DetSummary { n, classes: 0, matched: 0, histogram: BTreeMap::new() }))
            .collect();
        let mut histogram = BTreeMap::new();
        for r in records {
            let d = per.entry(r.det()).or_insert_with(|| DetSummary { n: r.det(), classes: 0, matched: 0, histogram: BTreeMap::new() });
            d.classes += 1;
            d.matched += r.family.is_some() as usize;
            *d.histogram.entry(r.width).or_default() += 1;
            *histogram.entry(r.width).or_default() += 1;
        }
        SurveySummary {
            n_max,
            budget,
            completed_through,
            partial: completed_through < n_max,
            total_classes: records.len(),
            histogram,
            per_det: per.into_values().collect(),
            exceptions: records.iter().filter(|r| r.width >= 3).cloned().collect(),
            runtime_ms: 0,
        }
    }

    pub fn det(&self, n: i64) -> Option<&DetSummary> {
        self.per_det.iter().find(|d| d.n == n)
    }
}

#[derive(Clone, Debug)]
pub struct SurveyConfig {
    pub n_max: i64,
    pub budget: i64,
    pub jobs: Option<usize>,
    pub out: PathBuf,
    /// Defaults to the CSV path with a `.summary.json` extension.
    pub summary: Option<PathBuf>,
    pub resume: bool,
}

impl SurveyConfig {
    pub fn new(n_max: i64, out: impl Into<PathBuf>) -> Self {
        SurveyConfig { n_max, budget: budget_from_env(), jobs: None, out: out.into(), summary: None, resume: false }
    }

    pub fn summary_path(&self) -> PathBuf {
        self.summary.clone().unwrap_or_else(|| self.out.with_extension("summary.json"))
    }
}

pub fn read_records(path: &Path) -> Result<Vec<SurveyRecord>> {
    let mut rd = csv::Reader::from_path(path)?;
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse { line: 1, msg: format!("unexpected header {header:?}") });
    }
    rd.records()
        .enumerate()
        .map(|(i, row)| SurveyRecord::from_csv_row(&row?, i + 2))
        .collect()
}

fn write_records(path: &Path, records: &[SurveyRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

fn append_records(path: &Path, records: &[SurveyRecord]) -> Result<()> {
    let file = fs::OpenOptions::new().append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

fn write_summary(path: &Path, s: &SurveySummary) -> Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, s).map_err(|e| Error::Io(e.to_string()))?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Runs the census for `1..=min(n_max, budget)`, writing the CSV and the
/// JSON summary after every determinant so an interrupted run can resume.
/// Output is sorted by `(N, tuple)` and independent of the thread count.
pub fn survey(config: &SurveyConfig) -> Result<SurveySummary> {
    if config.n_max < 1 {
        return Err(Error::InvalidArgument(format!("max determinant must be positive, got {}", config.n_max)));
    }
    match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| run_survey(config)),
        None => run_survey(config),
    }
}

fn run_survey(config: &SurveyConfig) -> Result<SurveySummary> {
    let start = Instant::now();
    let summary_path = config.summary_path();
    let target = config.n_max.min(config.budget);

    let (mut records, mut done) = (Vec::new(), 0);
    if config.resume && config.out.exists() && summary_path.exists() {
        let prev: SurveySummary = serde_json::from_str(&fs::read_to_string(&summary_path)?)
            .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        done = prev.completed_through.min(target);
        records = read_records(&config.out)?;
        records.retain(|r| r.det() <= done);
    }
    write_records(&config.out, &records)?;

    for n in done + 1..=target {
        let batch = survey_records(n);
        append_records(&config.out, &batch)?;
        records.extend(batch);
        let mut s = SurveySummary::from_records(&records, config.n_max, config.budget, n);
        s.runtime_ms = start.elapsed().as_millis();
        write_summary(&summary_path, &s)?;
    }
    let mut s = SurveySummary::from_records(&records, config.n_max, config.budget, target);
    s.runtime_ms = start.elapsed().as_millis();
    write_summary(&summary_path, &s)?;
    Ok(s)
}

/// Checks a record independently: the canonical spec is empty, its tuple is
/// canonical, the certificate is dual, and a matched family reproduces the
/// same class.
pub fn check_record(r: &SurveyRecord) -> bool {
    let spec = r.canonical.to_spec();
    let family_ok = match r.family {
        None => true,
        Some(tag) => tag.instantiate(r.det()).map(|i| canonical_form(&i.spec) == r.canonical).unwrap_or(false),
    };
    is_empty(&spec).is_empty()
        && canonical_form(&spec) == r.canonical
        && r.certificate().validate(&spec)
        && r.certificate().width == r.width
        && family_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(enumerate_empty(1), vec![CanonicalForm { det: 1, tuple: [0; 5] }]);
        let two = enumerate_empty(2);
        let c = canonical_form(&CyclicSimplexSpec::new(2, [1, 1, 1, 1]).unwrap());
        assert!(two.contains(&c));
        let five = enumerate_empty(5);
        assert!(five.contains(&CanonicalForm { det: 5, tuple: [0, 1, 2, 3, 4] }));
        let r = survey_records(1);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].width, 1);
    }

    /// Scans every generator in `[0, N)^4` without symmetry reduction.
    fn brute_classes(n: i64) -> Vec<CanonicalForm> {
        let mut out = BTreeSet::new();
        for a in 0..n.pow(4) {
            let g = [a % n, a / n % n, a / n / n % n, a / n / n / n];
            if g.iter().fold(n, |x, &y| arith::gcd_i64(x, y)) != 1 {
                continue;
            }
            let spec = CyclicSimplexSpec::new(n, g).unwrap();
            if is_empty(&spec).is_empty() {
                out.insert(canonical_form(&spec));
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn enumeration_matches_full_scan() {
        for n in 1..=16 {
            assert_eq!(enumerate_empty(n), brute_classes(n), "N = {n}");
        }
    }

    #[test]
    fn records_check_out() {
        for n in 1..=24 {
            for r in survey_records(n) {
                assert!(check_record(&r), "{r}");
                assert!(r.width <= 2, "{r}");
            }
        }
    }

    #[test]
    fn unit_multiples_collapse() {
        for n in [11i64, 13, 17] {
            for c in enumerate_empty(n) {
                let spec = c.to_spec();
                for u in arith::units(n) {
                    assert_eq!(canonical_form(&spec.scaled(u).unwrap()), c);
                }
            }
        }
    }

    #[test]
    fn parametric_matching() {
        let i = match_parametric(7, &[1, 6, 2, 3, 2]).unwrap();
        assert_eq!(i, ParametricFamily::I { x: 1, y: 2, z: 3 });
        let ii = match_parametric(7, &[1, 5, 3, 1, 4]);
        assert!(matches!(ii, Some(ParametricFamily::II { .. }) | Some(ParametricFamily::I { .. })));
        assert_eq!(match_parametric(11, &[1, 1, 1, 1, 7]), None);
        assert!(matches!(match_parametric(11, &[1, 3, 4, 5, 9]), Some(ParametricFamily::II { x: 1, y: 3 })));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.csv");
        let cfg = SurveyConfig { budget: 100, ..SurveyConfig::new(12, &out) };
        let s = survey(&cfg).unwrap();
        assert!(!s.partial);
        let back = read_records(&out).unwrap();
        let direct: Vec<SurveyRecord> = (1..=12).flat_map(survey_records).collect();
        assert_eq!(back, direct);
        assert_eq!(s.total_classes, direct.len());
    }

    #[test]
    fn budget_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.csv");
        let s = survey(&SurveyConfig { budget: 8, ..SurveyConfig::new(14, &out) }).unwrap();
        assert!(s.partial);
        assert_eq!(s.completed_through, 8);
        let s = survey(&SurveyConfig { budget: 100, resume: true, ..SurveyConfig::new(14, &out) }).unwrap();
        assert!(!s.partial);
        let fresh = dir.path().join("f.csv");
        let f = survey(&SurveyConfig { budget: 100, jobs: Some(1), ..SurveyConfig::new(14, &fresh) }).unwrap();
        assert_eq!(fs::read(&out).unwrap(), fs::read(&fresh).unwrap());
        assert_eq!(s.histogram, f.histogram);
    }
}
