use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use simplexlab::arith::primes_up_to;
use simplexlab::exactalg::SuperLattice;
use simplexlab::fpdigits::{verify_lemma1, verify_lemma2, verify_lemma3};
use simplexlab::mmm::{self, FamilyInstance, ParametricFamily};
use simplexlab::survey::{self, SurveyConfig};
use simplexlab::{
    canonical_form, dim5_counterexample, group_structure, is_empty, is_empty_general, width, width_general,
    Emptiness, StandardForm, WidthCertificate,
};

use crate::input::{int_list, IntList, Parsed, SimplexInput};
use crate::Outcome;

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Decide whether the simplex contains lattice points besides its vertices.
    Empty(SimplexInput),
    /// Exact lattice width with an optimal functional.
    Width(SimplexInput),
    /// Canonical 5-tuple of a cyclic simplex.
    Canon(SimplexInput),
    /// Invariant factors of the quotient group D/Z^d.
    Group(GroupArgs),
    /// Exhaustive digit-sum lemma checks over Z_p.
    FpScan(FpScanArgs),
    /// Stable quintuple table and the families built from it.
    #[command(subcommand)]
    Mmm(MmmCommand),
    /// Census of empty cyclic simplices up to a determinant bound.
    Survey(SurveyArgs),
    /// Non-cyclic empty simplex in dimension 5.
    Counterexample5(Counterexample5Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Empty(_) => "empty",
            Command::Width(_) => "width",
            Command::Canon(_) => "canon",
            Command::Group(_) => "group",
            Command::FpScan(_) => "fp-scan",
            Command::Mmm(m) => match m {
                MmmCommand::Verify => "mmm verify",
                MmmCommand::Gen(_) => "mmm gen",
                MmmCommand::Certify(_) => "mmm certify",
                MmmCommand::Sweep { .. } => "mmm sweep",
                MmmCommand::Noncyclic { .. } => "mmm noncyclic",
            },
            Command::Survey(_) => "survey",
            Command::Counterexample5(_) => "counterexample5",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct GroupArgs {
    #[command(flatten)]
    pub simplex: SimplexInput,
    /// Denominator M of an explicit lattice Z^d + Σ Z·v/M (use with --lattice-gen).
    #[arg(long, conflicts_with_all = ["det", "vertices"])]
    pub denom: Option<i64>,
    /// Integer numerator vector of a generator; repeatable.
    #[arg(long = "lattice-gen", value_parser = int_list, allow_hyphen_values = true, requires = "denom")]
    pub lattice_gen: Vec<IntList>,
}

#[derive(Args, Debug, Serialize)]
pub struct FpScanArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub lemma: u8,
    /// Largest prime to scan.
    #[arg(long)]
    pub pmax: u64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum MmmCommand {
    /// Check sums and relations of all table rows.
    Verify,
    /// Build one family instance and test it for emptiness.
    Gen(InstanceArgs),
    /// Relation-derived width certificate for one instance.
    Certify(InstanceArgs),
    /// Every row × projection × unit k for n <= nmax.
    Sweep {
        #[arg(long, default_value_t = 60)]
        nmax: i64,
    },
    /// Search Z_p × Z_p superlattices of Z^4 for empty standard simplices.
    Noncyclic {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
pub enum FamilyArg {
    I,
    Ii,
}

#[derive(Args, Debug, Serialize)]
pub struct InstanceArgs {
    /// Table row (1-based).
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub row: Option<usize>,
    /// Parametric family instead of a table row.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub n: i64,
    /// Projection index (omitted coordinate).
    #[arg(long, default_value_t = 5)]
    pub j: usize,
    /// Multiplier for table rows.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<i64>,
}

impl InstanceArgs {
    fn instance(&self) -> Result<FamilyInstance> {
        if let Some(row) = self.row {
            return Ok(mmm::instantiate(mmm::table_row(row)?, self.j, self.k, self.n)?);
        }
        let need = |v: Option<i64>, name: &str| v.ok_or_else(|| anyhow::anyhow!("family needs --{name}"));
        let family = match self.family.expect("clap enforces row or family") {
            FamilyArg::I => ParametricFamily::I { x: need(self.x, "x")?, y: need(self.y, "y")?, z: need(self.z, "z")? },
            FamilyArg::Ii => ParametricFamily::II { x: need(self.x, "x")?, y: need(self.y, "y")? },
        };
        Ok(mmm::family_parametric(family, self.n, self.j)?)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct SurveyArgs {
    #[arg(long)]
    pub max_det: i64,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON summary path (default: OUT with extension .summary.json).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Continue from the determinant recorded in an existing summary.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct Counterexample5Args {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Empty(s) => cmd_empty(s),
        Command::Width(s) => cmd_width(s),
        Command::Canon(s) => cmd_canon(s),
        Command::Group(g) => cmd_group(g),
        Command::FpScan(a) => cmd_fp_scan(a),
        Command::Mmm(m) => cmd_mmm(m),
        Command::Survey(a) => cmd_survey(a),
        Command::Counterexample5(a) => cmd_counterexample5(a),
    }
}

fn tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn cmd_empty(input: &SimplexInput) -> Result<Outcome> {
    let verdict = match input.standard_form()? {
        StandardForm::Cyclic(spec) => is_empty(&spec),
        StandardForm::NonCyclic { lattice, .. } => is_empty_general(&lattice),
    };
    let line = match &verdict {
        Emptiness::Empty => "empty".to_string(),
        Emptiness::NotEmpty(w) => format!("not empty; witness {w}"),
    };
    Ok(Outcome { lines: vec![line], result: serde_json::to_value(&verdict)?, ok: verdict.is_empty() })
}

fn cert_lines(c: &WidthCertificate) -> Vec<String> {
    vec![
        format!("width {}", c.width),
        format!("functional {}", tuple(&c.functional)),
        format!("vertex values {}", tuple(&c.vertex_values)),
    ]
}

fn cmd_width(input: &SimplexInput) -> Result<Outcome> {
    let cert = match input.parse()? {
        Parsed::Spec(spec) => width(&spec),
        Parsed::Vertices(s) => width_general(&s)?,
    };
    Ok(Outcome { lines: cert_lines(&cert), result: serde_json::to_value(&cert)?, ok: true })
}

fn cmd_canon(input: &SimplexInput) -> Result<Outcome> {
    let StandardForm::Cyclic(spec) = input.standard_form()? else {
        bail!("the quotient group is not cyclic; no canonical 5-tuple");
    };
    let c = canonical_form(&spec);
    Ok(Outcome {
        lines: vec![format!("spec {spec}"), format!("canonical {c}")],
        result: json!({ "spec": spec, "canonical": c }),
        ok: true,
    })
}

fn lattice_json(l: &SuperLattice) -> Value {
    let g = group_structure(l);
    json!({
        "dim": l.dim(),
        "denominator": l.denominator() as i64,
        "hermite_basis": l.hermite_basis().to_rows().iter().map(|r| r.iter().map(|&x| x as i64).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "invariant_factors": g.invariant_factors.iter().map(|&x| x as i64).collect::<Vec<_>>(),
        "order": g.order as i64,
        "cyclic": g.is_cyclic(),
    })
}

fn cmd_group(args: &GroupArgs) -> Result<Outcome> {
    let lattice = match args.denom {
        Some(m) => {
            if args.lattice_gen.is_empty() {
                bail!("--denom needs at least one --lattice-gen");
            }
            let dim = args.lattice_gen[0].0.len();
            if args.lattice_gen.iter().any(|g| g.0.len() != dim) {
                bail!("all --lattice-gen vectors must have the same length");
            }
            let gens: Vec<Vec<i128>> = args.lattice_gen.iter().map(|g| g.0.iter().map(|&x| x as i128).collect()).collect();
            SuperLattice::new(dim, m as i128, &gens)?
        }
        None => args.simplex.standard_form()?.lattice(),
    };
    let g = group_structure(&lattice);
    let kind = if g.is_cyclic() { "cyclic" } else { "non-cyclic" };
    Ok(Outcome {
        lines: vec![format!("group {g} order {} {kind}", g.order)],
        result: lattice_json(&lattice),
        ok: true,
    })
}

fn cmd_fp_scan(args: &FpScanArgs) -> Result<Outcome> {
    let primes: Vec<u64> = primes_up_to(args.pmax).into_iter().filter(|&p| args.lemma != 2 || p != 2).collect();
    if primes.is_empty() {
        bail!("no admissible primes up to {}", args.pmax);
    }
    let verify = match args.lemma {
        1 => verify_lemma1,
        2 => verify_lemma2,
        _ => verify_lemma3,
    };
    let reports = primes.iter().map(|&p| verify(p)).collect::<simplexlab::Result<Vec<_>>>()?;
    let what = if args.lemma == 3 { "planes" } else { "lines" };
    let mut lines: Vec<String> = reports
        .iter()
        .map(|r| format!("p={}: {} {what}, max m {}, failures {}", r.prime, r.subspaces_checked, r.max_m, r.failures))
        .collect();
    let counts: Vec<String> = reports.iter().map(|r| r.subspaces_checked.to_string()).collect();
    let failures: u64 = reports.iter().map(|r| r.failures).sum();
    lines.push(format!("{what} checked: {}, failures: {failures}", counts.join("+")));
    let ok = reports.iter().all(|r| r.passed());
    Ok(Outcome { lines, result: json!({ "lemma": args.lemma, "reports": reports, "passed": ok }), ok })
}

fn instance_json(inst: &FamilyInstance) -> Value {
    json!({
        "source": inst.source,
        "projection": inst.projection,
        "denominator": inst.denominator,
        "vector": inst.vector,
        "spec": inst.spec,
    })
}

fn cmd_mmm(cmd: &MmmCommand) -> Result<Outcome> {
    match cmd {
        MmmCommand::Verify => {
            let r = mmm::verify_table(mmm::load_table());
            let mut lines = vec![if r.passed() {
                format!("{} quintuples, all relations orthogonal", r.quintuples)
            } else {
                format!("{} quintuples, {} failing", r.quintuples, r.failures)
            }];
            for row in r.rows.iter().filter(|row| !row.passed) {
                lines.push(format!("row {:?} {} fails: sum {}", row.id, tuple(&row.entries), row.sum));
            }
            Ok(Outcome { lines, ok: r.passed(), result: serde_json::to_value(&r)? })
        }
        MmmCommand::Gen(args) => {
            let inst = args.instance()?;
            let e = is_empty(&inst.spec);
            let status = match &e {
                Emptiness::Empty => "empty".to_string(),
                Emptiness::NotEmpty(w) => format!("not empty; witness {w}"),
            };
            Ok(Outcome {
                lines: vec![format!("spec {}", inst.spec), format!("canonical {}", canonical_form(&inst.spec)), status],
                result: json!({ "instance": instance_json(&inst), "emptiness": e }),
                ok: true,
            })
        }
        MmmCommand::Certify(args) => {
            let inst = args.instance()?;
            let cert = mmm::certify_instance(&inst);
            let best = width(&inst.spec);
            let empty = is_empty(&inst.spec).is_empty();
            let ok = cert.validate(&inst.spec) && cert.width <= 2 && best.width <= cert.width;
            let mut lines = vec![format!("spec {}", inst.spec), format!("empty {empty}")];
            lines.extend(cert_lines(&cert));
            lines.push(format!("optimal width {}", best.width));
            Ok(Outcome {
                lines,
                result: json!({ "instance": instance_json(&inst), "empty": empty, "certificate": cert, "optimal": best }),
                ok,
            })
        }
        MmmCommand::Sweep { nmax } => {
            let r = mmm::sweep_table(*nmax);
            let lines = vec![
                format!("n <= {}: {} instances, {} degenerate, {} empty", r.n_max, r.instances, r.degenerate, r.empty),
                format!("max width {}, width violations {}, certificate violations {}", r.max_width, r.width_violations, r.certificate_violations),
            ];
            Ok(Outcome { lines, ok: r.passed(), result: serde_json::to_value(&r)? })
        }
        MmmCommand::Noncyclic { p } => {
            let r = mmm::search_noncyclic_terminal(*p)?;
            let lines = vec![format!(
                "p={}: {} planes (expected {}), empty {}, group mismatches {}, witness failures {}",
                r.prime, r.planes, r.expected_planes, r.empty_instances, r.group_mismatches, r.witness_failures
            )];
            Ok(Outcome { lines, ok: r.passed(), result: serde_json::to_value(&r)? })
        }
    }
}

fn cmd_survey(args: &SurveyArgs) -> Result<Outcome> {
    let cfg = SurveyConfig {
        jobs: args.jobs,
        summary: args.summary.clone(),
        resume: args.resume,
        ..SurveyConfig::new(args.max_det, &args.out)
    };
    let s = survey::survey(&cfg)?;
    let mut lines: Vec<String> = s
        .per_det
        .iter()
        .map(|d| {
            let h: Vec<String> = d.histogram.iter().map(|(w, c)| format!("w{w}:{c}")).collect();
            format!("N={}: {} classes [{}]", d.n, d.classes, h.join(" "))
        })
        .collect();
    let h: Vec<String> = s.histogram.iter().map(|(w, c)| format!("w{w}:{c}")).collect();
    lines.push(format!("total {} classes [{}]", s.total_classes, h.join(" ")));
    for r in &s.exceptions {
        lines.push(format!("width >= 3: {r}"));
    }
    if s.partial {
        lines.push(format!(
            "partial: stopped at N={} (budget {}, set SIMPLEXLAB_MAX_DET to raise)",
            s.completed_through, s.budget
        ));
    }
    Ok(Outcome { lines, ok: !s.partial, result: serde_json::to_value(&s)? })
}

fn cmd_counterexample5(args: &Counterexample5Args) -> Result<Outcome> {
    let l = dim5_counterexample(args.p, args.a, args.b)?;
    let g = group_structure(&l);
    let e = is_empty_general(&l);
    let line = format!(
        "group {g} {}; simplex {}",
        if g.is_cyclic() { "cyclic" } else { "non-cyclic" },
        if e.is_empty() { "empty" } else { "not empty" }
    );
    let ok = !g.is_cyclic() && e.is_empty();
    let mut result = lattice_json(&l);
    result["emptiness"] = serde_json::to_value(&e)?;
    Ok(Outcome { lines: vec![line], result, ok })
}
