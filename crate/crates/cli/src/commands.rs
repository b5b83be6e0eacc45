use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Subcommand};
use fq_minors::formulas::{self, BoundReport, ExactProb};
use fq_minors::matrix::incidence_matrix;
use fq_minors::matroid::{complete_bipartite, complete_graph};
use fq_minors::minor::{has_excluded_minor, ClassReport, HostRef, MinorOutcome, SearchLimits};
use fq_minors::sampler::{sample_matrix, Event, SeedSpec};
use fq_minors::sweep::{non_graphic_rows_condition, to_csv, MRule, NRange, SweepRow, SweepSpec, SweepTarget};
use fq_minors::validate::{run_validation, FormulaSet, ValidateConfig};
use fq_minors::{Field, FqMatrix, Matroid};
use serde_json::{json, Value};

use crate::Global;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    /// A check failed; carries the full report to print.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failed(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn field(q: u32) -> Result<Field, CliError> {
    Field::new(q).map_err(usage)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))
}

/// A matroid given as a catalog name (optionally prefixed `name:`) or as a
/// path to a matroid file.
pub fn load_matroid(spec: &str) -> Result<Matroid, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        return Matroid::parse(&read_file(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())));
    }
    Matroid::catalog(spec).map_err(usage)
}

fn load_matrix(path: &Path) -> Result<FqMatrix, CliError> {
    FqMatrix::parse(&read_file(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn prob_value(p: &ExactProb) -> Value {
    json!({ "num": p.numer().to_string(), "den": p.denom().to_string(), "float": p.to_f64() })
}

fn prob_text(p: &ExactProb) -> String {
    format!("{p} ({})", fq_minors::sweep::format_g12(p.to_f64()))
}

#[derive(Args, Debug)]
pub struct Dims {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct TargetDims {
    #[command(flatten)]
    pub dims: Dims,
    /// Catalog name (U:k,n, free:n, loops:n, F7, F7*, MK4, MK5, MK5*, MK33, MK33*) or matroid file.
    #[arg(long)]
    pub target: String,
}

#[derive(Subcommand, Debug)]
pub enum FormulaCmd {
    /// Gaussian binomial [n k]_q.
    Gaussian {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u32,
    },
    /// Number of m x n matrices of rank k.
    RankCount {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        k: usize,
    },
    /// Probability that the free matroid of rank r is a minor.
    FreeProb {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        r: usize,
    },
    /// Probability of full column rank (m >= n).
    ColrankProb(Dims),
    /// Upper bound for any non-free minor (m >= n).
    Upper(Dims),
    /// Lower bound for a non-free minor, maximised over k.
    Lower(TargetDims),
    /// Lower bound from disjoint column blocks.
    BlockLower(TargetDims),
    /// Limiting lower bound for a non-free minor.
    Liminf {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        target: String,
    },
    /// The constant prod (1 - q^-k) and its closed lower bound.
    Cq {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Per-block probability p_{s,q,M}.
    Psmq {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        target: String,
    },
    /// Lower bound on the number of m x |E| representations.
    Repcount {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        target: String,
    },
}

enum FormulaValue {
    Integer(String),
    Prob(ExactProb),
    Report(BoundReport),
}

pub fn formula(g: &Global, cmd: FormulaCmd) -> Result<String, CliError> {
    let stats = |t: &str| load_matroid(t).map(|m| m.stats());
    let value = match cmd {
        FormulaCmd::Gaussian { n, k, q } => FormulaValue::Integer(formulas::gaussian_binomial(n, k, q).map_err(usage)?.to_string()),
        FormulaCmd::RankCount { dims: Dims { q, m, n }, k } => {
            FormulaValue::Integer(formulas::count_rank_matrices(m, n, q, k).map_err(usage)?.to_string())
        }
        FormulaCmd::FreeProb { dims: Dims { q, m, n }, r } => FormulaValue::Report(formulas::prob_free_minor(m, n, q, r).map_err(usage)?),
        FormulaCmd::ColrankProb(Dims { q, m, n }) => FormulaValue::Prob(formulas::prob_full_col_rank(m, n, q).map_err(usage)?),
        FormulaCmd::Upper(Dims { q, m, n }) => FormulaValue::Prob(formulas::upper_bound_nonfree(m, n, q).map_err(usage)?),
        FormulaCmd::Lower(TargetDims { dims: Dims { q, m, n }, target }) => {
            FormulaValue::Report(formulas::lower_bound_nonfree(m, n, q, &stats(&target)?).map_err(usage)?)
        }
        FormulaCmd::BlockLower(TargetDims { dims: Dims { q, m, n }, target }) => {
            FormulaValue::Prob(formulas::lower_bound_block(m, n, q, &stats(&target)?).map_err(usage)?)
        }
        FormulaCmd::Liminf { q, target } => FormulaValue::Prob(formulas::asymptotic_liminf_bound(q, &stats(&target)?).map_err(usage)?),
        FormulaCmd::Psmq { s, q, target } => FormulaValue::Prob(formulas::p_smq(s, q, &stats(&target)?).map_err(usage)?),
        FormulaCmd::Repcount { m, q, target } => {
            FormulaValue::Integer(formulas::rep_count_lower_bound(m, q, &stats(&target)?).map_err(usage)?.to_string())
        }
        FormulaCmd::Cq { q, tol } => {
            let c = formulas::cq_constant(q, tol).map_err(usage)?;
            return Ok(if g.json {
                pretty(&serde_json::to_value(&c).expect("serializable"))
            } else {
                format!(
                    "C_{q} = {} ({} factors, error below {:e})\nlower bound 1 - 1/q - 1/q^2 = {}\n",
                    fq_minors::sweep::format_g12(c.approx),
                    c.partial_terms,
                    c.error_bound,
                    prob_text(&c.lower_bound)
                )
            });
        }
    };
    Ok(match (value, g.json) {
        (FormulaValue::Integer(v), true) => pretty(&json!({ "value": v })),
        (FormulaValue::Integer(v), false) => format!("{v}\n"),
        (FormulaValue::Prob(p), true) => pretty(&prob_value(&p)),
        (FormulaValue::Prob(p), false) => format!("{}\n", prob_text(&p)),
        (FormulaValue::Report(r), true) => pretty(&serde_json::to_value(&r).expect("serializable")),
        (FormulaValue::Report(r), false) => {
            let mut s = format!("{} {}\n", json_str(&serde_json::to_value(r.kind).expect("kind")), prob_text(&r.value));
            if let Some(k) = r.best_k {
                let _ = writeln!(s, "best_k = {k}");
            }
            for (key, v) in &r.components {
                let _ = writeln!(s, "{key} = {v}");
            }
            s
        }
    })
}

fn json_str(v: &Value) -> String {
    v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())
}

/// `start:stop` or `start:stop:step`, inclusive of `stop`.
fn parse_range(s: &str) -> Result<NRange, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<usize>().map_err(|_| usage(format!("bad n range `{s}`")));
    match parts.as_slice() {
        [a] => NRange::new(num(a)?, num(a)?, 1),
        [a, b] => NRange::new(num(a)?, num(b)?, 1),
        [a, b, c] => NRange::new(num(a)?, num(b)?, num(c)?),
        _ => return Err(usage(format!("bad n range `{s}`"))),
    }
    .map_err(usage)
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub q: u32,
    /// Values of n as start:stop[:step], inclusive.
    #[arg(long)]
    pub n: String,
    /// constant:c, n-minus:d, n-plus:d or ratio:r.
    #[arg(long)]
    pub m_rule: String,
    /// Target minor (catalog name or file).
    #[arg(long, conflicts_with = "event", required_unless_present = "event")]
    pub target: Option<String>,
    /// Matrix event instead of a minor: full-column-rank, is-free-matroid, rank-at-least:r, rank-exactly:k.
    #[arg(long)]
    pub event: Option<String>,
}

fn rows_json(rows: &[SweepRow], spec: &SweepSpec) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "m": r.m,
                "estimate": r.estimate,
                "lower_bound": r.lower.as_ref().map(prob_value),
                "upper_bound": r.upper.as_ref().map(prob_value),
            })
        })
        .collect();
    json!({ "q": spec.field.q(), "m_rule": spec.m_rule.to_string(), "seed": spec.seed, "rows": rows })
}

fn sweep_spec(g: &Global, q: u32, n: &str, m_rule: &str, target: SweepTarget) -> Result<SweepSpec, CliError> {
    let spec = SweepSpec {
        field: field(q)?,
        n_range: parse_range(n)?,
        m_rule: m_rule.parse::<MRule>().map_err(usage)?,
        target,
        trials: g.trials,
        seed: g.seed,
        limits: SearchLimits { budget: g.budget },
    };
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn emit_rows(g: &Global, spec: &SweepSpec) -> Result<String, CliError> {
    let rows = spec.run().map_err(usage)?;
    Ok(if g.json { pretty(&rows_json(&rows, spec)) } else { to_csv(&rows) })
}

pub fn simulate(g: &Global, args: SimulateArgs) -> Result<String, CliError> {
    let target = match (&args.target, &args.event) {
        (Some(t), None) => SweepTarget::Minor(load_matroid(t)?),
        (None, Some(e)) => SweepTarget::Event(e.parse::<Event>().map_err(usage)?),
        _ => return Err(usage("give exactly one of --target and --event")),
    };
    emit_rows(g, &sweep_spec(g, args.q, &args.n, &args.m_rule, target)?)
}

#[derive(Args, Debug)]
pub struct HostArgs {
    /// Matrix file host.
    #[arg(long, value_name = "FILE", group = "host_source")]
    pub host: Option<std::path::PathBuf>,
    /// Matroid host (catalog name or matroid file).
    #[arg(long, value_name = "SPEC", group = "host_source")]
    pub host_matroid: Option<String>,
    /// Incidence matrix of a graph over GF(q): Kn or Ka,b.
    #[arg(long, value_name = "GRAPH", group = "host_source")]
    pub host_graph: Option<String>,
    /// Random host: sample a q x m x n matrix from --seed.
    #[arg(long, group = "host_source")]
    pub random: bool,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

enum Host {
    Matrix(FqMatrix),
    Matroid(Matroid),
}

impl Host {
    fn as_ref(&self) -> HostRef<'_> {
        match self {
            Host::Matrix(a) => HostRef::Matrix(a),
            Host::Matroid(m) => HostRef::Matroid(m),
        }
    }
}

fn graph_edges(spec: &str) -> Result<(usize, Vec<(usize, usize)>), CliError> {
    let bad = || usage(format!("bad graph `{spec}`, expected Kn or Ka,b"));
    let rest = spec.strip_prefix('K').ok_or_else(bad)?;
    match rest.split_once(',') {
        Some((a, b)) => {
            let (a, b) = (a.parse::<usize>().map_err(|_| bad())?, b.parse::<usize>().map_err(|_| bad())?);
            Ok((a + b, complete_bipartite(a, b)))
        }
        None => {
            let n = rest.parse::<usize>().map_err(|_| bad())?;
            Ok((n, complete_graph(n)))
        }
    }
}

fn load_host(g: &Global, h: &HostArgs) -> Result<Host, CliError> {
    if let Some(path) = &h.host {
        return Ok(Host::Matrix(load_matrix(path)?));
    }
    if let Some(spec) = &h.host_matroid {
        return Ok(Host::Matroid(load_matroid(spec)?));
    }
    if let Some(graph) = &h.host_graph {
        let (vertices, edges) = graph_edges(graph)?;
        let f = field(h.q.unwrap_or(2))?;
        return Ok(Host::Matrix(incidence_matrix(&f, vertices, &edges).map_err(usage)?));
    }
    if h.random {
        let (Some(q), Some(m), Some(n)) = (h.q, h.m, h.n) else {
            return Err(usage("--random needs --q, --m and --n"));
        };
        return Ok(Host::Matrix(sample_matrix(&field(q)?, m, n, SeedSpec::new(g.seed, 0))));
    }
    Err(usage("give a host: --host, --host-matroid, --host-graph or --random"))
}

#[derive(Args, Debug)]
pub struct MinorArgs {
    #[command(flatten)]
    pub host: HostArgs,
    #[arg(long)]
    pub target: String,
}

pub fn minor(g: &Global, args: MinorArgs) -> Result<String, CliError> {
    let host = load_host(g, &args.host)?;
    let target = load_matroid(&args.target)?;
    let outcome = host.as_ref().find(&target, SearchLimits { budget: g.budget }).map_err(usage)?;
    let verified = match &outcome {
        MinorOutcome::Found(w) => Some(host.as_ref().verify(&target, w)),
        _ => None,
    };
    if g.json {
        let witness = match &outcome {
            MinorOutcome::Found(w) => serde_json::to_value(w).expect("serializable"),
            _ => Value::Null,
        };
        return Ok(pretty(&json!({ "outcome": outcome.label(), "witness": witness, "verified": verified })));
    }
    let mut s = format!("{}\n", outcome.label());
    if let MinorOutcome::Found(w) = &outcome {
        let _ = writeln!(s, "contract {:?}\ndelete {:?}\nbijection {:?}", w.contract, w.delete, w.bijection);
        let _ = writeln!(s, "verified {}", verified == Some(true));
    }
    Ok(s)
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    #[command(flatten)]
    pub host: HostArgs,
    #[arg(long, default_value = "graphic")]
    pub class: String,
    /// Sweep the frequency of non-membership over n instead (needs --q, --n-range, --m-rule).
    #[arg(long)]
    pub sweep: bool,
    /// Values of n for --sweep, as start:stop[:step].
    #[arg(long)]
    pub n_range: Option<String>,
    #[arg(long)]
    pub m_rule: Option<String>,
}

fn class_json(r: &ClassReport) -> Value {
    let results: Vec<Value> = r
        .results
        .iter()
        .map(|x| json!({ "name": x.name, "outcome": x.outcome.label(), "verified": x.verified, "by_theorem": x.by_theorem }))
        .collect();
    json!({ "class": r.class, "member": r.is_member(), "found": r.found(), "results": results })
}

pub fn class(g: &Global, args: ClassArgs) -> Result<String, CliError> {
    if args.class != "graphic" {
        return Err(usage(format!("unknown class `{}`", args.class)));
    }
    if args.sweep {
        let (Some(q), Some(n), Some(rule)) = (args.host.q, &args.n_range, &args.m_rule) else {
            return Err(usage("--sweep needs --q, --n-range and --m-rule"));
        };
        let spec = sweep_spec(g, q, n, rule, SweepTarget::NonGraphic)?;
        for n in spec.n_range.values() {
            let m = spec.m_rule.rows(n).map_err(usage)?;
            if !non_graphic_rows_condition(q, m) {
                eprintln!("note: n = {n} has m = {m}, below the row count at which non-graphic matroids dominate");
            }
        }
        return emit_rows(g, &spec);
    }
    let host = load_host(g, &args.host)?;
    let report = has_excluded_minor(host.as_ref(), &args.class, SearchLimits { budget: g.budget }, false).map_err(usage)?;
    if g.json {
        return Ok(pretty(&class_json(&report)));
    }
    let verdict = match report.is_member() {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unknown",
    };
    let mut s = format!("{}: {verdict}\n", report.class);
    for r in &report.results {
        let note = if r.by_theorem { " (binary host)" } else if r.verified { " (verified)" } else { "" };
        let _ = writeln!(s, "  {} {}{note}", r.name, r.outcome.label());
    }
    Ok(s)
}

pub fn validate(g: &Global) -> Result<String, CliError> {
    let cfg = ValidateConfig { seed: g.seed, trials: g.trials, limits: SearchLimits { budget: g.budget }, ..Default::default() };
    let report = run_validation(&FormulaSet::default(), &cfg);
    let text = if g.json {
        let checks: Vec<Value> =
            report.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect();
        pretty(&json!({ "passed": report.passed(), "checks": checks }))
    } else {
        report.to_text()
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(CliError::Failed(text))
    }
}
