//! `simplexfree`: command-line frontend for checking families, evaluating
//! the closed forms and bounds, and running the exact searches.
//!
//! Exit codes: 0 success, 1 definite negative (simplex found, target
//! unreachable, conjecture mismatch), 2 usage or input error, 3 budget
//! exhausted before an answer.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use simplexfree::formulas::{lemma_bound, lemma_bound_d2, proven_oracle, star_oracle, FOracle};
use simplexfree::search::{enumerate_optimal, verify_conjecture, ConjectureReport, Enumeration, Verdict};
use simplexfree::{
    build_star_family, find_simplex, parse_family, serialize_family, star_value, BoundValue, SearchConfig,
    SearchError, SearchOutcome, SearchProblem, SetFamily, Status,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Ground sizes from which searches need `--long-running`.
const LONG_RUNNING_N: u32 = 7;

#[derive(Parser, Debug)]
#[command(name = "simplexfree", version, about = "Exact tools for d-simplex-free set families")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Worker threads for searches (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Branch-and-bound node budget.
    #[arg(long, global = true, default_value_t = simplexfree::search::DEFAULT_NODE_BUDGET)]
    node_budget: u64,

    /// Allow searches on ground sets of 7 or more elements.
    #[arg(long, global = true)]
    long_running: bool,

    /// Omit the run statistics block (makes output byte-stable).
    #[arg(long, global = true)]
    no_stats: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a family file for a d-simplex.
    Check {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        d: u32,
    },
    /// Extremal value of the star construction, with its status.
    Value(Params),
    /// Link decomposition upper bound on g(n,d,k).
    Bound {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = OracleKind::Mixed)]
        oracle: OracleKind,
    },
    /// Print the star family in the family file format.
    Construct {
        #[command(flatten)]
        params: Params,
        /// Centre element.
        #[arg(long, default_value_t = 0)]
        x: u32,
    },
    /// Exact maximum simplex-free family.
    Search(SearchArgs),
    /// All optimal families and their orbits.
    Enumerate(SearchArgs),
    /// Compare exact capped values with the star values on a small grid.
    Conjecture {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n_max: u32,
    },
}

#[derive(Args, Debug)]
struct Params {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 0)]
    k: u32,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
    /// Members of size at most n-k.
    #[arg(long, conflicts_with = "size_cap")]
    k: Option<u32>,
    #[arg(long)]
    size_cap: Option<u32>,
    /// Require a member of exactly the cap size (g instead of f).
    #[arg(long)]
    require_max: bool,
    /// Decision mode: is a family of this size attainable?
    #[arg(long)]
    target: Option<u64>,
}

impl SearchArgs {
    fn problem(&self) -> Result<SearchProblem, Failure> {
        let size_cap = match (self.k, self.size_cap) {
            (Some(k), _) if k > self.n => return Err(Failure::usage(format!("k = {k} exceeds n = {}", self.n))),
            (Some(k), _) => Some(self.n - k),
            (None, cap) => cap,
        };
        Ok(SearchProblem {
            n: self.n,
            d: self.d,
            size_cap,
            require_max: self.require_max,
            target: self.target,
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    /// Proven values and upper bounds only.
    Proven,
    /// Star values everywhere (conjectured where unproven).
    Star,
    /// Proven values where known, star values elsewhere.
    Mixed,
    /// Exact values by search.
    Exact,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let code = if e.is_inconclusive() { EXIT_INCONCLUSIVE } else { EXIT_USAGE };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

macro_rules! impl_usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::usage(e.to_string())
            }
        }
    )*};
}
impl_usage_from!(simplexfree::FamilyError, simplexfree::FormulaError, std::io::Error);

/// What a command prints and how it exits.
struct Report {
    text: String,
    code: u8,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: 0 }
    }
}

fn schema(verb: &str) -> String {
    format!("simplexfree/{verb}/v1")
}

fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("json values serialize");
    s.push('\n');
    s
}

fn status_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serializable")
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let cfg = SearchConfig {
        node_budget: cli.node_budget,
        threads: cli.threads,
        ..SearchConfig::default()
    };
    match &cli.command {
        Command::Check { family, d } => check(cli, family, *d),
        Command::Value(p) => value(cli, p),
        Command::Bound { params, oracle } => bound(cli, params, *oracle, &cfg),
        Command::Construct { params, x } => construct(cli, params, *x),
        Command::Search(args) => {
            let prob = args.problem()?;
            gate(cli, prob.n)?;
            let out = simplexfree::max_simplex_free(&prob, &cfg)?;
            Ok(search_report(cli, &prob, &out))
        }
        Command::Enumerate(args) => {
            let prob = args.problem()?;
            gate(cli, prob.n)?;
            let en = enumerate_optimal(&prob, &cfg)?;
            Ok(enumerate_report(cli, &prob, &en))
        }
        Command::Conjecture { d, n_max } => {
            gate(cli, *n_max)?;
            let report = verify_conjecture(*n_max, *d, &cfg)?;
            Ok(conjecture_report(cli, &report))
        }
    }
}

fn gate(cli: &Cli, n: u32) -> Result<(), Failure> {
    if n >= LONG_RUNNING_N && !cli.long_running {
        return Err(Failure::usage(format!(
            "n = {n} may take very long; pass --long-running to proceed"
        )));
    }
    Ok(())
}

fn check(cli: &Cli, path: &PathBuf, d: u32) -> Result<Report, Failure> {
    if d == 0 {
        return Err(Failure::usage("d must be at least 1"));
    }
    let text = fs::read_to_string(path)?;
    let parsed = parse_family(&text)?;
    if parsed.duplicates_dropped > 0 {
        eprintln!("warning: dropped {} duplicate set(s)", parsed.duplicates_dropped);
    }
    let witness = find_simplex(&parsed.family, d);
    let code = if witness.is_some() { EXIT_NEGATIVE } else { 0 };
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "schema": schema("check"),
            "d": d,
            "size": parsed.family.len(),
            "simplex_free": witness.is_none(),
            "witness": witness,
        })),
        Format::Table => match &witness {
            None => "simplex-free\n".to_string(),
            Some(w) => format!("{}\n", w.to_json()),
        },
    };
    Ok(Report { text, code })
}

fn value(cli: &Cli, p: &Params) -> Result<Report, Failure> {
    let v = star_value(p.n, p.d, p.k)?;
    Ok(Report::ok(match cli.format {
        Format::Json => to_json(&json!({
            "schema": schema("value"),
            "n": p.n,
            "d": p.d,
            "k": p.k,
            "value": v.value,
            "status": v.status,
            "provenance": v.provenance,
        })),
        Format::Table => format!("{v}\n"),
    }))
}

struct ExactOracle<'a> {
    cfg: &'a SearchConfig,
}

impl FOracle for ExactOracle<'_> {
    fn f(&self, n: u32, d: u32, k: u32) -> Option<BoundValue> {
        let out = simplexfree::max_simplex_free(&SearchProblem::f_capped(n, d, k), self.cfg).ok()?;
        (out.verdict == Verdict::Optimal)
            .then(|| BoundValue::new(out.optimum as u128, Status::ExactBySearch, "exact search"))
    }
}

fn bound(cli: &Cli, p: &Params, kind: OracleKind, cfg: &SearchConfig) -> Result<Report, Failure> {
    let mixed = |n, d, k| proven_oracle(n, d, k).or_else(|| star_oracle(n, d, k));
    let exact = ExactOracle { cfg };
    let oracle: &dyn FOracle = match kind {
        OracleKind::Proven => &proven_oracle,
        OracleKind::Star => &star_oracle,
        OracleKind::Mixed => &mixed,
        OracleKind::Exact => {
            gate(cli, p.n.saturating_sub(p.k))?;
            &exact
        }
    };
    let lb = lemma_bound(p.n, p.d, p.k, oracle)?;
    let chain = if p.d == 2 { Some(lemma_bound_d2(p.n, p.k)?) } else { None };
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "schema": schema("bound"),
            "n": p.n,
            "d": p.d,
            "k": p.k,
            "oracle": format!("{kind:?}").to_lowercase(),
            "bound": lb.bound,
            "terms": lb.terms,
            "chain_closed_form": chain,
        })),
        Format::Table => {
            let mut s = format!("g({},{},{}) {}\n", p.n, p.d, p.k, lb.bound);
            for t in &lb.terms {
                let _ = writeln!(s, "  {} x f({},{},{}) = {}", t.coefficient, t.n, t.d, t.k, t.value);
            }
            if let Some(c) = chain {
                let _ = writeln!(s, "  chain closed form: {c}");
            }
            s
        }
    };
    Ok(Report::ok(text))
}

fn construct(cli: &Cli, p: &Params, x: u32) -> Result<Report, Failure> {
    let fam = build_star_family(p.n, x, p.d, p.k)?;
    Ok(Report::ok(match cli.format {
        Format::Json => serialize_family(&fam),
        Format::Table => {
            let mut s = format!("star family n={} x={x} d={} k={}: {} sets\n", p.n, p.d, p.k, fam.len());
            for m in fam.iter() {
                let _ = writeln!(s, "  {m:?}");
            }
            s
        }
    }))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Optimal | Verdict::TargetReached => 0,
        Verdict::TargetUnreachable => EXIT_NEGATIVE,
    }
}

fn outcome_json(cli: &Cli, verb: &str, prob: &SearchProblem, out: &SearchOutcome) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("schema".into(), Value::String(schema(verb)));
    map.insert("problem".into(), status_json(prob));
    map.insert("verdict".into(), status_json(&out.verdict));
    map.insert("optimum".into(), json!(out.optimum));
    map.insert("witness".into(), status_json(&out.witness));
    map.insert("optimal_count".into(), json!(out.optimal_count));
    map.insert("optimal_orbit_count".into(), json!(out.optimal_orbit_count));
    if !cli.no_stats {
        map.insert("stats".into(), status_json(&out.stats));
    }
    map
}

fn family_line(f: &SetFamily) -> String {
    serialize_family(f).trim_end().to_string()
}

fn stats_lines(cli: &Cli, out: &SearchOutcome) -> String {
    if cli.no_stats {
        return String::new();
    }
    let s = &out.stats;
    format!(
        "stats: universe {} sets, {} simplices, {} decision runs, {} nodes, {} prunes, {:.3}s\n",
        s.universe, s.simplices, s.decision_runs, s.nodes, s.prunes, s.wall_time_secs
    )
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Optimal => "optimal",
        Verdict::TargetReached => "target reached",
        Verdict::TargetUnreachable => "target unreachable",
    }
}

fn search_report(cli: &Cli, prob: &SearchProblem, out: &SearchOutcome) -> Report {
    let text = match cli.format {
        Format::Json => to_json(&Value::Object(outcome_json(cli, "search", prob, out))),
        Format::Table => format!(
            "optimum {} ({})\nwitness {}\n{}",
            out.optimum,
            verdict_text(out.verdict),
            family_line(&out.witness),
            stats_lines(cli, out)
        ),
    };
    Report {
        text,
        code: verdict_code(out.verdict),
    }
}

fn enumerate_report(cli: &Cli, prob: &SearchProblem, en: &Enumeration) -> Report {
    let text = match cli.format {
        Format::Json => {
            let mut map = outcome_json(cli, "enumerate", prob, &en.outcome);
            map.insert("families".into(), status_json(&en.families));
            map.insert("canonical_forms".into(), status_json(&en.canonical_forms));
            to_json(&Value::Object(map))
        }
        Format::Table => {
            let orbits = en
                .outcome
                .optimal_orbit_count
                .map_or_else(|| "n/a".to_string(), |c| c.to_string());
            let mut s = format!(
                "optimum {}: {} optimal families, {} orbits\n",
                en.outcome.optimum,
                en.families.len(),
                orbits
            );
            for f in &en.families {
                let _ = writeln!(s, "  {}", family_line(f));
            }
            s.push_str(&stats_lines(cli, &en.outcome));
            s
        }
    };
    Report::ok(text)
}

fn conjecture_report(cli: &Cli, report: &ConjectureReport) -> Report {
    let code = if !report.complete {
        EXIT_INCONCLUSIVE
    } else if report.all_match() {
        0
    } else {
        EXIT_NEGATIVE
    };
    let text = match cli.format {
        Format::Json => {
            let mut v = status_json(report);
            v["schema"] = Value::String(schema("conjecture"));
            to_json(&v)
        }
        Format::Table => {
            let mut s = format!("d={} n_max={}\n", report.d, report.n_max);
            let _ = writeln!(s, "{:>3} {:>3} {:>8} {:>11} {:>6} {:>7} {:>7} {:>7}", "n", "k", "exact", "conjectured", "match", "unique", "optima", "orbits");
            for r in &report.rows {
                let orbits = r.orbit_count.map_or_else(|| "-".to_string(), |c| c.to_string());
                let _ = writeln!(
                    s,
                    "{:>3} {:>3} {:>8} {:>11} {:>6} {:>7} {:>7} {:>7}",
                    r.n, r.k, r.exact, r.conjectured, yes_no(r.matches), yes_no(r.unique), r.optimal_count, orbits
                );
            }
            if report.rows.is_empty() {
                s.push_str("(no cells with 1 <= k <= n-d-1)\n");
            }
            match &report.inconclusive {
                Some(why) => {
                    let _ = writeln!(s, "incomplete: {why}");
                }
                None => {
                    let _ = writeln!(s, "{}", if report.all_match() { "all cells match" } else { "MISMATCH" });
                }
            }
            s
        }
    };
    Report { text, code }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
