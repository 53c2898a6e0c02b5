use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use semicont::corpus::{self, load_model, AnyModel, Corpus, Record, RecordFilter, Tier, VerifyReport};
use semicont::graph::{self, export_dot, Graph, HypothesisSet, Outcome, Scope};
use semicont::search::{self, default_grid, parse_grid};
use semicont::{CheckError, Condition, NameError, ParseError, Verdict};

/// Decide weak lower semicontinuity conditions and query their implication diagram.
#[derive(Parser)]
#[command(name = "semicont", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate conditions on a model file.
    Check {
        model: PathBuf,
        /// Only this point (default: every point, plus global verdicts).
        #[arg(long)]
        point: Option<String>,
        /// Comma-separated condition names (default: all).
        #[arg(long, value_delimiter = ',')]
        condition: Vec<String>,
    },
    /// Is SOURCE => TARGET derivable from the seeded diagram?
    Implies {
        source: String,
        target: String,
        /// Hypothesis atoms, comma-separated (N1, no-jump, conv-min-seq, conv-min-net, empty-argmin).
        #[arg(long, default_value = "")]
        hyp: String,
        #[arg(long, default_value = "pointwise")]
        scope: String,
    },
    /// Everything derivable from SOURCE.
    Closure {
        source: String,
        #[arg(long, default_value = "")]
        hyp: String,
        #[arg(long, default_value = "pointwise")]
        scope: String,
    },
    /// Check the edge table against the counterexample corpus.
    Audit,
    /// List or verify counterexample records.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Exhaustive finite-model sweep, or oracle cross-validation.
    Sweep {
        /// Largest point count (default 4, or 3 with --cross-validate).
        #[arg(long)]
        n_max: Option<usize>,
        /// Comma-separated value grid (default -inf,-1,0,1,+inf).
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Compare reduced checkers with the literal definitions instead.
        #[arg(long)]
        cross_validate: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The implication diagram in Graphviz DOT format.
    ExportDot {
        #[arg(long, default_value = "pointwise")]
        scope: String,
        #[arg(long, default_value = "")]
        hyp: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// List records, optionally filtered.
    List {
        #[arg(long)]
        tier: Option<String>,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
        /// Substring of the citation.
        #[arg(long)]
        provenance: Option<String>,
    },
    /// Replay machine-checked records (all, one id, or a record file).
    Verify {
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        file: Option<PathBuf>,
    },
}

/// Failures mapped onto the exit-code contract.
enum Failure {
    /// Malformed input files or values: exit 2.
    Input(String),
    /// Unknown names and bad arguments: exit 3.
    Usage(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<NameError> for Failure {
    fn from(e: NameError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::GlobalOnly(_) => Failure::Usage(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Text for stdout and the exit status it implies.
struct Output {
    text: String,
    success: bool,
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Text => text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
            s.push('\n');
            s
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: String) -> Result<String, Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text),
    }
}

fn condition(s: &str) -> Result<Condition, Failure> {
    Ok(s.parse::<Condition>()?)
}

fn hypotheses(s: &str) -> Result<HypothesisSet, Failure> {
    Ok(HypothesisSet::parse_list(s)?)
}

fn scope(s: &str) -> Result<Scope, Failure> {
    Ok(s.parse::<Scope>()?)
}

#[derive(Serialize)]
struct PointReport {
    point: String,
    isolated: bool,
    hypotheses: HypothesisSet,
    verdicts: Vec<Verdict>,
}

#[derive(Serialize)]
struct CheckReport {
    backend: &'static str,
    model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    jumps: Option<String>,
    points: Vec<PointReport>,
    global: Vec<Verdict>,
}

fn verdict_line(out: &mut String, v: &Verdict) {
    let status = if v.holds { "holds" } else { "fails" };
    let witness = v.witness.as_ref().map(|w| w.to_string()).unwrap_or_else(|| "-".to_string());
    writeln!(out, "  {:<8} {status:<6} {witness}  [{}]", v.condition.name(), v.condition.anchor()).unwrap();
}

fn cmd_check(format: Format, path: &Path, point: Option<&str>, filter: &[String]) -> Result<Output, Failure> {
    let conds: Vec<Condition> = if filter.is_empty() {
        Condition::ALL.to_vec()
    } else {
        filter.iter().map(|c| condition(c)).collect::<Result<_, _>>()?
    };
    let text = read_file(path)?;
    let (model, _) = load_model(&text, &path.display().to_string())?;
    let names = match point {
        Some(p) => vec![p.to_string()],
        None => model.report_points(),
    };
    let mut points = Vec::new();
    for p in &names {
        let verdicts = conds
            .iter()
            .filter(|c| !c.is_global_only())
            .map(|&c| model.check_at(c, p))
            .collect::<Result<Vec<_>, _>>()?;
        points.push(PointReport {
            point: p.clone(),
            isolated: model.is_isolated(p)?,
            hypotheses: model.hypotheses_at(p)?,
            verdicts,
        });
    }
    let global = if point.is_none() {
        conds.iter().map(|&c| model.check_global(c)).collect::<Result<Vec<_>, _>>()?
    } else {
        // only an explicit request for a global-only condition is an error
        if let Some(c) = conds.iter().find(|c| c.is_global_only() && !filter.is_empty()) {
            return Err(CheckError::GlobalOnly(c.name().to_string()).into());
        }
        Vec::new()
    };
    let (image, jumps) = match &model {
        AnyModel::Piecewise(f) => (Some(f.image_of().to_string()), Some(f.jumps_of().to_string())),
        AnyModel::Finite(_) => (None, None),
    };
    let report = CheckReport { backend: model.backend_name(), model: model.to_string(), image, jumps, points, global };
    let text = emit(format, &report, || render_check(&report, &model));
    Ok(Output { text, success: true })
}

fn render_check(report: &CheckReport, model: &AnyModel) -> String {
    let mut out = String::new();
    writeln!(out, "model ({} backend): {}", report.backend, model).unwrap();
    if let (Some(image), Some(jumps)) = (&report.image, &report.jumps) {
        writeln!(out, "image: {image}\njumps: {jumps}").unwrap();
    }
    if let Some(v) = report.points.first().and_then(|p| p.verdicts.first()).or(report.global.first()) {
        writeln!(out, "reduction: {}", v.reduction).unwrap();
    }
    for p in &report.points {
        let isolated = if p.isolated { ", isolated point: liminf is f(x)" } else { "" };
        writeln!(out, "\nx = {}  (hypotheses {}{isolated})", p.point, p.hypotheses).unwrap();
        for v in &p.verdicts {
            verdict_line(&mut out, v);
        }
    }
    if !report.global.is_empty() {
        writeln!(out, "\nglobal  (hypotheses {})", model.global_hypotheses()).unwrap();
        for v in &report.global {
            verdict_line(&mut out, v);
        }
    }
    out
}

fn cmd_implies(format: Format, source: &str, target: &str, hyp: &str, scope_name: &str) -> Result<Output, Failure> {
    let (a, b, h, s) = (condition(source)?, condition(target)?, hypotheses(hyp)?, scope(scope_name)?);
    let graph = Graph::load()?;
    let corpus = Corpus::load()?;
    let outcome = graph.implies(a, b, &h, s, &corpus.refutations())?;
    let text = emit(format, &outcome, || match &outcome {
        Outcome::Derivable { derivation } => {
            format!("{a} => {b}: derivable ({s} scope, hypotheses {h})\n{derivation}")
        }
        Outcome::NotDerivable { refutation } => {
            let mut out = format!("{a} => {b}: not derivable ({s} scope, hypotheses {h})\n");
            match refutation {
                Some(r) => {
                    let tier = if r.machine_checked { "machine-checked" } else { "paper-cited" };
                    writeln!(out, "refuted by {} ({tier}): {} holds and {} fails", r.id, r.source, r.target).unwrap();
                    writeln!(out, "  citation: {}", r.citation).unwrap();
                }
                None => out.push_str("no counterexample on record\n"),
            }
            out
        }
    });
    Ok(Output { text, success: outcome.is_derivable() })
}

#[derive(Serialize)]
struct ClosureReport {
    source: Condition,
    scope: Scope,
    hypotheses: HypothesisSet,
    reachable: Vec<Condition>,
}

fn cmd_closure(format: Format, source: &str, hyp: &str, scope_name: &str) -> Result<Output, Failure> {
    let (a, h, s) = (condition(source)?, hypotheses(hyp)?, scope(scope_name)?);
    let graph = Graph::load()?;
    let reachable: Vec<Condition> = graph.closure(a, &h, s)?.into_iter().collect();
    let report = ClosureReport { source: a, scope: s, hypotheses: h, reachable };
    let text = emit(format, &report, || {
        let names: Vec<&str> = report.reachable.iter().map(|c| c.name()).collect();
        format!(
            "{} implies {} conditions ({} scope, hypotheses {}):\n{}\n",
            a,
            names.len(),
            s,
            report.hypotheses,
            names.join(" ")
        )
    });
    Ok(Output { text, success: true })
}

fn cmd_audit(format: Format) -> Result<Output, Failure> {
    let graph = Graph::load()?;
    let corpus = Corpus::load()?;
    let report = graph::audit(&graph, &corpus.refutations());
    let text = emit(format, &report, || {
        let mut out = String::new();
        writeln!(out, "edges: {}  records: {}", graph.edges().len(), corpus.records().len()).unwrap();
        writeln!(out, "soundness violations: {}", report.violations.len()).unwrap();
        for v in &report.violations {
            writeln!(out, "  {} ({} scope) is contradicted by:\n{}", v.record, v.scope, v.derivation).unwrap();
        }
        writeln!(
            out,
            "global pairs: {}  derivable: {}  refuted: {}  gaps: {}",
            report.pairs,
            report.derivable,
            report.covered,
            report.gaps.len()
        )
        .unwrap();
        for (a, b) in &report.gaps {
            writeln!(out, "  gap: {a} => {b} is neither derivable nor refuted").unwrap();
        }
        writeln!(
            out,
            "literature items reproduced: {} of {}",
            graph.literature().len() - report.literature_failures.len(),
            graph.literature().len()
        )
        .unwrap();
        for item in &report.literature_failures {
            writeln!(out, "  item {item} is not derivable").unwrap();
        }
        out.push_str(if report.is_clean() { "audit clean\n" } else { "audit FAILED\n" });
        out
    });
    Ok(Output { text, success: report.is_clean() })
}

#[derive(Serialize)]
struct RecordSummary<'a> {
    id: &'a str,
    tier: Tier,
    source: Condition,
    target: Condition,
    citation: &'a str,
    file: &'a str,
}

fn cmd_corpus_list(
    format: Format,
    tier: Option<&str>,
    source: Option<&str>,
    target: Option<&str>,
    provenance: Option<&str>,
) -> Result<Output, Failure> {
    let filter = RecordFilter {
        tier: tier.map(|t| t.parse::<Tier>().map_err(|e| Failure::Usage(e.to_string()))).transpose()?,
        source: source.map(condition).transpose()?,
        target: target.map(condition).transpose()?,
        provenance: provenance.map(str::to_string),
    };
    let corpus = Corpus::load()?;
    let rows: Vec<RecordSummary> = corpus
        .list(&filter)
        .into_iter()
        .map(|r| RecordSummary {
            id: r.id(),
            tier: r.tier,
            source: r.refutation.source,
            target: r.refutation.target,
            citation: &r.refutation.citation,
            file: &r.file,
        })
        .collect();
    let text = emit(format, &rows, || {
        let mut out = String::new();
        for r in &rows {
            writeln!(out, "{:<18} {:<15} {} =/=> {}  {}", r.id, r.tier.name(), r.source, r.target, r.citation).unwrap();
        }
        writeln!(out, "{} records", rows.len()).unwrap();
        out
    });
    Ok(Output { text, success: true })
}

fn render_verify(reports: &[VerifyReport], skipped: usize) -> String {
    let mut out = String::new();
    for r in reports {
        writeln!(out, "{} {}", if r.passed { "PASS" } else { "FAIL" }, r.id).unwrap();
        for c in &r.checks {
            let actual = match c.actual {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "error",
            };
            let expected = if c.expected { "holds" } else { "fails" };
            write!(out, "  {:<8} at {:<14} expected {expected}, got {actual}", c.condition.name(), c.site.to_string())
                .unwrap();
            if let Some(w) = &c.witness {
                write!(out, "; witness {w}").unwrap();
            }
            if let Some(n) = &c.note {
                write!(out, "; {n}").unwrap();
            }
            out.push('\n');
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    writeln!(out, "{passed} of {} machine-checked records verified", reports.len()).unwrap();
    if skipped > 0 {
        writeln!(out, "{skipped} paper-cited records have no executable model").unwrap();
    }
    out
}

fn cmd_corpus_verify(format: Format, id: Option<&str>, file: Option<&Path>) -> Result<Output, Failure> {
    let records: Vec<Record> = match (id, file) {
        (_, Some(path)) => vec![Record::from_toml(&read_file(path)?, &path.display().to_string())?],
        (Some(id), None) => {
            let corpus = Corpus::load()?;
            let r = corpus.get(id).ok_or_else(|| Failure::Usage(format!("no record with id `{id}`")))?;
            vec![r.clone()]
        }
        (None, None) => Corpus::load()?.records().to_vec(),
    };
    let mut reports = Vec::new();
    let mut skipped = 0;
    for r in &records {
        match corpus::verify(r) {
            Ok(report) => reports.push(report),
            Err(e) if records.len() == 1 => return Err(Failure::Input(e.to_string())),
            Err(_) => skipped += 1,
        }
    }
    let success = reports.iter().all(|r| r.passed);
    let text = emit(format, &reports, || render_verify(&reports, skipped));
    Ok(Output { text, success })
}

fn cmd_sweep(
    format: Format,
    n_max: Option<usize>,
    grid: Option<&str>,
    cross: bool,
    out: Option<&Path>,
) -> Result<Output, Failure> {
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None => default_grid(),
    };
    let bound = |n: usize, limit: usize| {
        if n == 0 || n > limit {
            Err(Failure::Usage(format!("--n-max must be between 1 and {limit}")))
        } else {
            Ok(n)
        }
    };
    let (text, success) = if cross {
        let n = bound(n_max.unwrap_or(search::CROSS_MAX_POINTS), search::CROSS_MAX_POINTS)?;
        let report = search::cross_validate(n, &grid)?;
        (emit(format, &report, || report.render()), report.is_clean())
    } else {
        let n = bound(n_max.unwrap_or(search::SWEEP_MAX_POINTS), search::SWEEP_MAX_POINTS)?;
        let report = search::sweep(&Graph::load()?, n, &grid)?;
        (emit(format, &report, || report.render()), report.is_clean())
    };
    Ok(Output { text: write_or_print(out, text)?, success })
}

fn cmd_export_dot(scope_name: &str, hyp: &str, out: Option<&Path>) -> Result<Output, Failure> {
    let (s, h) = (scope(scope_name)?, hypotheses(hyp)?);
    let graph = Graph::load()?;
    Ok(Output { text: write_or_print(out, export_dot(&graph, s, &h))?, success: true })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let f = cli.format;
    match cli.command {
        Command::Check { model, point, condition } => cmd_check(f, &model, point.as_deref(), &condition),
        Command::Implies { source, target, hyp, scope } => cmd_implies(f, &source, &target, &hyp, &scope),
        Command::Closure { source, hyp, scope } => cmd_closure(f, &source, &hyp, &scope),
        Command::Audit => cmd_audit(f),
        Command::Corpus { action: CorpusAction::List { tier, source, target, provenance } } => {
            cmd_corpus_list(f, tier.as_deref(), source.as_deref(), target.as_deref(), provenance.as_deref())
        }
        Command::Corpus { action: CorpusAction::Verify { id, file } } => {
            cmd_corpus_verify(f, id.as_deref(), file.as_deref())
        }
        Command::Sweep { n_max, grid, cross_validate, out } => {
            cmd_sweep(f, n_max, grid.as_deref(), cross_validate, out.as_deref())
        }
        Command::ExportDot { scope, hyp, out } => cmd_export_dot(&scope, &hyp, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(out.text.as_bytes());
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
