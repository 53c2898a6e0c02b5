//! The counterexample library.
//!
//! Machine-checked records carry a model and expected verdicts and are replayed by
//! [`verify`]. Paper-cited records only carry a citation; their models live in spaces
//! the backends cannot execute (countable complement, quotient, weak topologies).

mod model_file;

pub use model_file::{load_model, AnyModel, ExpectSpec, ModelFile, PieceSpec, RecordMeta, StaircaseSpec};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::conditions::Condition;
use crate::data;
use crate::error::{NameError, ParseError};
use crate::extreal::ExtendedReal;
use crate::graph::{HypothesisSet, Refutation};
use crate::model::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    MachineChecked,
    PaperCited,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::MachineChecked => "machine-checked",
            Tier::PaperCited => "paper-cited",
        }
    }
}

impl std::str::FromStr for Tier {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "machine-checked" | "machine" => Ok(Tier::MachineChecked),
            "paper-cited" | "cited" => Ok(Tier::PaperCited),
            other => Err(ParseError::new(format!("unknown tier `{other}`"))),
        }
    }
}

/// Where an expected verdict is evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Site {
    Global,
    Point(String),
}

impl std::fmt::Display for Site {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Site::Global => f.write_str("global"),
            Site::Point(p) => write!(f, "x = {p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub condition: Condition,
    pub site: Site,
    pub holds: bool,
    pub witness: Option<String>,
    pub threshold: Option<ExtendedReal>,
}

/// A refutation certificate with its tier-specific payload.
#[derive(Clone, Debug)]
pub struct Record {
    pub refutation: Refutation,
    pub tier: Tier,
    pub model: Option<AnyModel>,
    pub expect: Vec<Expectation>,
    /// Thresholds `1/k`, `k = 1..grid`, replayed for a failing uniform condition.
    pub threshold_grid: Option<u64>,
    pub file: String,
}

impl Record {
    pub fn id(&self) -> &str {
        &self.refutation.id
    }

    /// Builds a machine-checked record from a model file with `[record]` and `[[expect]]`.
    pub fn from_toml(text: &str, file: &str) -> Result<Record, ParseError> {
        let (model, spec) = load_model(text, file)?;
        let meta = spec.record.as_ref().ok_or_else(|| ParseError::new("missing [record] table").at(file))?;
        let name = |s: &str, at: &str| -> Result<Condition, ParseError> {
            s.parse().map_err(|e: NameError| ParseError::new(e.to_string()).at(format!("{file}: {at}")))
        };
        let source = name(&meta.source, "record.source")?;
        let target = name(&meta.target, "record.target")?;
        let mut expect = Vec::new();
        for (i, e) in spec.expect.iter().enumerate() {
            let at = format!("expect[{i}]");
            let site = if e.at.eq_ignore_ascii_case("global") { Site::Global } else { Site::Point(e.at.clone()) };
            let threshold = e
                .threshold
                .as_deref()
                .map(|t| t.parse::<ExtendedReal>().map_err(|err| err.at(format!("{file}: {at}"))))
                .transpose()?;
            expect.push(Expectation {
                condition: name(&e.condition, &at)?,
                site,
                holds: e.holds,
                witness: e.witness.clone(),
                threshold,
            });
        }
        if expect.is_empty() {
            return Err(ParseError::new("a machine-checked record needs at least one [[expect]]").at(file));
        }
        let has = |c: Condition, holds: bool| expect.iter().any(|e| e.condition == c && e.holds == holds);
        if !has(source, true) || !has(target, false) {
            return Err(
                ParseError::new(format!("expectations must include {source} holding and {target} failing")).at(file)
            );
        }
        let global = model.global_hypotheses();
        let pointwise = if source.is_global_only() || target.is_global_only() {
            None
        } else {
            let failing = expect.iter().find_map(|e| match &e.site {
                Site::Point(p) if e.condition == target && !e.holds => Some(p.clone()),
                _ => None,
            });
            match failing {
                Some(p) => Some(model.hypotheses_at(&p).map_err(|err| ParseError::new(err.to_string()).at(file))?),
                None => None,
            }
        };
        Ok(Record {
            refutation: Refutation {
                id: meta.id.clone(),
                source,
                target,
                pointwise,
                global,
                machine_checked: true,
                citation: meta.citation.clone(),
            },
            tier: Tier::MachineChecked,
            model: Some(model),
            expect,
            threshold_grid: meta.threshold_grid,
            file: file.to_string(),
        })
    }
}

/// Parses cited records: `id | source | target | context | citation` per line.
pub fn parse_cited(text: &str, file: &str) -> Result<Vec<Record>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = format!("{file}:{}", i + 1);
        let f: Vec<&str> = line.splitn(5, '|').map(str::trim).collect();
        if f.len() != 5 {
            return Err(ParseError::new("expected 5 fields separated by `|`").at(at));
        }
        let err = |e: NameError| ParseError::new(e.to_string()).at(&at);
        let source: Condition = f[1].parse().map_err(err)?;
        let target: Condition = f[2].parse().map_err(err)?;
        let context = HypothesisSet::parse_list(f[3]).map_err(err)?;
        let pointwise = (!source.is_global_only() && !target.is_global_only()).then(|| context.clone());
        out.push(Record {
            refutation: Refutation {
                id: f[0].to_string(),
                source,
                target,
                pointwise,
                global: context,
                machine_checked: false,
                citation: f[4].to_string(),
            },
            tier: Tier::PaperCited,
            model: None,
            expect: Vec::new(),
            threshold_grid: None,
            file: at,
        });
    }
    Ok(out)
}

/// Selection criteria for [`Corpus::list`]; unset fields match everything.
#[derive(Clone, Debug, Default)]
pub struct RecordFilter {
    pub tier: Option<Tier>,
    pub source: Option<Condition>,
    pub target: Option<Condition>,
    /// Case-insensitive substring of the citation.
    pub provenance: Option<String>,
}

impl RecordFilter {
    pub fn matches(&self, r: &Record) -> bool {
        self.tier.is_none_or(|t| t == r.tier)
            && self.source.is_none_or(|c| c == r.refutation.source)
            && self.target.is_none_or(|c| c == r.refutation.target)
            && self.provenance.as_ref().is_none_or(|p| r.refutation.citation.to_lowercase().contains(&p.to_lowercase()))
    }
}

/// The record registry.
#[derive(Clone, Debug)]
pub struct Corpus {
    records: Vec<Record>,
}

impl Corpus {
    pub fn new(records: Vec<Record>) -> Result<Self, ParseError> {
        let mut seen = std::collections::BTreeSet::new();
        for r in &records {
            if !seen.insert(r.id().to_string()) {
                return Err(ParseError::new(format!("duplicate record id {}", r.id())).at(&r.file));
            }
        }
        Ok(Corpus { records })
    }

    /// Built-in records, or those under `SEMICONT_DATA_DIR`.
    pub fn load() -> Result<Self, ParseError> {
        let mut records = Vec::new();
        for (file, text) in data::record_files()? {
            records.push(Record::from_toml(&text, &file)?);
        }
        let (cited, file) = data::read("cited.txt")?;
        records.extend(parse_cited(&cited, &file)?);
        Corpus::new(records)
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn get(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id().eq_ignore_ascii_case(id))
    }

    pub fn list(&self, filter: &RecordFilter) -> Vec<&Record> {
        self.records.iter().filter(|r| filter.matches(r)).collect()
    }

    pub fn refutations(&self) -> Vec<Refutation> {
        self.records.iter().map(|r| r.refutation.clone()).collect()
    }

    /// A copy without the named record, for differential audits.
    pub fn without(&self, id: &str) -> Corpus {
        Corpus { records: self.records.iter().filter(|r| r.id() != id).cloned().collect() }
    }

    pub fn with_record(&self, r: Record) -> Result<Corpus, ParseError> {
        let mut records = self.records.clone();
        records.push(r);
        Corpus::new(records)
    }
}

/// One expectation replayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub condition: Condition,
    pub site: Site,
    pub expected: bool,
    pub actual: Option<bool>,
    pub witness: Option<String>,
    pub ok: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub id: String,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("record {0} is paper-cited and has no executable model")]
    CitedOnly(String),
}

/// Replays every expected verdict of a machine-checked record.
pub fn verify(record: &Record) -> Result<VerifyReport, VerifyError> {
    let model = match (&record.model, record.tier) {
        (Some(m), Tier::MachineChecked) => m,
        _ => return Err(VerifyError::CitedOnly(record.id().to_string())),
    };
    let mut checks = Vec::new();
    for e in &record.expect {
        let verdict = match &e.site {
            Site::Global => model.check_global(e.condition),
            Site::Point(p) => model.check_at(e.condition, p),
        };
        let outcome = match verdict {
            Ok(v) => {
                let witness = v.witness.as_ref().map(|w| w.to_string());
                let mut ok = v.holds == e.holds;
                let mut note = None;
                if let Some(want) = &e.witness {
                    if !witness.as_deref().is_some_and(|w| w.contains(want.as_str())) {
                        ok = false;
                        note = Some(format!("witness should mention `{want}`"));
                    }
                }
                if let Some(a) = &e.threshold {
                    let got = match &v.witness {
                        Some(crate::conditions::Witness::Threshold { a }) => Some(a),
                        _ => None,
                    };
                    if got != Some(a) {
                        ok = false;
                        note = Some(format!("threshold should be a = {a}"));
                    }
                }
                CheckOutcome {
                    condition: e.condition,
                    site: e.site.clone(),
                    expected: e.holds,
                    actual: Some(v.holds),
                    witness,
                    ok,
                    note,
                }
            }
            Err(err) => CheckOutcome {
                condition: e.condition,
                site: e.site.clone(),
                expected: e.holds,
                actual: None,
                witness: None,
                ok: false,
                note: Some(err.to_string()),
            },
        };
        checks.push(outcome);
    }
    if let (Some(k), AnyModel::Piecewise(f)) = (record.threshold_grid, model) {
        checks.push(threshold_grid_check(f, k));
    }
    let passed = checks.iter().all(|c| c.ok);
    Ok(VerifyReport { id: record.id().to_string(), checks, passed })
}

/// For each `a = 1/k`, finds a point with a non-trivial decreasing approach whose values
/// stay at or below `a` but whose limit lies below `f(x)`: no threshold on the grid works.
fn threshold_grid_check(f: &crate::piecewise::PiecewiseFn, grid: u64) -> CheckOutcome {
    let start = f.staircase().map_or(1, |s| s.start);
    let mut failures = Vec::new();
    for k in 1..=grid {
        let a = ExtendedReal::ratio(1, k as i64);
        let mut candidates = f.cover().points;
        candidates.extend((start..=k + 1).map(|n| BigRational::from_integer(BigInt::from(n))));
        let found = candidates.iter().any(|x| {
            f.local(x).is_ok_and(|l| l.approaches.iter().any(|ap| ap.eligible_below(&a) && ap.limit < l.value))
        });
        if !found {
            failures.push(k);
        }
    }
    let ok = failures.is_empty();
    CheckOutcome {
        condition: Condition::UBLSCA,
        site: Site::Global,
        expected: false,
        actual: Some(!ok),
        witness: None,
        ok,
        note: Some(if ok {
            format!("every threshold a = 1/k, k = 1..{grid}, is defeated by a staircase step")
        } else {
            format!("thresholds 1/k survive for k in {failures:?}")
        }),
    }
}
