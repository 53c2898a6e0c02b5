//! The guarded implication graph: seeded edges, closure, refutations, audit, and DOT export.

mod atoms;
mod audit;
mod closure;
mod dot;

pub use atoms::{Atom, Guard, HypothesisSet};
pub use audit::{audit, AuditReport, SoundnessViolation};
pub use closure::{Derivation, Outcome, Step};
pub use dot::export_dot;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::conditions::Condition;
use crate::data;
use crate::error::{NameError, ParseError};

/// Whether an edge or query concerns one point or the function as a whole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Pointwise,
    Global,
}

impl Scope {
    pub const ALL: [Scope; 2] = [Scope::Pointwise, Scope::Global];

    pub fn name(self) -> &'static str {
        match self {
            Scope::Pointwise => "pointwise",
            Scope::Global => "global",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scope {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pointwise" | "point" | "local" => Ok(Scope::Pointwise),
            "global" | "everywhere" => Ok(Scope::Global),
            other => Err(NameError::Scope(other.to_string())),
        }
    }
}

/// A guarded implication with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub source: Condition,
    pub target: Condition,
    pub guard: Guard,
    pub pointwise: bool,
    pub global: bool,
    pub provenance: String,
}

impl Edge {
    pub fn in_scope(&self, scope: Scope) -> bool {
        match scope {
            Scope::Pointwise => self.pointwise,
            Scope::Global => self.global,
        }
    }

    pub fn scope_label(&self) -> &'static str {
        match (self.pointwise, self.global) {
            (true, true) => "both",
            (true, false) => "pointwise",
            _ => "global",
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.source, self.target)?;
        if !self.guard.is_trivial() {
            write!(f, " [{}]", self.guard)?;
        }
        Ok(())
    }
}

/// An implication reported in the literature, which the edge table must reproduce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiteratureClaim {
    pub item: u32,
    pub source: Condition,
    pub target: Condition,
    pub guard: HypothesisSet,
    pub scopes: Vec<Scope>,
    pub citation: String,
}

/// A non-implication certificate as the graph sees it: the model behind it satisfies
/// the listed hypotheses, `source` holds and `target` fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub id: String,
    pub source: Condition,
    pub target: Condition,
    /// Hypotheses satisfied at the failing point; `None` when the refutation has no
    /// pointwise reading (a global-only condition is involved).
    pub pointwise: Option<HypothesisSet>,
    /// Hypotheses satisfied by the model as a whole.
    pub global: HypothesisSet,
    pub machine_checked: bool,
    pub citation: String,
}

impl Refutation {
    pub fn context(&self, scope: Scope) -> Option<&HypothesisSet> {
        match scope {
            Scope::Pointwise => self.pointwise.as_ref(),
            Scope::Global => Some(&self.global),
        }
    }
}

fn split_fields(line: &str, n: usize, lineno: usize, file: &str) -> Result<Vec<String>, ParseError> {
    let fields: Vec<String> = line.splitn(n, '|').map(|s| s.trim().to_string()).collect();
    if fields.len() != n {
        return Err(ParseError::new(format!("expected {n} fields separated by `|`")).at(format!("{file}:{lineno}")));
    }
    Ok(fields)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn cond(s: &str, at: &str) -> Result<Condition, ParseError> {
    s.parse().map_err(|e: NameError| ParseError::new(e.to_string()).at(at))
}

/// Parses an edge table: `source | target | guard | scope | provenance` per line.
pub fn parse_edges(text: &str, file: &str) -> Result<Vec<Edge>, ParseError> {
    let mut edges = Vec::new();
    for (lineno, line) in content_lines(text) {
        let at = format!("{file}:{lineno}");
        let f = split_fields(line, 5, lineno, file)?;
        let guard: Guard = f[2].parse().map_err(|e: NameError| ParseError::new(e.to_string()).at(&at))?;
        let (pointwise, global) = match f[3].to_ascii_lowercase().as_str() {
            "both" => (true, true),
            "pointwise" => (true, false),
            "global" => (false, true),
            other => return Err(ParseError::new(format!("unknown scope `{other}`")).at(at)),
        };
        if f[4].is_empty() {
            return Err(ParseError::new("edge without provenance").at(at));
        }
        let source = cond(&f[0], &at)?;
        let target = cond(&f[1], &at)?;
        if pointwise && (source.is_global_only() || target.is_global_only()) {
            return Err(ParseError::new(format!("{source} => {target} involves a global-only condition")).at(at));
        }
        edges.push(Edge { source, target, guard, pointwise, global, provenance: f[4].clone() });
    }
    Ok(edges)
}

/// Parses literature claims: `item | source | target | guard | scope | citation`.
pub fn parse_literature(text: &str, file: &str) -> Result<Vec<LiteratureClaim>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in content_lines(text) {
        let at = format!("{file}:{lineno}");
        let f = split_fields(line, 6, lineno, file)?;
        let item = f[0].parse().map_err(|_| ParseError::new("bad item number").at(&at))?;
        let guard = HypothesisSet::parse_list(&f[3]).map_err(|e| ParseError::new(e.to_string()).at(&at))?;
        let scopes = match f[4].as_str() {
            "both" => Scope::ALL.to_vec(),
            s => vec![s.parse().map_err(|e: NameError| ParseError::new(e.to_string()).at(&at))?],
        };
        out.push(LiteratureClaim {
            item,
            source: cond(&f[1], &at)?,
            target: cond(&f[2], &at)?,
            guard,
            scopes,
            citation: f[5].clone(),
        });
    }
    Ok(out)
}

/// The seeded implication graph. Immutable once built.
#[derive(Clone, Debug)]
pub struct Graph {
    edges: Vec<Edge>,
    literature: Vec<LiteratureClaim>,
}

impl Graph {
    pub fn new(edges: Vec<Edge>, literature: Vec<LiteratureClaim>) -> Self {
        Graph { edges, literature }
    }

    /// The shipped table, or the one under `SEMICONT_DATA_DIR` when set.
    pub fn load() -> Result<Self, ParseError> {
        let (edges, file) = data::read("edges.txt")?;
        let edges = parse_edges(&edges, &file)?;
        let (lit, file) = data::read("literature.txt")?;
        Ok(Graph::new(edges, parse_literature(&lit, &file)?))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn literature(&self) -> &[LiteratureClaim] {
        &self.literature
    }

    /// The edges that apply in `scope`, in table order.
    pub fn seed_edges(&self, scope: Scope) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.in_scope(scope)).collect()
    }

    /// A copy with one extra edge, for fault-injection tests.
    pub fn with_edge(&self, edge: Edge) -> Graph {
        let mut g = self.clone();
        g.edges.push(edge);
        g
    }

    /// Literature claims matching the pair, for provenance notes.
    pub fn literature_for(&self, source: Condition, target: Condition) -> Vec<&LiteratureClaim> {
        self.literature.iter().filter(|c| c.source == source && c.target == target).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_shape() {
        let g = Graph::load().unwrap();
        let trivial = g.edges().iter().filter(|e| e.provenance == "trivial by definition").count();
        assert_eq!(trivial, 26, "25 listed trivial implications, one of them an equivalence");
        assert!(g.edges().iter().all(|e| !e.provenance.is_empty()));
        assert_eq!(g.literature().len(), 28);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_edges("LSC | LPC | - | both", "t").is_err());
        assert!(parse_edges("LSC | XYZ | - | both | p", "t").is_err());
        assert!(parse_edges("LSC | LPC | - | sometimes | p", "t").is_err());
        assert!(parse_edges("SM | UBLSCA | - | both | p", "t").is_err());
        let err = parse_edges("\n\nLSC | LPC | wat | both | p", "edges.txt").unwrap_err();
        assert_eq!(err.location.as_deref(), Some("edges.txt:3"));
    }
}
