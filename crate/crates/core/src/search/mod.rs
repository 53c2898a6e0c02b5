//! Exhaustive sweeps over small finite models.
//!
//! A model is a labelled topology on `n` points together with a function into a value
//! grid. Models are identified as `n{n}-t{t}-f{f}`: `t` indexes [`enumerate_spaces`] and
//! `f` enumerates grid functions lexicographically with point `a` most significant.
//!
//! Work is split per topology and merged in index order, so every report is independent
//! of how rayon schedules the work.

pub mod oracle;

use std::fmt::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::conditions::{
    self, check_lpc_levelsets, check_qrgi_char, check_rgi_char, check_twlc_equivalences, decide_local, decide_uniform,
    Condition,
};
use crate::error::{CheckError, ParseError};
use crate::extreal::ExtendedReal;
use crate::graph::{Atom, Graph, HypothesisSet, Scope};
use crate::model::Model;
use crate::topology::{enumerate_spaces, FiniteModel, FiniteSpace, LiminfFault};

pub use oracle::Literal;

pub const SWEEP_MAX_POINTS: usize = 4;
pub const CROSS_MAX_POINTS: usize = 3;

const N: usize = Condition::ALL.len();

/// `{-inf, -1, 0, 1, +inf}`.
pub fn default_grid() -> Vec<ExtendedReal> {
    vec![
        ExtendedReal::NegInf,
        ExtendedReal::from_int(-1),
        ExtendedReal::zero(),
        ExtendedReal::from_int(1),
        ExtendedReal::PosInf,
    ]
}

/// A comma-separated list of extended reals, sorted and deduplicated.
pub fn parse_grid(s: &str) -> Result<Vec<ExtendedReal>, ParseError> {
    let mut grid = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.parse::<ExtendedReal>().map_err(|e| e.at("grid")))
        .collect::<Result<Vec<_>, _>>()?;
    grid.sort();
    grid.dedup();
    if grid.is_empty() {
        return Err(ParseError::new("the value grid is empty").at("grid"));
    }
    Ok(grid)
}

fn format_grid(grid: &[ExtendedReal]) -> String {
    let parts: Vec<String> = grid.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn check_bounds(n_max: usize, limit: usize, grid: &[ExtendedReal]) -> Result<(), ParseError> {
    if n_max == 0 || n_max > limit {
        return Err(ParseError::new(format!("n_max must be between 1 and {limit}, got {n_max}")));
    }
    if grid.is_empty() {
        return Err(ParseError::new("the value grid is empty").at("grid"));
    }
    Ok(())
}

fn cond_bit(c: Condition) -> u32 {
    1 << (c as usize)
}

fn atom_mask(h: &HypothesisSet) -> usize {
    Atom::ALL.iter().enumerate().filter(|(_, a)| h.contains(**a)).fold(0, |m, (i, _)| m | (1 << i))
}

fn mask_atoms(mask: usize) -> HypothesisSet {
    HypothesisSet::from_atoms(Atom::ALL.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| *a))
}

/// A model's position in the enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModelId {
    pub points: usize,
    pub topology: usize,
    pub function: usize,
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}-t{}-f{}", self.points, self.topology, self.function)
    }
}

impl std::str::FromStr for ModelId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::new(format!("malformed model id `{s}` (expected n<points>-t<topology>-f<function>)"));
        let mut parts = s.trim().split('-');
        let mut field = |prefix: char| -> Result<usize, ParseError> {
            parts.next().and_then(|p| p.strip_prefix(prefix)).and_then(|p| p.parse().ok()).ok_or_else(bad)
        };
        let id = ModelId { points: field('n')?, topology: field('t')?, function: field('f')? };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(id)
    }
}

fn function_values(grid: &[ExtendedReal], n: usize, mut index: usize) -> Vec<ExtendedReal> {
    let g = grid.len();
    let mut digits = vec![0; n];
    for d in digits.iter_mut().rev() {
        *d = index % g;
        index /= g;
    }
    digits.into_iter().map(|d| grid[d].clone()).collect()
}

fn function_count(grid: &[ExtendedReal], n: usize) -> usize {
    grid.len().pow(n as u32)
}

/// Rebuilds a swept model from its id.
pub fn model_by_id(id: &ModelId, grid: &[ExtendedReal]) -> Result<FiniteModel, ParseError> {
    let spaces = enumerate_spaces(id.points)?;
    let space = spaces
        .into_iter()
        .nth(id.topology)
        .ok_or_else(|| ParseError::new(format!("no topology {} on {} points", id.topology, id.points)))?;
    if id.function >= function_count(grid, id.points) {
        return Err(ParseError::new(format!("no function {} into a grid of {}", id.function, grid.len())));
    }
    FiniteModel::new(Arc::new(space), function_values(grid, id.points, id.function))
}

/// Every condition's verdict for one model.
struct Evaluation {
    id: ModelId,
    names: Vec<String>,
    /// Pointwise verdicts per point as condition bitmasks.
    pointwise: Vec<u32>,
    /// Hypothesis atoms per point, as [`Atom::ALL`] bitmasks.
    point_hyps: Vec<usize>,
    global: u32,
    global_hyps: usize,
    argmin_nonempty: bool,
    argmin_closed: bool,
}

fn evaluate(id: ModelId, model: &FiniteModel) -> Result<Evaluation, CheckError> {
    let global = model.global();
    let preimage = |v: &ExtendedReal| model.preimage(v);
    let mut pointwise = Vec::with_capacity(model.space().len());
    let mut point_hyps = Vec::with_capacity(model.space().len());
    for x in 0..model.space().len() {
        let local = model.local(&x)?;
        let mut mask = 0;
        for c in Condition::ALL.into_iter().filter(|c| !c.is_global_only()) {
            if decide_local(c, &local, global, &preimage)?.0 {
                mask |= cond_bit(c);
            }
        }
        pointwise.push(mask);
        point_hyps.push(atom_mask(&conditions::hypotheses_at(&local, global)));
    }
    let mut global_mask = pointwise.iter().fold(u32::MAX, |acc, m| acc & m);
    global_mask &= !(cond_bit(Condition::UBLSCA) | cond_bit(Condition::UBSLSCA));
    if decide_uniform(model)?.0 {
        global_mask |= cond_bit(Condition::UBLSCA) | cond_bit(Condition::UBSLSCA);
    }
    let argmin = model.argmin();
    Ok(Evaluation {
        id,
        names: model.space().names().to_vec(),
        pointwise,
        point_hyps,
        global: global_mask,
        global_hyps: atom_mask(&conditions::global_hypotheses(global)),
        argmin_nonempty: argmin != 0,
        argmin_closed: model.space().is_closed(argmin),
    })
}

/// Seeded reachability for every hypothesis subset, as condition bitmasks.
struct ReachTable {
    reach: Vec<[u32; N]>,
}

impl ReachTable {
    fn new(graph: &Graph, scope: Scope) -> Self {
        let reach = (0..1usize << Atom::ALL.len())
            .map(|mask| {
                let h = mask_atoms(mask);
                let mut row = [0u32; N];
                for a in Condition::ALL {
                    if let Ok(set) = graph.closure(a, &h, scope) {
                        row[a as usize] = set.iter().fold(0, |acc, &b| acc | cond_bit(b));
                    }
                }
                row
            })
            .collect();
        ReachTable { reach }
    }

    fn get(&self, hyps: usize, a: Condition) -> u32 {
        self.reach[hyps][a as usize]
    }
}

/// A seeded implication whose guards the model satisfies but whose verdicts disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeViolation {
    pub model: String,
    pub point: Option<String>,
    pub source: Condition,
    pub target: Condition,
    pub hypotheses: String,
}

/// A model (and point, for pointwise scope) where `source` holds and `target` fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub model: String,
    pub point: Option<String>,
}

/// One row of a separation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRow {
    pub source: Condition,
    pub target: Condition,
    /// Seeded-derivable with no hypotheses.
    pub derivable: bool,
    pub witness: Option<Separation>,
    /// Why no finite model separates the pair, for non-derivable unseparated pairs.
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub n_max: usize,
    pub grid: Vec<ExtendedReal>,
    pub topologies: usize,
    pub models: usize,
    pub points: usize,
    pub bridge_violations: Vec<BridgeViolation>,
    /// Models where TWLC-everywhere and "argmin nonempty" disagree.
    pub twlc_attainment_exceptions: Vec<String>,
    /// Models where TLC-everywhere and "argmin closed and nonempty" disagree.
    pub tlc_attainment_exceptions: Vec<String>,
    pub pointwise: Vec<PairRow>,
    pub global: Vec<PairRow>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.bridge_violations.is_empty()
            && self.twlc_attainment_exceptions.is_empty()
            && self.tlc_attainment_exceptions.is_empty()
            && self.separation_contradictions().is_empty()
    }

    /// Separated pairs that are nevertheless derivable: soundness bugs, never findings.
    pub fn separation_contradictions(&self) -> Vec<&PairRow> {
        self.pointwise.iter().chain(&self.global).filter(|r| r.derivable && r.witness.is_some()).collect()
    }

    pub fn row(&self, scope: Scope, source: Condition, target: Condition) -> Option<&PairRow> {
        let rows = match scope {
            Scope::Pointwise => &self.pointwise,
            Scope::Global => &self.global,
        };
        rows.iter().find(|r| r.source == source && r.target == target)
    }

    /// Tabular text: summary block, then one line per ordered pair and scope.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "sweep n_max={} grid={}", self.n_max, format_grid(&self.grid)).unwrap();
        writeln!(out, "topologies: {}  models: {}  points: {}", self.topologies, self.models, self.points).unwrap();
        writeln!(out, "bridge violations: {}", self.bridge_violations.len()).unwrap();
        for v in &self.bridge_violations {
            let at = v.point.as_deref().map(|p| format!(" at {p}")).unwrap_or_default();
            writeln!(out, "  {}{at}: {} holds, {} fails under {}", v.model, v.source, v.target, v.hypotheses).unwrap();
        }
        writeln!(out, "TWLC everywhere <=> argmin nonempty: {} exceptions", self.twlc_attainment_exceptions.len())
            .unwrap();
        writeln!(
            out,
            "TLC everywhere <=> argmin closed and nonempty: {} exceptions",
            self.tlc_attainment_exceptions.len()
        )
        .unwrap();
        for id in self.twlc_attainment_exceptions.iter().chain(&self.tlc_attainment_exceptions) {
            writeln!(out, "  {id}").unwrap();
        }
        writeln!(out, "derivable pairs separated by a model: {}", self.separation_contradictions().len()).unwrap();
        for (title, rows) in [("pointwise", &self.pointwise), ("global", &self.global)] {
            let separated = rows.iter().filter(|r| r.witness.is_some()).count();
            writeln!(out, "\n[{title} separation] {separated} of {} pairs separated", rows.len()).unwrap();
            writeln!(out, "{:<8} {:<8} {:<9} witness", "source", "target", "derivable").unwrap();
            for r in rows {
                let witness = match &r.witness {
                    Some(Separation { model, point: Some(p) }) => format!("{model} at {p}"),
                    Some(Separation { model, point: None }) => model.clone(),
                    None => "none".to_string(),
                };
                let derivable = if r.derivable { "yes" } else { "no" };
                writeln!(out, "{:<8} {:<8} {:<9} {witness}", r.source.name(), r.target.name(), derivable).unwrap();
            }
            writeln!(out, "\n[{title} pairs not separated by finite models]").unwrap();
            for r in rows.iter().filter(|r| r.reason.is_some()) {
                writeln!(out, "{:<8} {:<8} {}", r.source.name(), r.target.name(), r.reason.as_deref().unwrap_or(""))
                    .unwrap();
            }
        }
        out
    }
}

/// What one block of models contributes to a [`SweepReport`].
struct Partial {
    models: usize,
    points: usize,
    bridge: Vec<BridgeViolation>,
    twlc: Vec<String>,
    tlc: Vec<String>,
    pointwise: Vec<Option<Separation>>,
    global: Vec<Option<Separation>>,
    /// Conditions failing somewhere, per scope.
    ever_fails: [u32; 2],
}

impl Partial {
    fn empty() -> Self {
        Partial {
            models: 0,
            points: 0,
            bridge: Vec::new(),
            twlc: Vec::new(),
            tlc: Vec::new(),
            pointwise: vec![None; N * N],
            global: vec![None; N * N],
            ever_fails: [0; 2],
        }
    }

    /// Appends `later`, which covers models after all of `self`'s.
    fn merge(mut self, later: Partial) -> Partial {
        self.models += later.models;
        self.points += later.points;
        self.bridge.extend(later.bridge);
        self.twlc.extend(later.twlc);
        self.tlc.extend(later.tlc);
        for (mine, theirs) in self.pointwise.iter_mut().zip(later.pointwise) {
            if mine.is_none() {
                *mine = theirs;
            }
        }
        for (mine, theirs) in self.global.iter_mut().zip(later.global) {
            if mine.is_none() {
                *mine = theirs;
            }
        }
        self.ever_fails[0] |= later.ever_fails[0];
        self.ever_fails[1] |= later.ever_fails[1];
        self
    }

    fn add(&mut self, e: &Evaluation, pointwise: &ReachTable, global: &ReachTable) {
        let id = e.id.to_string();
        self.models += 1;
        self.points += e.pointwise.len();
        let pointwise_conds = Condition::ALL.into_iter().filter(|c| !c.is_global_only());
        let all_pointwise = pointwise_conds.clone().fold(0, |acc, c| acc | cond_bit(c));
        for (x, (&v, &h)) in e.pointwise.iter().zip(&e.point_hyps).enumerate() {
            let point = Some(e.names[x].clone());
            self.ever_fails[0] |= all_pointwise & !v;
            self.scan(&id, point, v, h, pointwise, Scope::Pointwise);
        }
        self.ever_fails[1] |= !e.global & ((1 << N) - 1);
        self.scan(&id, None, e.global, e.global_hyps, global, Scope::Global);
        let twlc = e.global & cond_bit(Condition::TWLC) != 0;
        if twlc != e.argmin_nonempty {
            self.twlc.push(id.clone());
        }
        let tlc = e.global & cond_bit(Condition::TLC) != 0;
        if tlc != (e.argmin_nonempty && e.argmin_closed) {
            self.tlc.push(id);
        }
    }

    fn scan(&mut self, id: &str, point: Option<String>, verdicts: u32, hyps: usize, reach: &ReachTable, scope: Scope) {
        let matrix = match scope {
            Scope::Pointwise => &mut self.pointwise,
            Scope::Global => &mut self.global,
        };
        for a in Condition::ALL.into_iter().filter(|&a| verdicts & cond_bit(a) != 0) {
            let broken = reach.get(hyps, a) & !verdicts;
            for b in Condition::ALL.into_iter().filter(|&b| broken & cond_bit(b) != 0) {
                self.bridge.push(BridgeViolation {
                    model: id.to_string(),
                    point: point.clone(),
                    source: a,
                    target: b,
                    hypotheses: mask_atoms(hyps).to_string(),
                });
            }
            for b in Condition::ALL.into_iter().filter(|&b| verdicts & cond_bit(b) == 0) {
                if scope == Scope::Pointwise && b.is_global_only() {
                    continue;
                }
                let cell = &mut matrix[a as usize * N + b as usize];
                if cell.is_none() {
                    *cell = Some(Separation { model: id.to_string(), point: point.clone() });
                }
            }
        }
    }
}

/// Conditions that collapse to LSC on finite spaces because constant sequences at
/// neighbours converge and qualify as decreasing.
const COLLAPSE_TO_LSC: [Condition; 4] = [Condition::SLSC, Condition::SM, Condition::LM, Condition::LSCA];

fn unseparated_reason(graph: &Graph, scope: Scope, a: Condition, b: Condition, fails: u32) -> String {
    let derivable = |atoms: &[Atom]| {
        graph.closure(a, &HypothesisSet::from_atoms(atoms.iter().copied()), scope).is_ok_and(|s| s.contains(&b))
    };
    if derivable(&[Atom::N1]) {
        return "derivable under N1; finite spaces are first countable".to_string();
    }
    if scope == Scope::Global && derivable(&[Atom::N1, Atom::ConvMinSeq]) {
        return "derivable under N1 and conv-min-seq; finite models attain the infimum, so a minimizing \
                sequence converges"
            .to_string();
    }
    if fails & cond_bit(b) == 0 {
        return match b {
            Condition::DSC | Condition::SDSC => format!(
                "{b} holds on every finite model: a finite image admits no infinite strictly decreasing value sequence"
            ),
            Condition::QRGI | Condition::SQRGI => {
                format!("{b} holds on every finite model: a minimal neighbourhood reaching inf f meets the argmin")
            }
            Condition::TWLC | Condition::STWLC => {
                format!("{b} holds on every finite model: finite models attain the infimum")
            }
            _ => format!("{b} holds on every swept model"),
        };
    }
    if COLLAPSE_TO_LSC.contains(&a) {
        return format!("{a} is as strong as LSC on finite spaces: constant sequences at neighbours converge");
    }
    "no separating model within the sweep bounds".to_string()
}

fn rows(graph: &Graph, scope: Scope, matrix: Vec<Option<Separation>>, fails: u32) -> Vec<PairRow> {
    let none = HypothesisSet::empty();
    let mut out = Vec::new();
    let mut matrix = matrix.into_iter();
    for a in Condition::ALL {
        let reach = graph.closure(a, &none, scope).unwrap_or_default();
        for b in Condition::ALL {
            let witness = matrix.next().expect("N * N cells");
            if a == b || (scope == Scope::Pointwise && (a.is_global_only() || b.is_global_only())) {
                continue;
            }
            let derivable = reach.contains(&b);
            let reason = (!derivable && witness.is_none()).then(|| unseparated_reason(graph, scope, a, b, fails));
            out.push(PairRow { source: a, target: b, derivable, witness, reason });
        }
    }
    out
}

/// Sweeps every model with at most `n_max` points and values in `grid`.
pub fn sweep(graph: &Graph, n_max: usize, grid: &[ExtendedReal]) -> Result<SweepReport, ParseError> {
    check_bounds(n_max, SWEEP_MAX_POINTS, grid)?;
    let pointwise = ReachTable::new(graph, Scope::Pointwise);
    let global = ReachTable::new(graph, Scope::Global);
    let mut blocks: Vec<(usize, usize, Arc<FiniteSpace>)> = Vec::new();
    for n in 1..=n_max {
        for (t, space) in enumerate_spaces(n)?.into_iter().enumerate() {
            blocks.push((n, t, Arc::new(space)));
        }
    }
    let partials: Vec<Partial> = blocks
        .par_iter()
        .map(|(n, t, space)| -> Result<Partial, ParseError> {
            let mut partial = Partial::empty();
            for f in 0..function_count(grid, *n) {
                let id = ModelId { points: *n, topology: *t, function: f };
                let model = FiniteModel::new(space.clone(), function_values(grid, *n, f))?;
                let e = evaluate(id, &model).map_err(|e| ParseError::new(format!("{id}: {e}")))?;
                partial.add(&e, &pointwise, &global);
            }
            Ok(partial)
        })
        .collect::<Result<_, _>>()?;
    let total = partials.into_iter().fold(Partial::empty(), Partial::merge);
    Ok(SweepReport {
        n_max,
        grid: grid.to_vec(),
        topologies: blocks.len(),
        models: total.models,
        points: total.points,
        bridge_violations: total.bridge,
        twlc_attainment_exceptions: total.twlc,
        tlc_attainment_exceptions: total.tlc,
        pointwise: rows(graph, Scope::Pointwise, total.pointwise, total.ever_fails[0]),
        global: rows(graph, Scope::Global, total.global, total.ever_fails[1]),
    })
}

/// A reduced verdict that differs from the literal one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub model: String,
    pub point: Option<String>,
    pub condition: Condition,
    pub reduced: bool,
    pub literal: bool,
}

/// Agreement counts for one equivalent characterization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropositionTally {
    pub name: &'static str,
    pub checks: usize,
    /// `model` or `model at point` for each disagreement.
    pub disagreements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossReport {
    pub n_max: usize,
    pub grid: Vec<ExtendedReal>,
    pub topologies: usize,
    pub models: usize,
    pub verdicts: usize,
    pub mismatches: Vec<Mismatch>,
    pub propositions: Vec<PropositionTally>,
}

impl CrossReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.propositions.iter().all(|p| p.disagreements.is_empty())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "cross-validation n_max={} grid={}", self.n_max, format_grid(&self.grid)).unwrap();
        writeln!(out, "topologies: {}  models: {}  verdicts compared: {}", self.topologies, self.models, self.verdicts)
            .unwrap();
        writeln!(out, "mismatches: {}", self.mismatches.len()).unwrap();
        for m in &self.mismatches {
            let at = m.point.as_deref().map(|p| format!(" at {p}")).unwrap_or_default();
            writeln!(out, "  {}{at}: {} reduced={} literal={}", m.model, m.condition, m.reduced, m.literal).unwrap();
        }
        for p in &self.propositions {
            writeln!(out, "{}: {} checks, {} disagreements", p.name, p.checks, p.disagreements.len()).unwrap();
            for d in &p.disagreements {
                writeln!(out, "  {d}").unwrap();
            }
        }
        out
    }
}

const PROPOSITIONS: [&str; 4] = ["check_twlc_equivalences", "check_lpc_levelsets", "check_rgi_char", "check_qrgi_char"];

struct CrossPartial {
    models: usize,
    verdicts: usize,
    mismatches: Vec<Mismatch>,
    props: [(usize, Vec<String>); 4],
}

impl CrossPartial {
    fn empty() -> Self {
        CrossPartial { models: 0, verdicts: 0, mismatches: Vec::new(), props: Default::default() }
    }

    fn merge(mut self, later: CrossPartial) -> CrossPartial {
        self.models += later.models;
        self.verdicts += later.verdicts;
        self.mismatches.extend(later.mismatches);
        for (mine, theirs) in self.props.iter_mut().zip(later.props) {
            mine.0 += theirs.0;
            mine.1.extend(theirs.1);
        }
        self
    }

    fn add(&mut self, id: ModelId, model: &FiniteModel) -> Result<(), CheckError> {
        let lit = Literal::new(model);
        let names = model.space().names();
        self.models += 1;
        let mut tally = |slot: usize, ok: bool, what: String| {
            self.props[slot].0 += 1;
            if !ok {
                self.props[slot].1.push(what);
            }
        };
        let levels = check_lpc_levelsets(model)?;
        tally(1, levels.agrees(), id.to_string());
        for (x, name) in names.iter().enumerate() {
            let at = format!("{id} at {name}");
            let twlc = check_twlc_equivalences(model, x)?;
            tally(0, twlc.iter().all(|&b| b == twlc[0]), at.clone());
            tally(2, check_rgi_char(model, x)?.agrees(), at.clone());
            tally(3, check_qrgi_char(model, x)?.agrees(), at);
        }
        for c in Condition::ALL {
            let mut compare = |point: Option<usize>, reduced: bool, literal: bool| {
                self.verdicts += 1;
                if reduced != literal {
                    self.mismatches.push(Mismatch {
                        model: id.to_string(),
                        point: point.map(|x| names[x].clone()),
                        condition: c,
                        reduced,
                        literal,
                    });
                }
            };
            if !c.is_global_only() {
                for x in 0..names.len() {
                    compare(Some(x), conditions::check_at(c, model, &x)?.holds, lit.at(c, x));
                }
            }
            compare(None, conditions::check_global(c, model)?.holds, lit.global(c));
        }
        Ok(())
    }
}

/// Compares every reduced verdict with the literal oracle on all models with at most
/// `n_max` points, and tallies the characterization checks.
pub fn cross_validate(n_max: usize, grid: &[ExtendedReal]) -> Result<CrossReport, ParseError> {
    cross_validate_with(n_max, grid, None)
}

/// [`cross_validate`] with a deliberate bug injected into the reduced checkers.
pub fn cross_validate_with(
    n_max: usize,
    grid: &[ExtendedReal],
    fault: Option<LiminfFault>,
) -> Result<CrossReport, ParseError> {
    check_bounds(n_max, CROSS_MAX_POINTS, grid)?;
    let mut blocks: Vec<(usize, usize, Arc<FiniteSpace>)> = Vec::new();
    for n in 1..=n_max {
        for (t, space) in enumerate_spaces(n)?.into_iter().enumerate() {
            blocks.push((n, t, Arc::new(space)));
        }
    }
    let partials: Vec<CrossPartial> = blocks
        .par_iter()
        .map(|(n, t, space)| -> Result<CrossPartial, ParseError> {
            let mut partial = CrossPartial::empty();
            for f in 0..function_count(grid, *n) {
                let id = ModelId { points: *n, topology: *t, function: f };
                let mut model = FiniteModel::new(space.clone(), function_values(grid, *n, f))?;
                if let Some(fault) = fault {
                    model = model.with_fault(fault);
                }
                partial.add(id, &model).map_err(|e| ParseError::new(format!("{id}: {e}")))?;
            }
            Ok(partial)
        })
        .collect::<Result<_, _>>()?;
    let total = partials.into_iter().fold(CrossPartial::empty(), CrossPartial::merge);
    let propositions = PROPOSITIONS
        .iter()
        .zip(total.props)
        .map(|(name, (checks, disagreements))| PropositionTally { name, checks, disagreements })
        .collect();
    Ok(CrossReport {
        n_max,
        grid: grid.to_vec(),
        topologies: blocks.len(),
        models: total.models,
        verdicts: total.verdicts,
        mismatches: total.mismatches,
        propositions,
    })
}
