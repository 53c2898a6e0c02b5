//! Breadth-first closure over guarded edges, derivations, and refutation lookup.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::{Atom, Edge, Graph, HypothesisSet, Refutation, Scope};
use crate::conditions::Condition;
use crate::error::NameError;

/// One edge of a derivation, with the atoms that satisfied its guard.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub edge: Edge,
    pub satisfied_by: Vec<Atom>,
}

/// A path of guarded edges from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub source: Condition,
    pub target: Condition,
    pub scope: Scope,
    pub hypotheses: HypothesisSet,
    pub steps: Vec<Step>,
}

impl Derivation {
    /// Replays the path against `graph` without trusting the search that built it.
    pub fn verify(&self, graph: &Graph) -> Result<(), String> {
        let mut at = self.source;
        for (i, s) in self.steps.iter().enumerate() {
            let e = &s.edge;
            if e.source != at {
                return Err(format!("step {i} starts at {} but the path is at {at}", e.source));
            }
            if !graph.edges().contains(e) {
                return Err(format!("step {i} ({e}) is not a seeded edge"));
            }
            if !e.in_scope(self.scope) {
                return Err(format!("step {i} ({e}) does not apply in {} scope", self.scope));
            }
            if !e.guard.satisfied_by(&self.hypotheses) {
                return Err(format!("step {i} ({e}) needs {} beyond {}", e.guard, self.hypotheses));
            }
            if e.guard.witnesses(&self.hypotheses).as_ref() != Some(&s.satisfied_by) {
                return Err(format!("step {i} ({e}) records the wrong guard witnesses"));
            }
            at = e.target;
        }
        if at != self.target {
            return Err(format!("path ends at {at}, not {}", self.target));
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "{} => {} (reflexive)", self.source, self.target);
        }
        let mut chain = vec![self.source.to_string()];
        chain.extend(self.steps.iter().map(|s| s.edge.target.to_string()));
        writeln!(f, "{}", chain.join(" -> "))?;
        for s in &self.steps {
            write!(f, "  {}", s.edge)?;
            if !s.satisfied_by.is_empty() {
                let names: Vec<&str> = s.satisfied_by.iter().map(|a| a.name()).collect();
                write!(f, " using {}", names.join(", "))?;
            }
            writeln!(f, ": {}", s.edge.provenance)?;
        }
        Ok(())
    }
}

/// Answer to an implication query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "result")]
pub enum Outcome {
    Derivable { derivation: Derivation },
    NotDerivable { refutation: Option<Refutation> },
}

impl Outcome {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Outcome::Derivable { .. })
    }

    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            Outcome::Derivable { derivation } => Some(derivation),
            Outcome::NotDerivable { .. } => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Outcome::NotDerivable { refutation } => refutation.as_ref(),
            Outcome::Derivable { .. } => None,
        }
    }
}

fn check_scope(c: Condition, scope: Scope) -> Result<(), NameError> {
    if scope == Scope::Pointwise && c.is_global_only() {
        return Err(NameError::NotPointwise(c.name().to_string()));
    }
    Ok(())
}

impl Graph {
    /// Breadth-first search; parents are recorded in table order so paths are deterministic.
    fn search(&self, source: Condition, h: &HypothesisSet, scope: Scope) -> Vec<Option<usize>> {
        let edges: Vec<(usize, &Edge)> =
            self.edges().iter().enumerate().filter(|(_, e)| e.in_scope(scope) && e.guard.satisfied_by(h)).collect();
        let mut parent: Vec<Option<usize>> = vec![None; Condition::ALL.len()];
        let mut seen = [false; 27];
        seen[source as usize] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(c) = queue.pop_front() {
            for &(i, e) in edges.iter().filter(|(_, e)| e.source == c) {
                let t = e.target as usize;
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some(i);
                    queue.push_back(e.target);
                }
            }
        }
        parent
    }

    /// Every condition derivable from `source` (including itself).
    pub fn closure(
        &self,
        source: Condition,
        h: &HypothesisSet,
        scope: Scope,
    ) -> Result<BTreeSet<Condition>, NameError> {
        check_scope(source, scope)?;
        Ok(self.reach(source, h, scope))
    }

    fn reach(&self, source: Condition, h: &HypothesisSet, scope: Scope) -> BTreeSet<Condition> {
        let parent = self.search(source, h, scope);
        Condition::ALL.iter().copied().filter(|&c| c == source || parent[c as usize].is_some()).collect()
    }

    /// A derivation of `target` from `source`, if one exists.
    pub fn derive(
        &self,
        source: Condition,
        target: Condition,
        h: &HypothesisSet,
        scope: Scope,
    ) -> Result<Option<Derivation>, NameError> {
        check_scope(source, scope)?;
        check_scope(target, scope)?;
        let mk = |steps| Derivation { source, target, scope, hypotheses: h.clone(), steps };
        if source == target {
            return Ok(Some(mk(Vec::new())));
        }
        let parent = self.search(source, h, scope);
        let mut steps = Vec::new();
        let mut at = target;
        while at != source {
            let Some(i) = parent[at as usize] else { return Ok(None) };
            let edge = self.edges()[i].clone();
            let satisfied_by = edge.guard.witnesses(h).expect("guard satisfied during search");
            at = edge.source;
            steps.push(Step { edge, satisfied_by });
        }
        steps.reverse();
        Ok(Some(mk(steps)))
    }

    /// Whether `record` shows `target` does not follow from `source` under `h`: its model
    /// satisfies `h`, satisfies `source` (reachable from the record's source) and fails
    /// `target` (from which the record's target is reachable).
    pub fn refutes(
        &self,
        record: &Refutation,
        source: Condition,
        target: Condition,
        h: &HypothesisSet,
        scope: Scope,
    ) -> bool {
        let Some(ctx) = record.context(scope) else { return false };
        if !h.is_subset(ctx) {
            return false;
        }
        if scope == Scope::Pointwise && (source.is_global_only() || target.is_global_only()) {
            return false;
        }
        self.reach(record.source, ctx, scope).contains(&source)
            && self.reach(target, ctx, scope).contains(&record.target)
    }

    /// The first record refuting the pair; a record for exactly this pair wins over
    /// records that refute it through the diagram.
    pub fn find_refutation<'a>(
        &self,
        records: &'a [Refutation],
        source: Condition,
        target: Condition,
        h: &HypothesisSet,
        scope: Scope,
    ) -> Option<&'a Refutation> {
        let direct = records
            .iter()
            .filter(|r| r.source == source && r.target == target)
            .find(|r| self.refutes(r, source, target, h, scope));
        direct.or_else(|| records.iter().find(|r| self.refutes(r, source, target, h, scope)))
    }

    /// Answers `source => target` under `h`, attaching a refutation on failure.
    pub fn implies(
        &self,
        source: Condition,
        target: Condition,
        h: &HypothesisSet,
        scope: Scope,
        records: &[Refutation],
    ) -> Result<Outcome, NameError> {
        Ok(match self.derive(source, target, h, scope)? {
            Some(derivation) => Outcome::Derivable { derivation },
            None => {
                Outcome::NotDerivable { refutation: self.find_refutation(records, source, target, h, scope).cloned() }
            }
        })
    }
}
