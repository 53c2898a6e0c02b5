//! Consistency audit: no refuted pair may be derivable, and every non-derivable pair of
//! the unguarded global diagram should be covered by some refutation.

use serde::Serialize;

use super::{Derivation, Graph, HypothesisSet, Refutation, Scope};
use crate::conditions::Condition;

/// A record whose refuted pair is nevertheless derivable under the record's own context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessViolation {
    pub record: String,
    pub scope: Scope,
    pub derivation: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub violations: Vec<SoundnessViolation>,
    /// Non-derivable pairs of the unguarded global diagram with no covering record.
    pub gaps: Vec<(Condition, Condition)>,
    pub pairs: usize,
    pub derivable: usize,
    pub covered: usize,
    /// Literature items the edge table fails to reproduce.
    pub literature_failures: Vec<u32>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.gaps.is_empty() && self.literature_failures.is_empty()
    }
}

/// Runs the full audit.
pub fn audit(graph: &Graph, records: &[Refutation]) -> AuditReport {
    let mut violations = Vec::new();
    for r in records {
        for scope in Scope::ALL {
            let Some(ctx) = r.context(scope) else { continue };
            if scope == Scope::Pointwise && (r.source.is_global_only() || r.target.is_global_only()) {
                continue;
            }
            if let Ok(Some(derivation)) = graph.derive(r.source, r.target, ctx, scope) {
                violations.push(SoundnessViolation { record: r.id.clone(), scope, derivation });
            }
        }
    }
    let none = HypothesisSet::empty();
    let (mut pairs, mut derivable, mut covered) = (0, 0, 0);
    let mut gaps = Vec::new();
    for a in Condition::ALL {
        let reach = graph.closure(a, &none, Scope::Global).expect("global scope accepts every condition");
        for b in Condition::ALL {
            if a == b {
                continue;
            }
            pairs += 1;
            if reach.contains(&b) {
                derivable += 1;
            } else if graph.find_refutation(records, a, b, &none, Scope::Global).is_some() {
                covered += 1;
            } else {
                gaps.push((a, b));
            }
        }
    }
    let literature_failures = graph
        .literature()
        .iter()
        .filter(|c| c.scopes.iter().any(|&s| !matches!(graph.derive(c.source, c.target, &c.guard, s), Ok(Some(_)))))
        .map(|c| c.item)
        .collect();
    AuditReport { violations, gaps, pairs, derivable, covered, literature_failures }
}
