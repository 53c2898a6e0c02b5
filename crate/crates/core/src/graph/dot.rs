//! Deterministic Graphviz export.

use std::fmt::Write;

use super::{Graph, HypothesisSet, Scope};
use crate::conditions::Condition;

/// The diagram for `scope` as a DOT digraph. Nodes are sorted by name; edges whose
/// guards `h` does not satisfy are drawn dashed.
pub fn export_dot(graph: &Graph, scope: Scope, h: &HypothesisSet) -> String {
    let mut nodes: Vec<Condition> = Condition::ALL.to_vec();
    nodes.sort_by_key(|c| c.name());
    let mut edges: Vec<_> = graph.seed_edges(scope);
    edges.sort_by(|a, b| {
        (a.source.name(), a.target.name(), a.guard.to_string()).cmp(&(
            b.source.name(),
            b.target.name(),
            b.guard.to_string(),
        ))
    });
    let mut out = String::new();
    writeln!(out, "digraph {} {{", scope.name()).unwrap();
    writeln!(out, "  label=\"{} implications under {}\";", scope.name(), h).unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for c in &nodes {
        writeln!(out, "  \"{c}\" [tooltip=\"{}\"];", c.long_name()).unwrap();
    }
    for e in edges {
        let mut attrs = Vec::new();
        if !e.guard.is_trivial() {
            attrs.push(format!("label=\"{}\"", e.guard));
        }
        if !e.guard.satisfied_by(h) {
            attrs.push("style=dashed".to_string());
        }
        let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
        writeln!(out, "  \"{}\" -> \"{}\"{attrs};", e.source, e.target).unwrap();
    }
    out.push_str("}\n");
    out
}
