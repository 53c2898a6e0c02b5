//! Hypothesis atoms, hypothesis sets, and edge guards.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::NameError;

/// A side condition under which an edge is valid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Atom {
    /// The space is first countable.
    N1,
    /// No jump at `f(x)` (pointwise) or no jumps at all (global).
    NoJump,
    /// A minimizing sequence converges (to `x`, pointwise).
    ConvMinSeq,
    /// A minimizing net converges (to `x`, pointwise).
    ConvMinNet,
    EmptyArgmin,
}

impl Atom {
    pub const ALL: [Atom; 5] = [Atom::N1, Atom::NoJump, Atom::ConvMinSeq, Atom::ConvMinNet, Atom::EmptyArgmin];

    pub fn name(self) -> &'static str {
        match self {
            Atom::N1 => "N1",
            Atom::NoJump => "no-jump",
            Atom::ConvMinSeq => "conv-min-seq",
            Atom::ConvMinNet => "conv-min-net",
            Atom::EmptyArgmin => "empty-argmin",
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Atom {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let norm = t.to_ascii_lowercase().replace('_', "-");
        Atom::ALL
            .iter()
            .copied()
            .find(|a| a.name().eq_ignore_ascii_case(&norm))
            .or(match norm.as_str() {
                "no-jumps" => Some(Atom::NoJump),
                _ => None,
            })
            .ok_or_else(|| NameError::Atom(t.to_string()))
    }
}

/// A set of active hypotheses, always saturated: a convergent minimizing sequence is a
/// convergent minimizing net, and under N1 a convergent minimizing net yields a sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HypothesisSet(BTreeSet<Atom>);

impl HypothesisSet {
    pub fn empty() -> Self {
        HypothesisSet::default()
    }

    pub fn from_atoms<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        let mut set: BTreeSet<Atom> = atoms.into_iter().collect();
        if set.contains(&Atom::ConvMinSeq) {
            set.insert(Atom::ConvMinNet);
        }
        if set.contains(&Atom::N1) && set.contains(&Atom::ConvMinNet) {
            set.insert(Atom::ConvMinSeq);
        }
        HypothesisSet(set)
    }

    /// Parses a comma-separated list of atom names; the empty string is the empty set.
    pub fn parse_list(s: &str) -> Result<Self, NameError> {
        let atoms = s
            .split([',', '+'])
            .map(str::trim)
            .filter(|t| !t.is_empty() && *t != "-")
            .map(str::parse)
            .collect::<Result<Vec<Atom>, _>>()?;
        Ok(HypothesisSet::from_atoms(atoms))
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.0.contains(&a)
    }

    pub fn is_subset(&self, other: &HypothesisSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &HypothesisSet) -> HypothesisSet {
        HypothesisSet::from_atoms(self.atoms().chain(other.atoms()))
    }
}

impl fmt::Display for HypothesisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        let names: Vec<&str> = self.0.iter().map(|a| a.name()).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

/// An edge guard in conjunctive normal form: every clause needs one of its atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Guard {
    clauses: Vec<Vec<Atom>>,
    /// The label as written, e.g. `N1*`.
    label: Option<String>,
}

impl Guard {
    pub fn none() -> Self {
        Guard::default()
    }

    pub fn all_of<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        Guard { clauses: atoms.into_iter().map(|a| vec![a]).collect(), label: None }
    }

    /// `N1*`, satisfiable by either N1 or a convergent minimizing sequence.
    pub fn n1_star() -> Self {
        Guard { clauses: vec![vec![Atom::N1, Atom::ConvMinSeq]], label: Some("N1*".into()) }
    }

    pub fn is_trivial(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clauses(&self) -> &[Vec<Atom>] {
        &self.clauses
    }

    pub fn satisfied_by(&self, h: &HypothesisSet) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|a| h.contains(*a)))
    }

    /// For each clause, the first atom of `h` that satisfies it.
    pub fn witnesses(&self, h: &HypothesisSet) -> Option<Vec<Atom>> {
        self.clauses.iter().map(|c| c.iter().copied().find(|a| h.contains(*a))).collect()
    }

    /// Every atom mentioned anywhere in the guard.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.clauses.iter().flatten().copied().collect()
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            return f.write_str(l);
        }
        if self.clauses.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> =
            self.clauses.iter().map(|c| c.iter().map(|a| a.name()).collect::<Vec<_>>().join("|")).collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for Guard {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t == "-" {
            return Ok(Guard::none());
        }
        let mut clauses = Vec::new();
        let mut starred = false;
        for conj in t.split('+') {
            let mut clause = Vec::new();
            for alt in conj.split('|') {
                let alt = alt.trim();
                if alt.eq_ignore_ascii_case("N1*") {
                    starred = true;
                    clause.extend([Atom::N1, Atom::ConvMinSeq]);
                } else {
                    clause.push(alt.parse()?);
                }
            }
            clause.sort();
            clause.dedup();
            clauses.push(clause);
        }
        let label = (starred && t.eq_ignore_ascii_case("N1*")).then(|| "N1*".to_string());
        Ok(Guard { clauses, label })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation() {
        let h = HypothesisSet::from_atoms([Atom::ConvMinSeq]);
        assert!(h.contains(Atom::ConvMinNet));
        let h = HypothesisSet::from_atoms([Atom::N1, Atom::ConvMinNet]);
        assert!(h.contains(Atom::ConvMinSeq));
        let h = HypothesisSet::from_atoms([Atom::ConvMinNet]);
        assert!(!h.contains(Atom::ConvMinSeq));
    }

    #[test]
    fn guard_parsing() {
        let g: Guard = "N1*".parse().unwrap();
        assert_eq!(g.to_string(), "N1*");
        assert!(g.satisfied_by(&HypothesisSet::from_atoms([Atom::N1])));
        assert!(g.satisfied_by(&HypothesisSet::from_atoms([Atom::ConvMinSeq])));
        assert!(!g.satisfied_by(&HypothesisSet::from_atoms([Atom::EmptyArgmin])));
        let g: Guard = "N1+no-jump".parse().unwrap();
        assert!(!g.satisfied_by(&HypothesisSet::from_atoms([Atom::N1])));
        assert_eq!(g.to_string(), "N1+no-jump");
        assert!("-".parse::<Guard>().unwrap().is_trivial());
        assert!("bogus".parse::<Guard>().is_err());
    }

    #[test]
    fn atom_names() {
        for a in Atom::ALL {
            assert_eq!(a.name().parse::<Atom>().unwrap(), a);
        }
        assert_eq!("n1".parse::<Atom>().unwrap(), Atom::N1);
        assert_eq!("no-jumps".parse::<Atom>().unwrap(), Atom::NoJump);
        let h = HypothesisSet::parse_list("N1, empty-argmin").unwrap();
        assert_eq!(h.to_string(), "{N1, empty-argmin}");
    }
}
