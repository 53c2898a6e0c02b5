//! The 27 conditions and their decision procedures.

mod decide;
mod props;

pub use decide::{check_all_at, check_at, check_global, decide_local, decide_uniform};
pub use props::{
    check_lpc_levelsets, check_plc_jump_char, check_qrgi_char, check_rgi_char, check_twlc_equivalences, CharPair,
};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::NameError;
use crate::extreal::ExtendedReal;
use crate::graph::{Atom, HypothesisSet};
use crate::model::{GlobalData, LocalData};

/// How a condition quantifies over the approach to a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    /// Neighbourhood (filter) quantifiers.
    Filter,
    Sequence,
    Net,
}

macro_rules! conditions {
    ($( $v:ident => $long:literal, $style:ident, $counter:expr; )*) => {
        /// One of the 27 conditions.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
        pub enum Condition { $($v,)* }

        impl Condition {
            pub const ALL: [Condition; 27] = [$(Condition::$v,)*];

            pub fn name(self) -> &'static str {
                match self { $(Condition::$v => stringify!($v),)* }
            }

            /// The full name from the definition.
            pub fn long_name(self) -> &'static str {
                match self { $(Condition::$v => $long,)* }
            }

            pub fn style(self) -> Style {
                match self { $(Condition::$v => Style::$style,)* }
            }

            /// The net or filter condition a sequential condition is equivalent to on
            /// first-countable spaces; `None` for non-sequential conditions.
            pub fn counterpart(self) -> Option<Condition> {
                use Condition::*;
                match self { $($v => $counter,)* }
            }
        }
    };
}

conditions! {
    LSC => "lower semi-continuous", Filter, None;
    SLSC => "sequentially lower semi-continuous", Sequence, Some(LSC);
    LPC => "lower pseudo-continuous", Filter, None;
    SLPC => "sequentially lower pseudo-continuous", Sequence, Some(LPC);
    WLC => "weakly lower continuous", Filter, None;
    SWLC => "sequentially weakly lower continuous", Sequence, Some(WLC);
    LQC => "lower quasi-continuous", Filter, None;
    SLQC => "sequentially lower quasi-continuous", Sequence, Some(LQC);
    PLC => "partially lower continuous", Filter, None;
    SPLC => "sequentially partially lower continuous", Sequence, Some(PLC);
    SM => "submonotone", Net, None;
    LM => "lower monotone", Sequence, Some(SM);
    LSCA => "lower semi-continuous from above", Sequence, Some(SM);
    DSC => "decreasing semi-continuous", Net, None;
    SDSC => "sequentially decreasing semi-continuous", Sequence, Some(DSC);
    RGI => "regular global infimum", Filter, None;
    ISLSC => "inf-sequentially lower semi-continuous", Sequence, Some(RGI);
    QRGI => "quasi-regular global infimum", Filter, None;
    SQRGI => "sequentially quasi-regular global infimum", Sequence, Some(QRGI);
    UBLSCA => "uniformly below lower semi-continuous from above", Net, None;
    UBSLSCA => "uniformly below sequentially lower semi-continuous from above", Sequence, Some(UBLSCA);
    BLSCA => "below lower semi-continuous from above", Net, None;
    BSLSCA => "below sequentially lower semi-continuous from above", Sequence, Some(BLSCA);
    TLC => "transfer lower continuous", Filter, None;
    STLC => "sequentially transfer lower continuous", Sequence, Some(TLC);
    TWLC => "transfer weakly lower continuous", Filter, None;
    STWLC => "sequentially transfer weakly lower continuous", Sequence, Some(TWLC);
}

impl Condition {
    /// UBLSCA and UBSLSCA only make sense for the function as a whole.
    pub fn is_global_only(self) -> bool {
        matches!(self, Condition::UBLSCA | Condition::UBSLSCA)
    }

    /// Where the condition is defined, for reports.
    pub fn anchor(self) -> String {
        format!("definition of {} ({})", self.long_name(), self.name())
    }

    /// The condition that is actually evaluated on first-countable backends.
    pub fn evaluated_as(self) -> Condition {
        self.counterpart().unwrap_or(self)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Condition::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| NameError::Condition(t.to_string()))
    }
}

/// The certificate deciding a quantifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Witness {
    /// A point `y` (for a violating or transferring value `f(y)`).
    Point { point: String, value: ExtendedReal },
    /// A value of `f` when no concrete preimage is reported.
    Value { value: ExtendedReal },
    /// A threshold `a` for the BLSCA family.
    Threshold { a: ExtendedReal },
    /// A convergent sequence or net presentation and its limiting value.
    Approach { path: String, limit: ExtendedReal },
    /// A neighbourhood claim, e.g. that every neighbourhood stays above the infimum.
    Neighbourhood { description: String },
    /// A point at which a global condition fails, with the local certificate.
    AtPoint { point: String, inner: Box<Witness> },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point { point, value } => write!(f, "y = {point} (f(y) = {value})"),
            Witness::Value { value } => write!(f, "value {value}"),
            Witness::Threshold { a } => write!(f, "a = {a}"),
            Witness::Approach { path, limit } => write!(f, "{path} (limit {limit})"),
            Witness::Neighbourhood { description } => f.write_str(description),
            Witness::AtPoint { point, inner } => write!(f, "at x = {point}: {inner}"),
        }
    }
}

/// A decided condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub condition: Condition,
    /// Point name, or `None` for a global verdict.
    pub point: Option<String>,
    pub holds: bool,
    pub witness: Option<Witness>,
    /// The reduction that produced the verdict.
    pub reduction: String,
}

/// Hypothesis atoms a model satisfies at a point (model-check side).
pub fn hypotheses_at(local: &LocalData, global: &GlobalData) -> HypothesisSet {
    let mut atoms = Vec::new();
    if global.first_countable {
        atoms.push(Atom::N1);
    }
    if !global.image.has_jump_at(&local.value) {
        atoms.push(Atom::NoJump);
    }
    if local.liminf == global.inf {
        // some minimizing net converges to the point; by N1 a sequence does too
        atoms.push(Atom::ConvMinNet);
        if global.first_countable {
            atoms.push(Atom::ConvMinSeq);
        }
    }
    if !global.inf_attained {
        atoms.push(Atom::EmptyArgmin);
    }
    HypothesisSet::from_atoms(atoms)
}

/// Hypothesis atoms a model satisfies as a whole (model-check side).
pub fn global_hypotheses(global: &GlobalData) -> HypothesisSet {
    let mut atoms = Vec::new();
    if global.first_countable {
        atoms.push(Atom::N1);
    }
    if global.image.jumps().is_empty() {
        atoms.push(Atom::NoJump);
    }
    if global.converging_min_seq {
        atoms.push(Atom::ConvMinSeq);
        atoms.push(Atom::ConvMinNet);
    }
    if !global.inf_attained {
        atoms.push(Atom::EmptyArgmin);
    }
    HypothesisSet::from_atoms(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        assert_eq!(Condition::ALL.len(), 27);
        for c in Condition::ALL {
            assert_eq!(c.name().parse::<Condition>().unwrap(), c);
        }
        assert_eq!("twlc".parse::<Condition>().unwrap(), Condition::TWLC);
        assert!("XYZ".parse::<Condition>().is_err());
    }

    #[test]
    fn exactly_two_global_only() {
        let g: Vec<_> = Condition::ALL.iter().filter(|c| c.is_global_only()).collect();
        assert_eq!(g, vec![&Condition::UBLSCA, &Condition::UBSLSCA]);
    }

    #[test]
    fn counterparts_are_not_sequential() {
        for c in Condition::ALL {
            if let Some(k) = c.counterpart() {
                assert_eq!(c.style(), Style::Sequence);
                assert_ne!(k.style(), Style::Sequence);
            }
        }
    }
}
