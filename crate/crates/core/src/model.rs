//! The contract between model backends and the condition checkers.
//!
//! A backend reduces the neighbourhood filter of a point to a [`LocalData`]
//! summary. The checkers only ever look at that summary and at [`GlobalData`],
//! so every reduction lives in exactly one place per backend.

use serde::Serialize;

use crate::error::CheckError;
use crate::extreal::{ExtendedReal, ValueSet};

/// How the values of a monotone approach reach their limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproachKind {
    /// Constant values along a non-trivial net (e.g. a constant sequence at a neighbour).
    Plateau,
    /// Strictly decreasing values tending to the limit from above.
    Descending,
}

/// A family of non-trivial decreasing nets converging to the point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Approach {
    pub limit: ExtendedReal,
    pub kind: ApproachKind,
    /// Human-readable presentation, e.g. `x_n = -1/n`.
    pub path: String,
}

impl Approach {
    /// Whether some net of this family stays at or below the threshold `a`.
    pub fn eligible_below(&self, a: &ExtendedReal) -> bool {
        match self.kind {
            ApproachKind::Plateau => self.limit <= *a,
            ApproachKind::Descending => self.limit < *a,
        }
    }
}

/// Values `c` for which some neighbourhood `U` has `c < f(z)` for all `z` in `U`:
/// exactly `c < value`, or also `c = value` when `inclusive`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: ExtendedReal,
    pub inclusive: bool,
    /// An approach along which the bound is realized.
    pub path: Option<String>,
}

/// Everything the checkers need to know about a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalData {
    pub point: String,
    pub value: ExtendedReal,
    /// Non-punctured liminf: sup over neighbourhoods of the inf over the neighbourhood.
    pub liminf: ExtendedReal,
    /// Whether some neighbourhood `U` has `inf_U f` equal to the liminf.
    pub liminf_attained: bool,
    /// An approach realizing the liminf.
    pub liminf_path: Option<String>,
    pub transfer: Bound,
    /// Non-trivial decreasing nets converging to the point, grouped by limit behaviour.
    pub approaches: Vec<Approach>,
    /// Whether the point lies in the closure of the argmin.
    pub near_argmin: bool,
    /// Whether the point is isolated in the domain.
    pub isolated: bool,
}

/// Whole-model facts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalData {
    pub image: ValueSet,
    pub inf: ExtendedReal,
    pub inf_attained: bool,
    pub first_countable: bool,
    /// Some minimizing sequence converges.
    pub converging_min_seq: bool,
}

/// Points whose verdicts decide every global verdict.
#[derive(Clone, Debug)]
pub struct Cover<P> {
    pub points: Vec<P>,
    /// Infimum of violating approach limits over points not listed (an infinite uniform tail).
    pub tail_floor: Option<ExtendedReal>,
    /// Why the listed points suffice, when that is not simply "all points".
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Finite,
    Piecewise,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Finite => "finite",
            Backend::Piecewise => "piecewise",
        }
    }

    /// One-line description of the reduction used to build [`LocalData`].
    pub fn reduction(self) -> &'static str {
        match self {
            Backend::Finite => "minimal open neighbourhood reduction",
            Backend::Piecewise => "one-sided germ analysis",
        }
    }
}

/// A model that can be checked.
pub trait Model {
    type Point: Clone;

    fn backend(&self) -> Backend;
    fn global(&self) -> &GlobalData;
    fn local(&self, x: &Self::Point) -> Result<LocalData, CheckError>;
    fn cover(&self) -> Cover<Self::Point>;
    fn parse_point(&self, s: &str) -> Result<Self::Point, CheckError>;
    fn point_name(&self, x: &Self::Point) -> String;
    /// Some point taking the value `v`, for witnesses.
    fn preimage(&self, v: &ExtendedReal) -> Option<String>;
}
