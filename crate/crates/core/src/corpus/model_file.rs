//! The TOML model format shared by `check` and the corpus records.
//!
//! ```toml
//! kind = "finite"
//! points = ["a", "b"]
//! opens = [[], ["a"], ["a", "b"]]
//! values = { a = "0", b = "1" }
//! ```
//!
//! ```toml
//! kind = "piecewise"
//! domain = ["[-1,1]"]
//! [[pieces]]
//! interval = "[-1,0]"
//! kind = "constant"
//! coefficients = ["0"]
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::conditions::{self, Condition, Verdict};
use crate::error::{CheckError, ParseError};
use crate::extreal::{ExtendedReal, Interval};
use crate::graph::HypothesisSet;
use crate::model::{GlobalData, Model};
use crate::piecewise::{Expr, Piece, PiecewiseFn, Staircase};
use crate::topology::{FiniteModel, FiniteSpace};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub interval: String,
    pub kind: String,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaircaseSpec {
    pub start: u64,
    #[serde(default = "default_truncation")]
    pub truncation: u64,
}

fn default_truncation() -> u64 {
    10
}

/// The raw contents of a model or record file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub kind: String,
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub opens: Vec<Vec<String>>,
    #[serde(default)]
    pub values: BTreeMap<String, String>,
    #[serde(default)]
    pub domain: Vec<String>,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
    pub staircase: Option<StaircaseSpec>,
    pub record: Option<RecordMeta>,
    #[serde(default)]
    pub expect: Vec<ExpectSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordMeta {
    pub id: String,
    pub source: String,
    pub target: String,
    pub citation: String,
    pub threshold_grid: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSpec {
    pub condition: String,
    pub at: String,
    pub holds: bool,
    /// Substring the rendered witness must contain.
    pub witness: Option<String>,
    /// Expected UBLSCA-style threshold.
    pub threshold: Option<String>,
}

/// A model of either backend.
#[derive(Clone, Debug)]
pub enum AnyModel {
    Finite(FiniteModel),
    Piecewise(PiecewiseFn),
}

impl ModelFile {
    pub fn parse(text: &str, file: &str) -> Result<Self, ParseError> {
        toml::from_str(text).map_err(|e| ParseError::new(e.message().to_string()).at(locate(text, file, e.span())))
    }

    pub fn build(&self, file: &str) -> Result<AnyModel, ParseError> {
        match self.kind.as_str() {
            "finite" => self.build_finite().map_err(|e| e.within(file)),
            "piecewise" => self.build_piecewise().map_err(|e| e.within(file)),
            other => Err(ParseError::new(format!("unknown model kind `{other}` (finite or piecewise)")).at(file)),
        }
    }

    fn build_finite(&self) -> Result<AnyModel, ParseError> {
        let space = FiniteSpace::from_names(self.points.clone(), &self.opens).map_err(|e| e.at("opens"))?;
        let mut values = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let v =
                self.values.get(p).ok_or_else(|| ParseError::new(format!("no value for point `{p}`")).at("values"))?;
            values.push(v.parse::<ExtendedReal>().map_err(|e| e.at(format!("values.{p}")))?);
        }
        if let Some(extra) = self.values.keys().find(|k| !self.points.contains(k)) {
            return Err(ParseError::new(format!("value given for unknown point `{extra}`")).at("values"));
        }
        Ok(AnyModel::Finite(FiniteModel::new(Arc::new(space), values)?))
    }

    fn build_piecewise(&self) -> Result<AnyModel, ParseError> {
        let domain = self
            .domain
            .iter()
            .enumerate()
            .map(|(i, d)| d.parse::<Interval>().map_err(|e| e.at(format!("domain[{i}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let at = format!("pieces[{i}]");
                Ok(Piece {
                    interval: p.interval.parse().map_err(|e: ParseError| e.at(&at))?,
                    expr: Expr::parse(&p.kind, &p.coefficients).map_err(|e| e.at(&at))?,
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let staircase = self.staircase.map(|s| Staircase { start: s.start, truncation: s.truncation });
        Ok(AnyModel::Piecewise(PiecewiseFn::new(domain, pieces, staircase)?))
    }
}

/// `file:line:column` for a byte span reported by the TOML parser.
fn locate(text: &str, file: &str, span: Option<std::ops::Range<usize>>) -> String {
    let Some(span) = span else { return file.to_string() };
    let before = &text[..span.start.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    format!("{file}:{line}:{col}")
}

/// Parses and validates a model file.
pub fn load_model(text: &str, file: &str) -> Result<(AnyModel, ModelFile), ParseError> {
    let spec = ModelFile::parse(text, file)?;
    let model = spec.build(file)?;
    Ok((model, spec))
}

impl AnyModel {
    pub fn backend_name(&self) -> &'static str {
        match self {
            AnyModel::Finite(m) => m.backend().name(),
            AnyModel::Piecewise(m) => m.backend().name(),
        }
    }

    pub fn global(&self) -> &GlobalData {
        match self {
            AnyModel::Finite(m) => m.global(),
            AnyModel::Piecewise(m) => m.global(),
        }
    }

    pub fn check_at(&self, cond: Condition, point: &str) -> Result<Verdict, CheckError> {
        match self {
            AnyModel::Finite(m) => conditions::check_at(cond, m, &m.parse_point(point)?),
            AnyModel::Piecewise(m) => conditions::check_at(cond, m, &m.parse_point(point)?),
        }
    }

    pub fn check_global(&self, cond: Condition) -> Result<Verdict, CheckError> {
        match self {
            AnyModel::Finite(m) => conditions::check_global(cond, m),
            AnyModel::Piecewise(m) => conditions::check_global(cond, m),
        }
    }

    /// Points reported by `check` when no point is given: every point of a finite space,
    /// or the cover points of a piecewise function.
    pub fn report_points(&self) -> Vec<String> {
        match self {
            AnyModel::Finite(m) => m.space().names().to_vec(),
            AnyModel::Piecewise(m) => m.cover().points.iter().map(|x| m.point_name(x)).collect(),
        }
    }

    pub fn hypotheses_at(&self, point: &str) -> Result<HypothesisSet, CheckError> {
        let local = match self {
            AnyModel::Finite(m) => m.local(&m.parse_point(point)?)?,
            AnyModel::Piecewise(m) => m.local(&m.parse_point(point)?)?,
        };
        Ok(conditions::hypotheses_at(&local, self.global()))
    }

    pub fn global_hypotheses(&self) -> HypothesisSet {
        conditions::global_hypotheses(self.global())
    }

    /// Whether `point` is isolated (its liminf degenerates to `f(x)`).
    pub fn is_isolated(&self, point: &str) -> Result<bool, CheckError> {
        Ok(match self {
            AnyModel::Finite(m) => m.local(&m.parse_point(point)?)?.isolated,
            AnyModel::Piecewise(m) => m.local(&m.parse_point(point)?)?.isolated,
        })
    }
}

impl fmt::Display for AnyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyModel::Finite(m) => write!(f, "{m}"),
            AnyModel::Piecewise(m) => write!(f, "{m}"),
        }
    }
}
