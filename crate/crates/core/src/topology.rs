//! Finite topological spaces and functions on them.
//!
//! Point sets are bitmasks, so a space has at most 64 points.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{CheckError, ParseError};
use crate::extreal::{ExtendedReal, ValueSet};
use crate::model::{Approach, ApproachKind, Backend, Bound, Cover, GlobalData, LocalData, Model};

/// A set of points as a bitmask over point indices.
pub type PointSet = u64;

pub const MAX_POINTS: usize = 64;
/// Largest point count accepted by [`enumerate_spaces`].
pub const MAX_ENUMERATED: usize = 5;

pub(crate) fn bit(i: usize) -> PointSet {
    1 << i
}

fn full_set(n: usize) -> PointSet {
    if n == MAX_POINTS {
        u64::MAX
    } else {
        bit(n) - 1
    }
}

pub(crate) fn members(s: PointSet) -> impl Iterator<Item = usize> {
    (0..MAX_POINTS).filter(move |&i| s & bit(i) != 0)
}

/// The first way a family of sets fails to be a topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologyViolation {
    MissingEmpty,
    MissingWhole,
    UnionNotOpen { a: PointSet, b: PointSet },
    IntersectionNotOpen { a: PointSet, b: PointSet },
}

/// Checks the axioms of a topology on `n` points; opens are bitmasks.
pub fn validate(n: usize, opens: &[PointSet]) -> Result<(), TopologyViolation> {
    let family: BTreeSet<PointSet> = opens.iter().copied().collect();
    if !family.contains(&0) {
        return Err(TopologyViolation::MissingEmpty);
    }
    if !family.contains(&full_set(n)) {
        return Err(TopologyViolation::MissingWhole);
    }
    let sorted: Vec<PointSet> = family.iter().copied().collect();
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            if !family.contains(&(a | b)) {
                return Err(TopologyViolation::UnionNotOpen { a, b });
            }
            if !family.contains(&(a & b)) {
                return Err(TopologyViolation::IntersectionNotOpen { a, b });
            }
        }
    }
    Ok(())
}

/// A finite topological space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    names: Vec<String>,
    opens: Vec<PointSet>,
    min_nbhd: Vec<PointSet>,
}

impl FiniteSpace {
    /// Builds a space from point names and opens given as lists of names.
    pub fn from_names(names: Vec<String>, opens: &[Vec<String>]) -> Result<Self, ParseError> {
        if names.is_empty() {
            return Err(ParseError::new("a space needs at least one point"));
        }
        if names.len() > MAX_POINTS {
            return Err(ParseError::new(format!("at most {MAX_POINTS} points are supported")));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(ParseError::new(format!("duplicate point `{n}`")));
            }
        }
        let index = |p: &str| {
            names
                .iter()
                .position(|n| n == p)
                .ok_or_else(|| ParseError::new(format!("open set mentions unknown point `{p}`")))
        };
        let mut masks = Vec::with_capacity(opens.len());
        for o in opens {
            let mut m = 0;
            for p in o {
                m |= bit(index(p)?);
            }
            masks.push(m);
        }
        let space_names = names.clone();
        FiniteSpace::new(names, masks).map_err(|v| {
            let fmt_set = |s: PointSet| format_set(&space_names, s);
            ParseError::new(match v {
                TopologyViolation::MissingEmpty => "opens must contain the empty set".to_string(),
                TopologyViolation::MissingWhole => "opens must contain the whole space".to_string(),
                TopologyViolation::UnionNotOpen { a, b } => {
                    format!("union of {} and {} is {}, which is not open", fmt_set(a), fmt_set(b), fmt_set(a | b))
                }
                TopologyViolation::IntersectionNotOpen { a, b } => format!(
                    "intersection of {} and {} is {}, which is not open",
                    fmt_set(a),
                    fmt_set(b),
                    fmt_set(a & b)
                ),
            })
        })
    }

    pub fn new(names: Vec<String>, opens: Vec<PointSet>) -> Result<Self, TopologyViolation> {
        let n = names.len();
        let mut opens: Vec<PointSet> = opens.into_iter().map(|o| o & full_set(n)).collect();
        opens.sort_unstable();
        opens.dedup();
        validate(n, &opens)?;
        let min_nbhd =
            (0..n).map(|x| opens.iter().filter(|&&o| o & bit(x) != 0).fold(full_set(n), |acc, &o| acc & o)).collect();
        Ok(FiniteSpace { names, opens, min_nbhd })
    }

    /// Unnamed points get the labels `a`, `b`, `c`, ...
    pub fn with_default_names(n: usize, opens: Vec<PointSet>) -> Result<Self, TopologyViolation> {
        FiniteSpace::new(default_names(n), opens)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn full(&self) -> PointSet {
        full_set(self.len())
    }

    pub fn point(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Intersection of all opens containing `x`; itself open.
    pub fn min_nbhd(&self, x: usize) -> Result<PointSet, CheckError> {
        self.min_nbhd.get(x).copied().ok_or_else(|| CheckError::UnknownPoint(x.to_string()))
    }

    /// Closure of a set: points whose minimal neighbourhood meets it.
    pub fn closure(&self, s: PointSet) -> PointSet {
        (0..self.len()).filter(|&x| self.min_nbhd[x] & s != 0).fold(0, |acc, x| acc | bit(x))
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        self.closure(s) == s
    }

    /// Whether the sequence is eventually inside every open containing `x`.
    pub fn converges(&self, seq: &PointSequence, x: usize) -> Result<bool, CheckError> {
        let m = self.min_nbhd(x)?;
        if let Some(&bad) = seq.prefix.iter().chain(&seq.cycle).find(|&&p| p >= self.len()) {
            return Err(CheckError::UnknownPoint(bad.to_string()));
        }
        Ok(seq.cycle.iter().all(|&p| m & bit(p) != 0))
    }

    pub fn format_set(&self, s: PointSet) -> String {
        format_set(&self.names, s)
    }
}

fn format_set(names: &[String], s: PointSet) -> String {
    let inner: Vec<&str> = members(s).filter(|&i| i < names.len()).map(|i| names[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("p{i}") }).collect()
}

/// An eventually periodic sequence of point indices: `prefix`, then `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSequence {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl PointSequence {
    pub fn constant(p: usize) -> Self {
        PointSequence { prefix: vec![], cycle: vec![p] }
    }

    pub fn term(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }
}

/// Every topology on `n` labeled points, each exactly once.
///
/// Topologies on a finite set correspond to preorders (the specialization order);
/// the opens are the up-closed sets. Preorders are enumerated in relation-bit order.
pub fn enumerate_spaces(n: usize) -> Result<Vec<FiniteSpace>, ParseError> {
    if n == 0 || n > MAX_ENUMERATED {
        return Err(ParseError::new(format!("enumeration supports 1 to {MAX_ENUMERATED} points, got {n}")));
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for code in 0u64..(1 << pairs.len()) {
        let mut up = vec![0 as PointSet; n];
        for (i, u) in up.iter_mut().enumerate() {
            *u = bit(i);
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if code & (1 << k) != 0 {
                up[i] |= bit(j);
            }
        }
        let transitive = (0..n).all(|i| members(up[i]).all(|j| up[j] & !up[i] == 0));
        if !transitive {
            continue;
        }
        let opens: Vec<PointSet> = (0..=full_set(n)).filter(|&s| members(s).all(|i| up[i] & !s == 0)).collect();
        out.push(FiniteSpace::with_default_names(n, opens).expect("up-sets form a topology"));
    }
    Ok(out)
}

/// A function from a finite space to the extended reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    space: Arc<FiniteSpace>,
    values: Vec<ExtendedReal>,
    global: GlobalData,
    fault: Option<LiminfFault>,
}

/// Deliberate liminf bugs, used to show the oracle cross-check has teeth.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiminfFault {
    /// Inf over the minimal neighbourhood without the point itself.
    Punctured,
    /// The neighbourhood collapsed to the point: liminf = f(x).
    PointOnly,
}

impl FiniteModel {
    pub fn new(space: Arc<FiniteSpace>, values: Vec<ExtendedReal>) -> Result<Self, ParseError> {
        if values.len() != space.len() {
            return Err(ParseError::new(format!("{} values given for {} points", values.len(), space.len())));
        }
        let inf = values.iter().min().cloned().expect("nonempty space");
        let global = GlobalData {
            image: ValueSet::from_values(values.iter().cloned()),
            inf,
            inf_attained: true,
            first_countable: true,
            converging_min_seq: true,
        };
        Ok(FiniteModel { space, values, global, fault: None })
    }

    /// Fault injection for oracle tests.
    #[doc(hidden)]
    pub fn with_fault(mut self, fault: LiminfFault) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[ExtendedReal] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &ExtendedReal {
        &self.values[x]
    }

    pub fn argmin(&self) -> PointSet {
        (0..self.space.len()).filter(|&i| self.values[i] == self.global.inf).fold(0, |acc, i| acc | bit(i))
    }

    /// `inf` of `f` over the minimal neighbourhood of `x`.
    pub fn liminf_at(&self, x: usize) -> Result<ExtendedReal, CheckError> {
        let m = self.space.min_nbhd(x)?;
        Ok(members(m).map(|y| &self.values[y]).min().cloned().expect("x is in its neighbourhood"))
    }

    /// Sublevel set `{f <= lambda}`.
    pub fn level_set(&self, lambda: &ExtendedReal) -> PointSet {
        (0..self.space.len()).filter(|&i| self.values[i] <= *lambda).fold(0, |acc, i| acc | bit(i))
    }

    fn name(&self, x: usize) -> &str {
        &self.space.names[x]
    }

    /// Lowest value in the minimal neighbourhood and the first point attaining it.
    fn nbhd_min(&self, x: usize, m: PointSet) -> (ExtendedReal, usize) {
        let mut best: Option<(ExtendedReal, usize)> = None;
        let m = if self.fault == Some(LiminfFault::PointOnly) { bit(x) } else { m };
        for y in members(m) {
            if self.fault == Some(LiminfFault::Punctured) && y == x {
                continue;
            }
            let v = &self.values[y];
            if best.as_ref().is_none_or(|(b, _)| v < b) {
                best = Some((v.clone(), y));
            }
        }
        best.unwrap_or((ExtendedReal::PosInf, x))
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = self.space.opens.iter().map(|&o| self.space.format_set(o)).collect();
        let vals: Vec<String> = (0..self.space.len()).map(|i| format!("{}={}", self.name(i), self.values[i])).collect();
        write!(f, "opens [{}], f: {}", opens.join(" "), vals.join(" "))
    }
}

impl Model for FiniteModel {
    type Point = usize;

    fn backend(&self) -> Backend {
        Backend::Finite
    }

    fn global(&self) -> &GlobalData {
        &self.global
    }

    fn local(&self, x: &usize) -> Result<LocalData, CheckError> {
        let x = *x;
        let m = self.space.min_nbhd(x)?;
        let (liminf, at) = self.nbhd_min(x, m);
        let constant_at = |y: usize| format!("constant sequence at {}", self.name(y));
        let approaches = members(m)
            .filter(|&y| y != x)
            .map(|y| Approach { limit: self.values[y].clone(), kind: ApproachKind::Plateau, path: constant_at(y) })
            .collect();
        Ok(LocalData {
            point: self.name(x).to_string(),
            value: self.values[x].clone(),
            liminf_attained: true,
            liminf_path: Some(constant_at(at)),
            transfer: Bound { value: liminf.clone(), inclusive: false, path: Some(constant_at(at)) },
            liminf,
            approaches,
            near_argmin: m & self.argmin() != 0,
            isolated: m == bit(x),
        })
    }

    fn cover(&self) -> Cover<usize> {
        Cover { points: (0..self.space.len()).collect(), tail_floor: None, note: None }
    }

    fn parse_point(&self, s: &str) -> Result<usize, CheckError> {
        self.space.point(s.trim()).ok_or_else(|| CheckError::UnknownPoint(s.to_string()))
    }

    fn point_name(&self, x: &usize) -> String {
        self.name(*x).to_string()
    }

    fn preimage(&self, v: &ExtendedReal) -> Option<String> {
        self.values.iter().position(|w| w == v).map(|i| self.name(i).to_string())
    }
}
