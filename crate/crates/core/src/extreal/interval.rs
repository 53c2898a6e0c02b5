//! Intervals of the extended line and exact descriptions of value sets.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::ExtendedReal;
use crate::error::ParseError;

/// An interval of the extended real line with endpoint membership flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: ExtendedReal,
    pub lo_closed: bool,
    pub hi: ExtendedReal,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: ExtendedReal, lo_closed: bool, hi: ExtendedReal, hi_closed: bool) -> Self {
        Interval { lo, lo_closed, hi, hi_closed }
    }

    pub fn point(v: ExtendedReal) -> Self {
        Interval::new(v.clone(), true, v, true)
    }

    /// The whole extended line `[-inf, +inf]`.
    pub fn everything() -> Self {
        Interval::new(ExtendedReal::NegInf, true, ExtendedReal::PosInf, true)
    }

    /// `[-inf, v)`
    pub fn below(v: &ExtendedReal) -> Self {
        Interval::new(ExtendedReal::NegInf, true, v.clone(), false)
    }

    /// `(v, +inf]`
    pub fn above(v: &ExtendedReal) -> Self {
        Interval::new(v.clone(), false, ExtendedReal::PosInf, true)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Greater => true,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi && self.lo_closed && self.hi_closed
    }

    pub fn contains(&self, v: &ExtendedReal) -> bool {
        let above_lo = match v.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below_hi = match v.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above_lo && below_hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if lower_key(self) >= lower_key(other) {
            (self.lo.clone(), self.lo_closed)
        } else {
            (other.lo.clone(), other.lo_closed)
        };
        let (hi, hi_closed) = if upper_key(self) <= upper_key(other) {
            (self.hi.clone(), self.hi_closed)
        } else {
            (other.hi.clone(), other.hi_closed)
        };
        Interval { lo, lo_closed, hi, hi_closed }
    }

    /// Some concrete element, preferring the lower endpoint.
    pub fn pick(&self) -> Option<ExtendedReal> {
        if self.is_empty() {
            None
        } else if self.lo_closed {
            Some(self.lo.clone())
        } else {
            self.lo.between(&self.hi)
        }
    }
}

/// Sort key for lower endpoints: a closed endpoint starts before an open one.
fn lower_key(i: &Interval) -> (&ExtendedReal, bool) {
    (&i.lo, !i.lo_closed)
}

/// Sort key for upper endpoints: an open endpoint ends before a closed one.
fn upper_key(i: &Interval) -> (&ExtendedReal, bool) {
    (&i.hi, i.hi_closed)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl FromStr for Interval {
    type Err = ParseError;

    /// Accepts `(a,b]`-style intervals and `{v}` for a single point.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            return Ok(Interval::point(inner.parse()?));
        }
        let bad = || ParseError::new(format!("invalid interval `{s}`"));
        let mut chars = t.chars();
        let open = chars.next().ok_or_else(bad)?;
        let close = chars.next_back().ok_or_else(bad)?;
        let lo_closed = match open {
            '[' => true,
            '(' => false,
            _ => return Err(bad()),
        };
        let hi_closed = match close {
            ']' => true,
            ')' => false,
            _ => return Err(bad()),
        };
        let (a, b) = chars.as_str().split_once(',').ok_or_else(bad)?;
        Ok(Interval::new(a.parse()?, lo_closed, b.parse()?, hi_closed))
    }
}

/// An exact subset of the extended line: finitely many intervals plus an
/// optional staircase family `{1/n : n >= start}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSet {
    parts: Vec<Interval>,
    staircase: Option<u64>,
}

/// Jumps of a value set: gaps `(p,q)` with both ends in the set and nothing between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jumps {
    /// Explicitly listed jumps, ascending.
    pub listed: Vec<(ExtendedReal, ExtendedReal)>,
    /// When set, `(1/(n+1), 1/n)` is also a jump for every `n` at or above this index.
    pub tail_from: Option<u64>,
}

impl Jumps {
    pub fn is_empty(&self) -> bool {
        self.listed.is_empty() && self.tail_from.is_none()
    }
}

impl fmt::Display for Jumps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "none");
        }
        let mut items: Vec<String> = self.listed.iter().map(|(p, q)| format!("({p},{q})")).collect();
        if let Some(n) = self.tail_from {
            items.push(format!("(1/(n+1),1/n) for n >= {n}"));
        }
        write!(f, "{}", items.join(", "))
    }
}

impl ValueSet {
    pub fn from_values<I: IntoIterator<Item = ExtendedReal>>(values: I) -> Self {
        Self::new(values.into_iter().map(Interval::point).collect(), None)
    }

    /// Builds a normalized set; empty intervals are dropped. `staircase` is the first index `n >= 1`.
    pub fn new(parts: Vec<Interval>, staircase: Option<u64>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().filter(|p| !p.is_empty()).collect();
        parts.sort_by(|a, b| lower_key(a).cmp(&lower_key(b)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            if let Some(last) = merged.last_mut() {
                let touches = match p.lo.cmp(&last.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => last.hi_closed || p.lo_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    if upper_key(&p) > upper_key(last) {
                        last.hi = p.hi;
                        last.hi_closed = p.hi_closed;
                    }
                    continue;
                }
            }
            merged.push(p);
        }
        ValueSet { parts: merged, staircase: staircase.map(|s| s.max(1)) }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn staircase(&self) -> Option<u64> {
        self.staircase
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty() && self.staircase.is_none()
    }

    pub fn is_singleton(&self) -> bool {
        self.staircase.is_none() && self.parts.len() == 1 && self.parts[0].is_point()
    }

    pub fn contains(&self, v: &ExtendedReal) -> bool {
        self.parts.iter().any(|p| p.contains(v)) || self.stair_contains(v)
    }

    /// Whether the set meets `window`.
    pub fn meets(&self, window: &Interval) -> bool {
        self.pick_in(window).is_some()
    }

    /// A concrete element of the set inside `window`, from the lowest part meeting it.
    pub fn pick_in(&self, window: &Interval) -> Option<ExtendedReal> {
        let from_parts = self.parts.iter().find_map(|p| p.intersect(window).pick());
        let from_stair = self.stair_sup_within(window);
        match (from_parts, from_stair) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Infimum of the set and whether it is attained.
    pub fn infimum(&self) -> (ExtendedReal, bool) {
        self.inf_within(&Interval::everything()).unwrap_or((ExtendedReal::PosInf, false))
    }

    /// Supremum of the set and whether it is attained.
    pub fn supremum(&self) -> (ExtendedReal, bool) {
        self.sup_within(&Interval::everything()).unwrap_or((ExtendedReal::NegInf, false))
    }

    /// Largest element strictly below `v` when one exists with nothing of the set in between.
    pub fn predecessor(&self, v: &ExtendedReal) -> Option<ExtendedReal> {
        match self.sup_within(&Interval::below(v)) {
            Some((s, true)) => Some(s),
            _ => None,
        }
    }

    /// Smallest element strictly above `v` when one exists with nothing of the set in between.
    pub fn successor(&self, v: &ExtendedReal) -> Option<ExtendedReal> {
        match self.inf_within(&Interval::above(v)) {
            Some((s, true)) => Some(s),
            _ => None,
        }
    }

    /// Whether some jump has `v` as an endpoint.
    pub fn has_jump_at(&self, v: &ExtendedReal) -> bool {
        self.contains(v) && (self.predecessor(v).is_some() || self.successor(v).is_some())
    }

    /// `inf (S ∩ window)` with attainment, `None` when the intersection is empty.
    pub fn inf_within(&self, window: &Interval) -> Option<(ExtendedReal, bool)> {
        let mut best: Option<(ExtendedReal, bool)> = None;
        let mut offer = |v: ExtendedReal, attained: bool| {
            best = Some(match best.take() {
                None => (v, attained),
                Some((b, ba)) => match v.cmp(&b) {
                    Ordering::Less => (v, attained),
                    Ordering::Equal => (b, ba || attained),
                    Ordering::Greater => (b, ba),
                },
            });
        };
        for p in &self.parts {
            let i = p.intersect(window);
            if !i.is_empty() {
                offer(i.lo.clone(), i.lo_closed);
            }
        }
        if let Some(r) = self.stair_inf_within(window) {
            offer(r.0, r.1);
        }
        best
    }

    /// `sup (S ∩ window)` with attainment, `None` when the intersection is empty.
    pub fn sup_within(&self, window: &Interval) -> Option<(ExtendedReal, bool)> {
        let mut best: Option<(ExtendedReal, bool)> = None;
        let mut offer = |v: ExtendedReal, attained: bool| {
            best = Some(match best.take() {
                None => (v, attained),
                Some((b, ba)) => match v.cmp(&b) {
                    Ordering::Greater => (v, attained),
                    Ordering::Equal => (b, ba || attained),
                    Ordering::Less => (b, ba),
                },
            });
        };
        for p in &self.parts {
            let i = p.intersect(window);
            if !i.is_empty() {
                offer(i.hi.clone(), i.hi_closed);
            }
        }
        if let Some(v) = self.stair_sup_within(window) {
            offer(v, true);
        }
        best
    }

    /// Index beyond which the staircase behaves uniformly with respect to the parts:
    /// every `1/n` with `n` at or above it lies below all positive finite part endpoints.
    pub fn stair_uniform_from(&self) -> Option<u64> {
        let start = self.staircase?;
        let mut eps = BigRational::one();
        for p in &self.parts {
            for e in [&p.lo, &p.hi] {
                if let ExtendedReal::Finite(r) = e {
                    if r.is_positive() && *r < eps {
                        eps = r.clone();
                    }
                }
            }
        }
        let bound = (BigRational::one() / eps).ceil().to_integer() + BigInt::one();
        let bound: u64 = bound.try_into().unwrap_or(u64::MAX);
        Some(bound.max(start))
    }

    /// All jumps, with the staircase tail summarized.
    pub fn jumps(&self) -> Jumps {
        let mut comps = self.parts.clone();
        let mut tail_uncovered = false;
        let mut uniform = 0;
        if let Some(start) = self.staircase {
            uniform = self.stair_uniform_from().unwrap_or(start);
            for n in start..=uniform {
                let v = ExtendedReal::ratio(1, n as i64);
                if !self.parts.iter().any(|p| p.contains(&v)) {
                    comps.push(Interval::point(v));
                }
            }
            let t = ExtendedReal::ratio(1, (uniform + 1) as i64);
            tail_uncovered = !self.parts.iter().any(|p| p.contains(&t));
        }
        let comps = ValueSet::new(comps, None).parts;
        let tail_probe = ExtendedReal::ratio(1, (uniform + 1) as i64);
        let mut listed = Vec::new();
        for w in comps.windows(2) {
            let (c, d) = (&w[0], &w[1]);
            if !(c.hi_closed && d.lo_closed && c.hi < d.lo) {
                continue;
            }
            if tail_uncovered && c.hi < tail_probe && tail_probe < d.lo {
                continue;
            }
            listed.push((c.hi.clone(), d.lo.clone()));
        }
        Jumps { listed, tail_from: tail_uncovered.then_some(uniform) }
    }

    fn stair_contains(&self, v: &ExtendedReal) -> bool {
        let (Some(start), ExtendedReal::Finite(r)) = (self.staircase, v) else {
            return false;
        };
        if !r.is_positive() || !r.numer().is_one() {
            return false;
        }
        r.denom() >= &BigInt::from(start)
    }

    /// Largest staircase value inside `window`.
    fn stair_sup_within(&self, window: &Interval) -> Option<ExtendedReal> {
        let start = BigInt::from(self.staircase?);
        // smallest n >= start with 1/n under the upper bound
        let n = match &window.hi {
            ExtendedReal::NegInf => return None,
            ExtendedReal::PosInf => start,
            ExtendedReal::Finite(h) => {
                if !h.is_positive() {
                    return None;
                }
                let q = BigRational::one() / h;
                let min_n = if window.hi_closed { q.ceil().to_integer() } else { q.floor().to_integer() + 1 };
                min_n.max(start)
            }
        };
        let v = ExtendedReal::Finite(BigRational::new(BigInt::one(), n));
        window.contains(&v).then_some(v)
    }

    /// Infimum of the staircase values inside `window`, with attainment.
    fn stair_inf_within(&self, window: &Interval) -> Option<(ExtendedReal, bool)> {
        let start = BigInt::from(self.staircase?);
        self.stair_sup_within(window)?;
        match &window.lo {
            ExtendedReal::Finite(l) if l.is_positive() => {
                let q = BigRational::one() / l;
                let max_n = if window.lo_closed { q.floor().to_integer() } else { q.ceil().to_integer() - 1 };
                if max_n < start {
                    return None;
                }
                let v = ExtendedReal::Finite(BigRational::new(BigInt::one(), max_n));
                window.contains(&v).then_some((v, true))
            }
            ExtendedReal::PosInf => None,
            _ => Some((ExtendedReal::zero(), false)),
        }
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        if let Some(s) = self.staircase {
            items.push(format!("{{1/n : n >= {s}}}"));
        }
        if items.is_empty() {
            return f.write_str("{}");
        }
        f.write_str(&items.join(" u "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }
    fn er(s: &str) -> ExtendedReal {
        s.parse().unwrap()
    }

    #[test]
    fn interval_parse_and_display() {
        assert_eq!(iv("(-1,2]").to_string(), "(-1,2]");
        assert_eq!(iv("[0,+inf)").to_string(), "[0,+inf)");
        assert_eq!(iv("{3/2}").to_string(), "{3/2}");
        assert!("(1,2".parse::<Interval>().is_err());
        assert!(iv("(1,1]").is_empty());
        assert!(iv("[1,1]").is_point());
    }

    #[test]
    fn normalization_merges_touching_parts() {
        let s = ValueSet::new(vec![iv("[1,2]"), iv("[0,1)"), iv("(3,4)"), iv("(4,5)")], None);
        assert_eq!(s.to_string(), "[0,2] u (3,4) u (4,5)");
    }

    #[test]
    fn predecessor_and_successor() {
        let s = ValueSet::new(vec![iv("[-2,-1]"), iv("[0,1]")], None);
        assert_eq!(s.predecessor(&er("0")), Some(er("-1")));
        assert_eq!(s.predecessor(&er("1")), None);
        assert_eq!(s.successor(&er("-1")), Some(er("0")));
        assert!(s.has_jump_at(&er("0")));
        assert!(!s.has_jump_at(&er("1/2")));
        let t = ValueSet::new(vec![iv("(0,1)"), iv("{2}")], None);
        assert_eq!(t.predecessor(&er("2")), None);
        assert_eq!(t.infimum(), (er("0"), false));
    }

    #[test]
    fn staircase_queries() {
        let s = ValueSet::new(vec![iv("{0}")], Some(1));
        assert!(s.contains(&er("1/7")));
        assert!(!s.contains(&er("2/7")));
        assert_eq!(s.predecessor(&er("1/3")), Some(er("1/4")));
        assert_eq!(s.successor(&er("1/3")), Some(er("1/2")));
        assert_eq!(s.successor(&er("0")), None);
        assert_eq!(s.pick_in(&iv("(1/5,1/3)")), Some(er("1/4")));
        assert_eq!(s.pick_in(&iv("(1/4,1/3)")), None);
        assert_eq!(s.inf_within(&iv("(0,1]")), Some((er("0"), false)));
        assert_eq!(s.inf_within(&iv("[1/3,1]")), Some((er("1/3"), true)));
        let j = s.jumps();
        assert_eq!(j.listed, vec![(er("1/2"), er("1"))]);
        // together with the listed jump, the tail must account for every gap (1/(n+1),1/n)
        assert_eq!(j.tail_from, Some(2));
    }

    #[test]
    fn covered_staircase_tail_has_no_jumps() {
        let s = ValueSet::new(vec![iv("[0,1/10]")], Some(1));
        let j = s.jumps();
        assert!(j.tail_from.is_none());
        assert_eq!(j.listed.len(), 9);
        assert_eq!(j.listed[0], (er("1/10"), er("1/9")));
    }

    #[test]
    fn jump_examples() {
        let no_jump = ValueSet::new(vec![iv("(-inf,0]"), iv("(1,+inf)")], None);
        assert!(no_jump.jumps().is_empty());
        let step = ValueSet::from_values([er("0"), er("1")]);
        assert_eq!(step.jumps().listed, vec![(er("0"), er("1"))]);
    }
}
