//! Piecewise constant/affine functions on finite unions of real intervals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{CheckError, ParseError};
use crate::extreal::{parse_rational, ExtendedReal, Interval, ValueSet};
use crate::model::{Approach, ApproachKind, Backend, Bound, Cover, GlobalData, LocalData, Model};

/// A constant or affine expression with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Constant(BigRational),
    Affine { slope: BigRational, intercept: BigRational },
}

impl Expr {
    pub fn eval(&self, x: &BigRational) -> BigRational {
        match self {
            Expr::Constant(c) => c.clone(),
            Expr::Affine { slope, intercept } => slope * x + intercept,
        }
    }

    pub fn slope(&self) -> BigRational {
        match self {
            Expr::Constant(_) => BigRational::zero(),
            Expr::Affine { slope, .. } => slope.clone(),
        }
    }

    /// Parses `kind` (`constant` or `affine`) and its coefficient list.
    pub fn parse(kind: &str, coefficients: &[String]) -> Result<Self, ParseError> {
        let nums = coefficients.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>, _>>()?;
        match (kind, nums.as_slice()) {
            ("constant", [c]) => Ok(Expr::Constant(c.clone())),
            ("affine", [m, b]) => Ok(Expr::Affine { slope: m.clone(), intercept: b.clone() }),
            ("constant", _) => Err(ParseError::new("a constant piece takes one coefficient")),
            ("affine", _) => Err(ParseError::new("an affine piece takes two coefficients: slope, intercept")),
            (other, _) => Err(ParseError::new(format!("unknown piece kind `{other}`"))),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) => write!(f, "{c}"),
            Expr::Affine { slope, intercept } => {
                let one = BigRational::one();
                match slope {
                    s if s.is_zero() => return write!(f, "{intercept}"),
                    s if *s == one => write!(f, "x")?,
                    s if *s == -one => write!(f, "-x")?,
                    s if s.is_integer() => write!(f, "{s}x")?,
                    s => write!(f, "({s})x")?,
                }
                match intercept {
                    c if c.is_zero() => Ok(()),
                    c if c.is_negative() => write!(f, " - {}", -c),
                    c => write!(f, " + {c}"),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub interval: Interval,
    pub expr: Expr,
}

/// The family `f = 1/n` on `(n-1, n]` for every `n >= start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Staircase {
    pub start: u64,
    /// Steps listed explicitly in reports and global scans; verdicts never depend on it.
    pub truncation: u64,
}

impl Staircase {
    fn region(&self) -> Interval {
        Interval::new(ExtendedReal::from_int(self.start as i64 - 1), false, ExtendedReal::PosInf, false)
    }

    fn value(n: &BigInt) -> BigRational {
        BigRational::new(BigInt::one(), n.clone())
    }
}

/// How `f` behaves on one side of a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "limit")]
pub enum Side {
    /// The side lies outside the domain.
    NoApproach,
    Constant(ExtendedReal),
    /// Values strictly decrease to the limit as the point is approached.
    FromAbove(ExtendedReal),
    /// Values strictly increase to the limit as the point is approached.
    FromBelow(ExtendedReal),
}

impl Side {
    pub fn liminf(&self) -> ExtendedReal {
        match self {
            Side::NoApproach => ExtendedReal::PosInf,
            Side::Constant(v) | Side::FromAbove(v) | Side::FromBelow(v) => v.clone(),
        }
    }
}

/// Exact local analysis at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointAnalysis {
    pub x: String,
    pub value: ExtendedReal,
    pub left: Side,
    pub right: Side,
    pub left_liminf: ExtendedReal,
    pub right_liminf: ExtendedReal,
    /// `min(f(x), left_liminf, right_liminf)`
    pub liminf: ExtendedReal,
    pub liminf_attained: bool,
    pub isolated: bool,
    pub left_path: Option<String>,
    pub right_path: Option<String>,
}

/// A validated piecewise function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseFn {
    domain: Vec<Interval>,
    pieces: Vec<Piece>,
    staircase: Option<Staircase>,
    global: GlobalData,
}

fn finite_endpoints_open(i: &Interval) -> bool {
    (i.lo.is_finite() || !i.lo_closed) && (i.hi.is_finite() || !i.hi_closed)
}

impl PiecewiseFn {
    pub fn new(domain: Vec<Interval>, pieces: Vec<Piece>, staircase: Option<Staircase>) -> Result<Self, ParseError> {
        for d in &domain {
            if d.is_empty() {
                return Err(ParseError::new(format!("empty domain interval {d}")));
            }
            if !finite_endpoints_open(d) {
                return Err(ParseError::new(format!("infinite endpoints must be open in {d}")));
            }
        }
        for p in &pieces {
            if p.interval.is_empty() {
                return Err(ParseError::new(format!("empty piece interval {}", p.interval)));
            }
            if !finite_endpoints_open(&p.interval) {
                return Err(ParseError::new(format!("infinite endpoints must be open in {}", p.interval)));
            }
        }
        if let Some(s) = staircase {
            if s.start == 0 {
                return Err(ParseError::new("staircase start must be at least 1"));
            }
            if s.truncation < s.start {
                return Err(ParseError::new("staircase truncation must be at least its start"));
            }
        }
        let mut regions: Vec<Interval> = pieces.iter().map(|p| p.interval.clone()).collect();
        if let Some(s) = staircase {
            regions.push(s.region());
        }
        for (i, a) in regions.iter().enumerate() {
            for b in &regions[i + 1..] {
                if !a.intersect(b).is_empty() {
                    return Err(ParseError::new(format!("pieces {a} and {b} overlap")));
                }
            }
        }
        let dom = ValueSet::new(domain, None);
        let covered = ValueSet::new(regions, None);
        if dom.parts() != covered.parts() {
            return Err(ParseError::new(format!("pieces cover {covered} but the domain is {dom}")));
        }
        let mut images: Vec<Interval> = pieces.iter().map(piece_image).collect();
        images.retain(|i| !i.is_empty());
        let image = ValueSet::new(images, staircase.map(|s| s.start));
        let (inf, inf_attained) = image.infimum();
        let mut f = PiecewiseFn {
            domain: dom.parts().to_vec(),
            pieces,
            staircase,
            global: GlobalData { image, inf, inf_attained, first_countable: true, converging_min_seq: false },
        };
        let cms = inf_attained
            || f.cover().points.iter().any(|x| f.analyze_point(x).map(|a| a.liminf == f.global.inf).unwrap_or(false));
        f.global.converging_min_seq = cms;
        Ok(f)
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn staircase(&self) -> Option<Staircase> {
        self.staircase
    }

    pub fn in_domain(&self, x: &BigRational) -> bool {
        let v = ExtendedReal::Finite(x.clone());
        self.domain.iter().any(|d| d.contains(&v))
    }

    fn stair_region_contains(&self, x: &BigRational) -> bool {
        self.staircase.is_some_and(|s| s.region().contains(&ExtendedReal::Finite(x.clone())))
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational, CheckError> {
        let v = ExtendedReal::Finite(x.clone());
        if let Some(p) = self.pieces.iter().find(|p| p.interval.contains(&v)) {
            return Ok(p.expr.eval(x));
        }
        if self.stair_region_contains(x) {
            return Ok(Staircase::value(&x.ceil().to_integer()));
        }
        Err(CheckError::OutsideDomain(x.to_string()))
    }

    /// Expression governing `f` just left (`left = true`) or right of `x`, and the
    /// lower (resp. upper) end of the stretch where it applies.
    fn germ(&self, x: &BigRational, left: bool) -> Option<(Expr, ExtendedReal)> {
        let xv = ExtendedReal::Finite(x.clone());
        for p in &self.pieces {
            let i = &p.interval;
            if left && i.lo < xv && xv <= i.hi {
                return Some((p.expr.clone(), i.lo.clone()));
            }
            if !left && i.lo <= xv && xv < i.hi {
                return Some((p.expr.clone(), i.hi.clone()));
            }
        }
        let s = self.staircase?;
        let start = BigRational::from_integer(BigInt::from(s.start));
        let n = if left {
            if *x <= &start - BigRational::one() {
                return None;
            }
            x.ceil().to_integer()
        } else {
            if *x < &start - BigRational::one() {
                return None;
            }
            x.floor().to_integer() + BigInt::one()
        };
        let nr = BigRational::from_integer(n.clone());
        let end = if left { &nr - BigRational::one() } else { nr };
        Some((Expr::Constant(Staircase::value(&n)), ExtendedReal::Finite(end)))
    }

    /// Exact one-sided limits and approach profiles at `x`.
    pub fn analyze_point(&self, x: &BigRational) -> Result<PointAnalysis, CheckError> {
        let fx = ExtendedReal::Finite(self.eval(x)?);
        let side = |left: bool| -> (Side, Option<String>) {
            let Some((expr, end)) = self.germ(x, left) else {
                return (Side::NoApproach, None);
            };
            let l = ExtendedReal::Finite(expr.eval(x));
            let s = expr.slope();
            let profile = if s.is_zero() {
                Side::Constant(l)
            } else if s.is_positive() != left {
                Side::FromAbove(l)
            } else {
                Side::FromBelow(l)
            };
            (profile, Some(approach_path(x, &end, left)))
        };
        let (left, left_path) = side(true);
        let (right, right_path) = side(false);
        let (ll, rl) = (left.liminf(), right.liminf());
        let liminf = fx.clone().min(ll.clone()).min(rl.clone());
        let from_below_at_l = [&left, &right].iter().any(|s| matches!(s, Side::FromBelow(l) if *l == liminf));
        Ok(PointAnalysis {
            x: x.to_string(),
            value: fx,
            isolated: left == Side::NoApproach && right == Side::NoApproach,
            left,
            right,
            left_liminf: ll,
            right_liminf: rl,
            liminf,
            liminf_attained: !from_below_at_l,
            left_path,
            right_path,
        })
    }

    /// Exact range of the function.
    pub fn image_of(&self) -> &ValueSet {
        &self.global.image
    }

    pub fn jumps_of(&self) -> crate::extreal::Jumps {
        self.global.image.jumps()
    }

    /// Whether some minimizing sequence converges to `x`.
    pub fn min_seq_converging_to(&self, x: &BigRational) -> Result<bool, CheckError> {
        Ok(self.analyze_point(x)?.liminf == self.global.inf)
    }

    /// Index of the last staircase step checked explicitly; later steps behave like it.
    pub fn stair_horizon(&self) -> Option<u64> {
        let s = self.staircase?;
        let uniform = self.global.image.stair_uniform_from().unwrap_or(s.start);
        Some(s.truncation.max(uniform + 1))
    }

    /// Splits the piece containing `at` in its interior into two pieces with the same expression.
    pub fn refine(&self, at: &BigRational) -> Option<PiecewiseFn> {
        let v = ExtendedReal::Finite(at.clone());
        let idx = self.pieces.iter().position(|p| p.interval.lo < v && v < p.interval.hi)?;
        let mut pieces = self.pieces.clone();
        let p = pieces.remove(idx);
        let i = &p.interval;
        pieces.insert(
            idx,
            Piece { interval: Interval::new(v.clone(), true, i.hi.clone(), i.hi_closed), expr: p.expr.clone() },
        );
        pieces.insert(idx, Piece { interval: Interval::new(i.lo.clone(), i.lo_closed, v, false), expr: p.expr });
        PiecewiseFn::new(self.domain.clone(), pieces, self.staircase).ok()
    }
}

fn piece_image(p: &Piece) -> Interval {
    let i = &p.interval;
    let at = |e: &ExtendedReal, sign_if_inf: bool| -> ExtendedReal {
        match e {
            ExtendedReal::Finite(r) => ExtendedReal::Finite(p.expr.eval(r)),
            _ if sign_if_inf => ExtendedReal::PosInf,
            _ => ExtendedReal::NegInf,
        }
    };
    match &p.expr {
        Expr::Constant(c) => Interval::point(ExtendedReal::Finite(c.clone())),
        Expr::Affine { slope, intercept } if slope.is_zero() => {
            Interval::point(ExtendedReal::Finite(intercept.clone()))
        }
        Expr::Affine { slope, .. } => {
            let up = slope.is_positive();
            // an infinite domain end maps to +inf when moving in the increasing direction
            let lo_val = at(&i.lo, !up);
            let hi_val = at(&i.hi, up);
            if up {
                Interval::new(lo_val, i.lo_closed, hi_val, i.hi_closed)
            } else {
                Interval::new(hi_val, i.hi_closed, lo_val, i.lo_closed)
            }
        }
    }
}

/// `x_n = x -+ d/n`, with `d` small enough to stay on the piece.
fn approach_path(x: &BigRational, end: &ExtendedReal, left: bool) -> String {
    let room = match end {
        ExtendedReal::Finite(e) => (x - e).abs(),
        _ => BigRational::from_integer(2.into()),
    };
    let d = if room > BigRational::one() { BigRational::one() } else { room / BigRational::from_integer(2.into()) };
    let step = if d.denom().is_one() { format!("{}/n", d.numer()) } else { format!("{}/({}n)", d.numer(), d.denom()) };
    match (x.is_zero(), left) {
        (true, true) => format!("x_n = -{step}"),
        (true, false) => format!("x_n = {step}"),
        _ => format!("x_n = {} {} {}", x, if left { '-' } else { '+' }, step),
    }
}

/// Points whose analysis decides every global verdict: breakpoints, one interior point per
/// piece, and the staircase steps up to the horizon.
fn cover_points(f: &PiecewiseFn) -> Vec<BigRational> {
    let mut pts: Vec<BigRational> = Vec::new();
    let two = BigRational::from_integer(2.into());
    let push_ends = |i: &Interval, pts: &mut Vec<BigRational>| {
        for e in [&i.lo, &i.hi] {
            if let ExtendedReal::Finite(r) = e {
                pts.push(r.clone());
            }
        }
        let interior = match (&i.lo, &i.hi) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => Some((a + b) / &two),
            (ExtendedReal::Finite(a), _) => Some(a + BigRational::one()),
            (_, ExtendedReal::Finite(b)) => Some(b - BigRational::one()),
            _ => Some(BigRational::zero()),
        };
        if let Some(p) = interior {
            pts.push(p);
        }
    };
    for p in &f.pieces {
        push_ends(&p.interval, &mut pts);
    }
    if let (Some(s), Some(h)) = (f.staircase, f.stair_horizon()) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for n in s.start..=h {
            let nr = BigRational::from_integer(BigInt::from(n));
            pts.push(&nr - &half);
            pts.push(nr);
        }
        pts.push(BigRational::from_integer(BigInt::from(s.start) - BigInt::one()));
    }
    pts.retain(|x| f.in_domain(x));
    pts.sort();
    pts.dedup();
    pts
}

impl Model for PiecewiseFn {
    type Point = BigRational;

    fn backend(&self) -> Backend {
        Backend::Piecewise
    }

    fn global(&self) -> &GlobalData {
        &self.global
    }

    fn local(&self, x: &BigRational) -> Result<LocalData, CheckError> {
        let a = self.analyze_point(x)?;
        let here = format!("constant sequence at {x}");
        let sides = [(&a.left, &a.left_path), (&a.right, &a.right_path)];
        let liminf_path = if a.liminf < a.value {
            sides.iter().find(|(s, _)| s.liminf() == a.liminf).and_then(|(_, p)| (*p).clone())
        } else {
            Some(here.clone())
        };
        // transfer bound: strict constraints from f(x), plateaus and rising sides; from-above
        // sides only forbid values above their limit
        let mut bound = Bound { value: a.value.clone(), inclusive: false, path: Some(here) };
        for (s, p) in sides {
            let (v, inclusive) = match s {
                Side::NoApproach => continue,
                Side::Constant(v) | Side::FromBelow(v) => (v, false),
                Side::FromAbove(v) => (v, true),
            };
            if *v < bound.value || (*v == bound.value && bound.inclusive && !inclusive) {
                bound = Bound { value: v.clone(), inclusive, path: p.clone() };
            }
        }
        let approaches = sides
            .iter()
            .filter_map(|(s, p)| {
                let (limit, kind) = match s {
                    Side::Constant(v) => (v.clone(), ApproachKind::Plateau),
                    Side::FromAbove(v) => (v.clone(), ApproachKind::Descending),
                    _ => return None,
                };
                Some(Approach { limit, kind, path: (*p).clone().unwrap_or_default() })
            })
            .collect();
        let m = &self.global.inf;
        let near_argmin = a.value == *m || [&a.left, &a.right].iter().any(|s| matches!(s, Side::Constant(v) if v == m));
        Ok(LocalData {
            point: a.x,
            value: a.value,
            liminf: a.liminf,
            liminf_attained: a.liminf_attained,
            liminf_path,
            transfer: bound,
            approaches,
            near_argmin,
            isolated: a.isolated,
        })
    }

    fn cover(&self) -> Cover<BigRational> {
        let note = self.stair_horizon().map(|h| format!("staircase steps beyond n = {h} behave exactly like step {h}"));
        Cover { points: cover_points(self), tail_floor: self.staircase.map(|_| ExtendedReal::zero()), note }
    }

    fn parse_point(&self, s: &str) -> Result<BigRational, CheckError> {
        let x = parse_rational(s).map_err(|_| CheckError::UnknownPoint(s.to_string()))?;
        if !self.in_domain(&x) {
            return Err(CheckError::OutsideDomain(x.to_string()));
        }
        Ok(x)
    }

    fn point_name(&self, x: &BigRational) -> String {
        x.to_string()
    }

    fn preimage(&self, v: &ExtendedReal) -> Option<String> {
        let ExtendedReal::Finite(r) = v else { return None };
        for p in &self.pieces {
            let x = match &p.expr {
                Expr::Constant(c) if c == r => p.interval.pick().and_then(|e| e.as_finite().cloned()),
                Expr::Affine { slope, intercept } if !slope.is_zero() => Some((r - intercept) / slope),
                Expr::Affine { intercept, .. } if intercept == r => {
                    p.interval.pick().and_then(|e| e.as_finite().cloned())
                }
                _ => None,
            };
            if let Some(x) = x {
                if p.interval.contains(&ExtendedReal::Finite(x.clone())) {
                    return Some(x.to_string());
                }
            }
        }
        let s = self.staircase?;
        if r.is_positive() && r.numer().is_one() && *r.denom() >= BigInt::from(s.start) {
            return Some(r.denom().to_string());
        }
        None
    }
}

impl fmt::Display for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.pieces.iter().map(|p| format!("{} on {}", p.expr, p.interval)).collect();
        if let Some(s) = self.staircase {
            parts.push(format!("1/n on (n-1,n] for n >= {}", s.start));
        }
        f.write_str(&parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }
    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }
    fn er(s: &str) -> ExtendedReal {
        s.parse().unwrap()
    }
    fn constant(i: &str, c: &str) -> Piece {
        Piece { interval: iv(i), expr: Expr::Constant(q(c)) }
    }
    fn affine(i: &str, m: &str, b: &str) -> Piece {
        Piece { interval: iv(i), expr: Expr::Affine { slope: q(m), intercept: q(b) } }
    }

    #[test]
    fn step_function_at_zero() {
        let f =
            PiecewiseFn::new(vec![iv("(-inf,+inf)")], vec![constant("(-inf,0]", "0"), constant("(0,+inf)", "1")], None)
                .unwrap();
        let a = f.analyze_point(&q("0")).unwrap();
        assert_eq!((a.value.clone(), a.left_liminf.clone(), a.right_liminf.clone()), (er("0"), er("0"), er("1")));
        assert_eq!(a.liminf, er("0"));
        assert_eq!(f.image_of().to_string(), "{0} u {1}");
        assert_eq!(f.jumps_of().listed, vec![(er("0"), er("1"))]);
    }

    #[test]
    fn identity_on_half_open_interval() {
        let f = PiecewiseFn::new(vec![iv("(0,1]")], vec![affine("(0,1]", "1", "0")], None).unwrap();
        assert_eq!(f.image_of().to_string(), "(0,1]");
        assert_eq!(f.image_of().infimum(), (er("0"), false));
        assert!(!f.min_seq_converging_to(&q("1")).unwrap());
        let a = f.analyze_point(&q("1")).unwrap();
        assert_eq!(a.left, Side::FromBelow(er("1")));
        assert_eq!(a.right, Side::NoApproach);
        assert!(!a.liminf_attained);
    }

    #[test]
    fn validation_errors() {
        let overlap = PiecewiseFn::new(vec![iv("[0,2]")], vec![constant("[0,1]", "0"), constant("[1,2]", "1")], None);
        assert!(overlap.unwrap_err().message.contains("overlap"));
        let gap = PiecewiseFn::new(vec![iv("[0,2]")], vec![constant("[0,1)", "0"), constant("(1,2]", "1")], None);
        assert!(gap.unwrap_err().message.contains("domain"));
        assert!(PiecewiseFn::new(vec![iv("[0,+inf]")], vec![], None).is_err());
        assert!(Expr::parse("cubic", &[]).is_err());
    }

    #[test]
    fn staircase_germs() {
        let f = PiecewiseFn::new(
            vec![iv("(-inf,+inf)")],
            vec![constant("(-inf,0]", "0")],
            Some(Staircase { start: 1, truncation: 8 }),
        )
        .unwrap();
        assert_eq!(f.eval(&q("5/2")).unwrap(), q("1/3"));
        let a = f.analyze_point(&q("3")).unwrap();
        assert_eq!(a.left, Side::Constant(er("1/3")));
        assert_eq!(a.right, Side::Constant(er("1/4")));
        let z = f.analyze_point(&q("0")).unwrap();
        assert_eq!(z.right, Side::Constant(er("1")));
        assert_eq!(f.preimage(&er("1/4")), Some("4".to_string()));
    }

    #[test]
    fn refinement_keeps_analysis() {
        let f = PiecewiseFn::new(vec![iv("[0,3]")], vec![affine("[0,3]", "-1", "3")], None).unwrap();
        let g = f.refine(&q("1")).unwrap();
        assert_eq!(g.pieces().len(), 2);
        for x in ["0", "1", "3/2", "3"] {
            let mut a = f.analyze_point(&q(x)).unwrap();
            let mut b = g.analyze_point(&q(x)).unwrap();
            a.left_path = None;
            a.right_path = None;
            b.left_path = None;
            b.right_path = None;
            assert_eq!(a, b);
        }
    }
}
