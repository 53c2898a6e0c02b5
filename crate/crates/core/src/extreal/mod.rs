//! Exact extended reals: `-inf`, rationals, `+inf`.

mod interval;
mod sequence;

pub use interval::{Interval, Jumps, ValueSet};
pub use sequence::{extract_decreasing, is_decreasing, is_strictly_decreasing, Decreasing, ValueSequence};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;

/// A point of the extended real line with exact rational finite part.
///
/// The derived order follows variant order, so `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedReal {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtendedReal {
    pub fn zero() -> Self {
        ExtendedReal::Finite(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ExtendedReal::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        ExtendedReal::Finite(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Some value strictly between `self` and `other`; `None` unless `self < other`.
    pub fn between(&self, other: &ExtendedReal) -> Option<ExtendedReal> {
        use ExtendedReal::*;
        if self >= other {
            return None;
        }
        let one = BigRational::one();
        Some(match (self, other) {
            (Finite(a), Finite(b)) => Finite((a + b) / BigRational::from_integer(2.into())),
            (NegInf, Finite(b)) => Finite(b - one),
            (Finite(a), PosInf) => Finite(a + one),
            (NegInf, PosInf) => ExtendedReal::zero(),
            _ => unreachable!("ordered pair checked above"),
        })
    }
}

impl From<BigRational> for ExtendedReal {
    fn from(r: BigRational) -> Self {
        ExtendedReal::Finite(r)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::PosInf => f.write_str("+inf"),
            ExtendedReal::Finite(r) => write!(f, "{}", r),
        }
    }
}

/// Serialized as its display form, e.g. `"-1/2"` or `"+inf"`.
impl serde::Serialize for ExtendedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for ExtendedReal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "-inf" | "-∞" => return Ok(ExtendedReal::NegInf),
            "+inf" | "inf" | "+∞" | "∞" => return Ok(ExtendedReal::PosInf),
            _ => {}
        }
        parse_rational(t).map(ExtendedReal::Finite)
    }
}

/// Parses `p/q`, an integer, or an exact decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::new(format!("invalid number literal `{s}`"));
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ParseError::new(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(bad());
    }
    let mut numer: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    if neg {
        numer = -numer;
    }
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

/// Order of two extended reals.
pub fn compare(a: &ExtendedReal, b: &ExtendedReal) -> Ordering {
    a.cmp(b)
}

/// Raised by [`inf_of`] on the empty set.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("infimum of the empty set requested; use inf_or_top for the +inf convention")]
pub struct EmptySet;

/// Least element of a nonempty finite set.
pub fn inf_of<'a, I>(values: I) -> Result<ExtendedReal, EmptySet>
where
    I: IntoIterator<Item = &'a ExtendedReal>,
{
    values.into_iter().min().cloned().ok_or(EmptySet)
}

/// Infimum with the convention `inf {} = +inf`.
pub fn inf_or_top<'a, I>(values: I) -> ExtendedReal
where
    I: IntoIterator<Item = &'a ExtendedReal>,
{
    inf_of(values).unwrap_or(ExtendedReal::PosInf)
}

/// Greatest element of a nonempty finite set.
pub fn sup_of<'a, I>(values: I) -> Result<ExtendedReal, EmptySet>
where
    I: IntoIterator<Item = &'a ExtendedReal>,
{
    values.into_iter().max().cloned().ok_or(EmptySet)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn er(s: &str) -> ExtendedReal {
        s.parse().unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(compare(&er("-inf"), &er("0")), Ordering::Less);
        assert_eq!(compare(&er("+inf"), &er("+inf")), Ordering::Equal);
        assert_eq!(compare(&er("1/3"), &er("1667/5000")), Ordering::Less);
        assert_eq!(er("0.3334"), er("1667/5000"));
    }

    #[test]
    fn literals() {
        assert_eq!(er("-0.25"), ExtendedReal::ratio(-1, 4));
        assert_eq!(er("4/-8"), ExtendedReal::ratio(-1, 2));
        assert_eq!(er(".5"), ExtendedReal::ratio(1, 2));
        assert_eq!(er("3"), ExtendedReal::from_int(3));
        assert!("1/0".parse::<ExtendedReal>().is_err());
        assert!("abc".parse::<ExtendedReal>().is_err());
        assert!("-".parse::<ExtendedReal>().is_err());
        assert_eq!(ExtendedReal::ratio(-3, 6).to_string(), "-1/2");
    }

    #[test]
    fn infima() {
        let s = [er("1"), er("0"), er("2")];
        assert_eq!(inf_of(&s).unwrap(), er("0"));
        assert_eq!(inf_of(&[er("-inf"), er("5")]).unwrap(), ExtendedReal::NegInf);
        assert_eq!(inf_or_top(&[]), ExtendedReal::PosInf);
        assert_eq!(inf_of(&[]), Err(EmptySet));
    }

    #[test]
    fn between_is_strict() {
        let pairs = [("-inf", "+inf"), ("-inf", "-3"), ("2", "+inf"), ("1/3", "1/2")];
        for (a, b) in pairs {
            let m = er(a).between(&er(b)).unwrap();
            assert!(er(a) < m && m < er(b), "{a} {b} {m}");
        }
        assert!(er("1").between(&er("1")).is_none());
    }
}
