//! Finitely presented infinite value sequences and the decreasing-subsequence dichotomy.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::ExtendedReal;

/// An infinite sequence of extended reals with a finite description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueSequence {
    /// `prefix` followed by `cycle` repeated forever. A one-term cycle is an eventually constant tail.
    Periodic { prefix: Vec<ExtendedReal>, cycle: Vec<ExtendedReal> },
    /// `prefix` followed by `limit + scale / (k + offset)` for `k = 0, 1, 2, ...`; `offset >= 1`.
    Harmonic { prefix: Vec<ExtendedReal>, limit: BigRational, scale: BigRational, offset: u64 },
    /// Round robin: term `n` is term `n / k` of component `n % k`.
    Interleave(Vec<ValueSequence>),
}

/// Outcome of [`extract_decreasing`].
#[derive(Clone, Debug)]
pub enum Decreasing {
    /// Every term from index `from` on equals the infimum.
    EventuallyConstantAtInf { from: usize },
    /// Strictly increasing indices along which the values strictly decrease.
    Subsequence(Box<DecreasingIndices>),
}

/// Lazily computed record-low index map; an infinite iterator.
#[derive(Clone, Debug)]
pub struct DecreasingIndices {
    seq: ValueSequence,
    inf: ExtendedReal,
    next: usize,
    last: Option<ExtendedReal>,
}

impl Iterator for DecreasingIndices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        // Terminates: infinitely many terms exceed the infimum and the sequence converges to it.
        loop {
            let i = self.next;
            self.next += 1;
            let v = self.seq.term(i);
            if v <= self.inf {
                continue;
            }
            if self.last.as_ref().is_none_or(|l| v < *l) {
                self.last = Some(v);
                return Some(i);
            }
        }
    }
}

/// The sequence does not converge to its own infimum.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("sequence does not converge to its infimum (limit {limit}, infimum {infimum})")]
pub struct PreconditionViolation {
    pub limit: String,
    pub infimum: ExtendedReal,
}

impl ValueSequence {
    pub fn constant(v: ExtendedReal) -> Self {
        ValueSequence::Periodic { prefix: vec![], cycle: vec![v] }
    }

    /// `1/1, 1/2, 1/3, ...`
    pub fn harmonic() -> Self {
        ValueSequence::Harmonic {
            prefix: vec![],
            limit: BigRational::zero(),
            scale: BigRational::from_integer(1.into()),
            offset: 1,
        }
    }

    pub fn term(&self, n: usize) -> ExtendedReal {
        match self {
            ValueSequence::Periodic { prefix, cycle } => {
                if n < prefix.len() {
                    prefix[n].clone()
                } else {
                    cycle[(n - prefix.len()) % cycle.len()].clone()
                }
            }
            ValueSequence::Harmonic { prefix, limit, scale, offset } => {
                if n < prefix.len() {
                    prefix[n].clone()
                } else {
                    let k = BigInt::from((n - prefix.len()) as u64 + offset);
                    ExtendedReal::Finite(limit + scale / BigRational::from_integer(k))
                }
            }
            ValueSequence::Interleave(parts) => parts[n % parts.len()].term(n / parts.len()),
        }
    }

    pub fn terms(&self, count: usize) -> Vec<ExtendedReal> {
        (0..count).map(|n| self.term(n)).collect()
    }

    /// Checks the structural requirements (nonempty cycle, positive offset, nonempty interleave).
    pub fn is_well_formed(&self) -> bool {
        match self {
            ValueSequence::Periodic { cycle, .. } => !cycle.is_empty(),
            ValueSequence::Harmonic { offset, .. } => *offset >= 1,
            ValueSequence::Interleave(parts) => !parts.is_empty() && parts.iter().all(ValueSequence::is_well_formed),
        }
    }

    /// `inf_n x_n` with attainment.
    pub fn infimum(&self) -> (ExtendedReal, bool) {
        let prefix_min = |prefix: &[ExtendedReal]| prefix.iter().min().cloned();
        let (tail, tail_attained, prefix) = match self {
            ValueSequence::Periodic { prefix, cycle } => {
                (cycle.iter().min().cloned().expect("nonempty cycle"), true, prefix_min(prefix))
            }
            ValueSequence::Harmonic { prefix, limit, scale, offset } => {
                let first = limit + scale / BigRational::from_integer(BigInt::from(*offset));
                let (v, att) = if scale.is_positive() { (limit.clone(), false) } else { (first, true) };
                (ExtendedReal::Finite(v), att, prefix_min(prefix))
            }
            ValueSequence::Interleave(parts) => {
                let mut best: Option<(ExtendedReal, bool)> = None;
                for p in parts {
                    let (v, a) = p.infimum();
                    best = Some(match best {
                        None => (v, a),
                        Some((b, _)) if v < b => (v, a),
                        Some((b, ba)) if v == b => (b, ba || a),
                        Some(keep) => keep,
                    });
                }
                return best.expect("nonempty interleave");
            }
        };
        match prefix {
            Some(p) if p <= tail => (p, true),
            _ => (tail, tail_attained),
        }
    }

    /// `lim_n x_n` when it exists.
    pub fn limit(&self) -> Option<ExtendedReal> {
        match self {
            ValueSequence::Periodic { cycle, .. } => {
                let first = &cycle[0];
                cycle.iter().all(|c| c == first).then(|| first.clone())
            }
            ValueSequence::Harmonic { limit, .. } => Some(ExtendedReal::Finite(limit.clone())),
            ValueSequence::Interleave(parts) => {
                let first = parts[0].limit()?;
                for p in &parts[1..] {
                    if p.limit()? != first {
                        return None;
                    }
                }
                Some(first)
            }
        }
    }

    /// `liminf_n x_n`.
    pub fn liminf(&self) -> ExtendedReal {
        match self {
            ValueSequence::Periodic { cycle, .. } => cycle.iter().min().cloned().expect("nonempty cycle"),
            ValueSequence::Harmonic { limit, .. } => ExtendedReal::Finite(limit.clone()),
            ValueSequence::Interleave(parts) => {
                parts.iter().map(ValueSequence::liminf).min().expect("nonempty interleave")
            }
        }
    }

    /// First index from which every term equals `v`, if the sequence is eventually constant at `v`.
    pub fn eventually_constant_at(&self, v: &ExtendedReal) -> Option<usize> {
        match self {
            ValueSequence::Periodic { prefix, cycle } => {
                if cycle.iter().any(|c| c != v) {
                    return None;
                }
                let mut from = prefix.len();
                while from > 0 && prefix[from - 1] == *v {
                    from -= 1;
                }
                Some(from)
            }
            ValueSequence::Harmonic { prefix, limit, scale, .. } => {
                if !scale.is_zero() || ExtendedReal::Finite(limit.clone()) != *v {
                    return None;
                }
                let mut from = prefix.len();
                while from > 0 && prefix[from - 1] == *v {
                    from -= 1;
                }
                Some(from)
            }
            ValueSequence::Interleave(parts) => {
                let k = parts.len();
                let mut from = 0;
                for (j, p) in parts.iter().enumerate() {
                    let f = p.eventually_constant_at(v)?;
                    // term f of component j sits at index f*k + j
                    if f > 0 {
                        from = from.max(f * k + j + 1 - k);
                    }
                }
                Some(from)
            }
        }
    }
}

/// Either the sequence is eventually constant at its infimum, or a strictly decreasing
/// subsequence is produced (greedy record lows among terms above the infimum).
pub fn extract_decreasing(seq: &ValueSequence) -> Result<Decreasing, PreconditionViolation> {
    let (inf, _) = seq.infimum();
    match seq.limit() {
        Some(l) if l == inf => {}
        other => {
            return Err(PreconditionViolation {
                limit: other.map_or_else(|| "none".to_string(), |l| l.to_string()),
                infimum: inf,
            })
        }
    }
    if let Some(from) = seq.eventually_constant_at(&inf) {
        return Ok(Decreasing::EventuallyConstantAtInf { from });
    }
    Ok(Decreasing::Subsequence(Box::new(DecreasingIndices { seq: seq.clone(), inf, next: 0, last: None })))
}

/// `v[i+1] <= v[i]` throughout.
pub fn is_decreasing(values: &[ExtendedReal]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}

/// `v[i+1] < v[i]` throughout.
pub fn is_strictly_decreasing(values: &[ExtendedReal]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn er(s: &str) -> ExtendedReal {
        s.parse().unwrap()
    }

    #[test]
    fn constant_sequence_is_eventually_constant() {
        let s = ValueSequence::constant(er("3"));
        assert!(matches!(extract_decreasing(&s), Ok(Decreasing::EventuallyConstantAtInf { from: 0 })));
    }

    #[test]
    fn harmonic_is_its_own_subsequence() {
        let Ok(Decreasing::Subsequence(ix)) = extract_decreasing(&ValueSequence::harmonic()) else {
            panic!("expected a subsequence");
        };
        assert_eq!(ix.take(6).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn non_convergent_sequence_is_rejected() {
        let s = ValueSequence::Periodic { prefix: vec![], cycle: vec![er("0"), er("1")] };
        assert!(extract_decreasing(&s).is_err());
        // converges, but to something above its infimum
        let t = ValueSequence::Periodic { prefix: vec![er("-1")], cycle: vec![er("0")] };
        assert!(extract_decreasing(&t).is_err());
    }

    #[test]
    fn interleaved_tail_constant_from() {
        let s = ValueSequence::Interleave(vec![
            ValueSequence::Periodic { prefix: vec![er("5"), er("4")], cycle: vec![er("0")] },
            ValueSequence::constant(er("0")),
        ]);
        // terms: 5 0 4 0 0 0 ...
        assert_eq!(s.eventually_constant_at(&er("0")), Some(3));
        assert_eq!(s.infimum(), (er("0"), true));
    }

    #[test]
    fn monotonicity_predicates() {
        assert!(is_decreasing(&[er("2"), er("2"), er("1")]));
        assert!(!is_strictly_decreasing(&[er("2"), er("2"), er("1")]));
        assert!(is_strictly_decreasing(&[er("+inf"), er("2"), er("-inf")]));
    }
}
