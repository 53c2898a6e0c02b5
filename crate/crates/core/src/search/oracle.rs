//! Literal evaluation of every definition on a finite model.
//!
//! Nothing here uses minimal neighbourhoods or the backend's [`LocalData`]: neighbourhood
//! quantifiers range over the open sets containing the point, and sequence or net
//! quantifiers range over eventually periodic sequences (prefix and cycle of length at
//! most two). On a finite space every convergent sequence agrees, for the purposes of
//! these definitions, with one of that shape, and sequences are the presentable
//! non-trivial nets.
//!
//! Values are replaced by their rank in the image; every definition only compares values.
//!
//! [`LocalData`]: crate::model::LocalData

use crate::conditions::Condition;
use crate::topology::{bit, members, FiniteModel, PointSequence, PointSet};

const MAX_PREFIX: usize = 2;
const MAX_CYCLE: usize = 2;

/// A convergent sequence reduced to what the definitions look at.
struct Seq {
    /// Value ranks of the prefix, one full cycle, and the cycle again (to see the wrap).
    terms: Vec<usize>,
    /// Lowest rank taken infinitely often.
    liminf: usize,
    /// Values tend to the infimum of `f`.
    minimizing: bool,
    decreasing: bool,
    strictly_decreasing: bool,
    /// Every term lies in the argmin.
    in_argmin: bool,
}

impl Seq {
    /// Limit of a decreasing sequence: its (constant) cycle value.
    fn limit(&self) -> usize {
        *self.terms.last().expect("nonempty")
    }
}

pub struct Literal<'a> {
    model: &'a FiniteModel,
    rank: Vec<usize>,
    top: usize,
    opens_at: Vec<Vec<PointSet>>,
    converging: Vec<Vec<Seq>>,
}

fn sequences(n: usize) -> Vec<PointSequence> {
    let words = |len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out.into_iter().flat_map(|w| (0..n).map(move |p| [w.clone(), vec![p]].concat())).collect();
        }
        out
    };
    let prefixes: Vec<Vec<usize>> = (0..=MAX_PREFIX).flat_map(words).collect();
    let cycles: Vec<Vec<usize>> = (1..=MAX_CYCLE).flat_map(words).collect();
    prefixes
        .iter()
        .flat_map(|p| cycles.iter().map(move |c| PointSequence { prefix: p.clone(), cycle: c.clone() }))
        .collect()
}

impl<'a> Literal<'a> {
    pub fn new(model: &'a FiniteModel) -> Self {
        let space = model.space();
        let n = space.len();
        let mut image: Vec<_> = model.values().to_vec();
        image.sort();
        image.dedup();
        let rank: Vec<usize> = model.values().iter().map(|v| image.binary_search(v).expect("value in image")).collect();
        let opens_at: Vec<Vec<PointSet>> =
            (0..n).map(|x| space.opens().iter().copied().filter(|&o| o & bit(x) != 0).collect()).collect();
        let all = sequences(n);
        let converging = (0..n)
            .map(|x| {
                all.iter()
                    .filter(|s| opens_at[x].iter().all(|&o| s.cycle.iter().all(|&p| o & bit(p) != 0)))
                    .map(|s| {
                        let terms: Vec<usize> =
                            s.prefix.iter().chain(&s.cycle).chain(&s.cycle).map(|&p| rank[p]).collect();
                        Seq {
                            liminf: s.cycle.iter().map(|&p| rank[p]).min().expect("nonempty cycle"),
                            decreasing: terms.windows(2).all(|w| w[1] <= w[0]),
                            strictly_decreasing: terms.windows(2).all(|w| w[1] < w[0]),
                            minimizing: s.cycle.iter().all(|&p| rank[p] == 0),
                            in_argmin: terms.iter().all(|&r| r == 0),
                            terms,
                        }
                    })
                    .collect()
            })
            .collect();
        Literal { model, rank, top: image.len() - 1, opens_at, converging }
    }

    fn n(&self) -> usize {
        self.rank.len()
    }

    fn inf_over(&self, o: PointSet) -> usize {
        members(o).map(|z| self.rank[z]).min().expect("open contains the point")
    }

    fn liminf(&self, x: usize) -> usize {
        self.opens_at[x].iter().map(|&o| self.inf_over(o)).max().expect("the whole space is open")
    }

    fn seqs(&self, x: usize) -> &[Seq] {
        &self.converging[x]
    }

    fn below(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let fx = self.rank[x];
        (0..self.n()).map(|y| self.rank[y]).filter(move |&v| v < fx)
    }

    /// `(c, f(x))` is a jump: both in the image with nothing in between.
    fn jump_below(&self, c: usize, x: usize) -> bool {
        c + 1 == self.rank[x]
    }

    fn some_nbhd_above(&self, x: usize, c: usize) -> bool {
        self.opens_at[x].iter().any(|&o| c <= self.inf_over(o))
    }

    /// Decreasing sequences staying at or below rank `a` end at or above `f(x)`.
    fn blsca_with(&self, x: usize, a: usize) -> bool {
        let fx = self.rank[x];
        self.seqs(x)
            .iter()
            .filter(|s| s.decreasing)
            .filter(|s| s.terms.iter().all(|&t| t <= a))
            .all(|s| fx <= s.limit())
    }

    /// The literal verdict of a pointwise condition at `x`.
    pub fn at(&self, cond: Condition, x: usize) -> bool {
        use Condition::*;
        let fx = self.rank[x];
        let is_min = fx == 0;
        let seqs = self.seqs(x);
        match cond {
            LSC => fx <= self.liminf(x),
            SLSC => seqs.iter().all(|s| fx <= s.liminf),
            LPC => self.below(x).all(|c| c < self.liminf(x)),
            SLPC => self.below(x).all(|c| seqs.iter().all(|s| c < s.liminf)),
            WLC => self.below(x).all(|c| self.some_nbhd_above(x, c)),
            SWLC => self.below(x).all(|c| seqs.iter().all(|s| c <= s.liminf)),
            LQC => self.below(x).all(|c| c <= self.liminf(x)),
            SLQC => self.below(x).all(|c| seqs.iter().all(|s| c <= s.liminf)),
            PLC => self.below(x).filter(|&c| !self.jump_below(c, x)).all(|c| self.some_nbhd_above(x, c)),
            SPLC => self.below(x).filter(|&c| !self.jump_below(c, x)).all(|c| seqs.iter().all(|s| c <= s.liminf)),
            SM | LM => seqs.iter().filter(|s| s.decreasing).all(|s| s.terms.iter().all(|&t| fx <= t)),
            LSCA => seqs.iter().filter(|s| s.decreasing).all(|s| fx <= s.limit()),
            DSC | SDSC => seqs.iter().filter(|s| s.strictly_decreasing).all(|s| fx <= s.limit()),
            RGI => is_min || self.opens_at[x].iter().any(|&o| 0 < self.inf_over(o)),
            ISLSC => is_min || !seqs.iter().any(|s| s.minimizing),
            QRGI => {
                self.opens_at[x].iter().all(|&o| members(o).any(|z| self.rank[z] == 0))
                    || self.opens_at[x].iter().any(|&o| self.inf_over(o) > 0)
            }
            SQRGI => !seqs.iter().any(|s| s.minimizing) || seqs.iter().any(|s| s.in_argmin),
            BLSCA | BSLSCA => (0..=self.top).any(|a| self.blsca_with(x, a)),
            TLC => {
                is_min
                    || (0..self.n())
                        .any(|y| self.opens_at[x].iter().any(|&o| members(o).all(|z| self.rank[y] < self.rank[z])))
            }
            STLC => is_min || (0..self.n()).any(|y| seqs.iter().all(|s| self.rank[y] < s.liminf)),
            TWLC => (0..self.n()).any(|y| self.some_nbhd_above(x, self.rank[y])),
            STWLC => (0..self.n()).any(|y| seqs.iter().all(|s| self.rank[y] <= s.liminf)),
            UBLSCA | UBSLSCA => self.global(cond),
        }
    }

    /// The literal verdict for the function as a whole.
    pub fn global(&self, cond: Condition) -> bool {
        if cond.is_global_only() {
            // a ranges over (inf f, +inf]; rank 0 stands for values just above the infimum
            return (0..=self.top).any(|a| (0..self.n()).all(|x| self.blsca_with(x, a)));
        }
        (0..self.n()).all(|x| self.at(cond, x))
    }

    pub fn model(&self) -> &FiniteModel {
        self.model
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::ExtendedReal;
    use crate::topology::FiniteSpace;
    use std::sync::Arc;

    fn sierpinski(a: i64, b: i64) -> FiniteModel {
        let s = FiniteSpace::with_default_names(2, vec![0b00, 0b01, 0b11]).unwrap();
        FiniteModel::new(Arc::new(s), vec![ExtendedReal::from_int(a), ExtendedReal::from_int(b)]).unwrap()
    }

    #[test]
    fn sierpinski_lsc_by_hand() {
        // {a} is open: b's only neighbourhood is the whole space
        let m = sierpinski(0, 1);
        let lit = Literal::new(&m);
        assert!(lit.at(Condition::LSC, 0));
        assert!(!lit.at(Condition::LSC, 1));
        assert!(!lit.at(Condition::RGI, 1));
        assert!(lit.at(Condition::QRGI, 1));
        assert!(lit.at(Condition::TWLC, 1));
    }

    #[test]
    fn strictly_decreasing_sequences_do_not_exist() {
        let m = sierpinski(1, 0);
        let lit = Literal::new(&m);
        assert!(lit.seqs(1).iter().all(|s| !s.strictly_decreasing));
    }
}
