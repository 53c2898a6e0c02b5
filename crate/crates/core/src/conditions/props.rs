//! Executable forms of the equivalent characterizations. Each side is computed by a
//! separate route so that agreement is a real check.

use serde::Serialize;

use super::{check_at, check_global, Condition};
use crate::error::CheckError;
use crate::extreal::ExtendedReal;
use crate::model::Model;
use crate::piecewise::{PiecewiseFn, Side};
use crate::topology::{FiniteModel, PointSet};

/// A condition computed from its definition and from an equivalent characterization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharPair {
    pub definitional: bool,
    pub characterization: bool,
}

impl CharPair {
    pub fn agrees(&self) -> bool {
        self.definitional == self.characterization
    }
}

fn opens_containing(model: &FiniteModel, x: usize) -> impl Iterator<Item = PointSet> + '_ {
    model.space().opens().iter().copied().filter(move |o| o & (1 << x) != 0)
}

fn inf_over(model: &FiniteModel, set: PointSet) -> ExtendedReal {
    (0..model.space().len())
        .filter(|i| set & (1 << i) != 0)
        .map(|i| model.value(i).clone())
        .min()
        .unwrap_or(ExtendedReal::PosInf)
}

/// Non-empty cycles of length at most two; eventually periodic sequences only
/// matter through their cycle here.
fn cycles(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(vec![i, j]);
            }
        }
    }
    out
}

fn cycle_converges(model: &FiniteModel, cycle: &[usize], x: usize) -> bool {
    opens_containing(model, x).all(|o| cycle.iter().all(|&p| o & (1 << p) != 0))
}

/// The four characterizations of TWLC at `x`, each evaluated from opens and nets directly.
pub fn check_twlc_equivalences(model: &FiniteModel, x: usize) -> Result<[bool; 4], CheckError> {
    let n = model.space().len();
    if x >= n {
        return Err(CheckError::UnknownPoint(x.to_string()));
    }
    let values: Vec<&ExtendedReal> = (0..n).map(|i| model.value(i)).collect();
    // (1) some y and some neighbourhood U with f(y) <= inf_U f
    let one = opens_containing(model, x).any(|o| {
        let inf_u = inf_over(model, o);
        values.iter().any(|v| **v <= inf_u)
    });
    // (2) some y with f(y) <= liminf, liminf as a sup over neighbourhoods
    let liminf = opens_containing(model, x).map(|o| inf_over(model, o)).max().expect("X is open");
    let two = values.iter().any(|v| **v <= liminf);
    // nets converging to x: eventually periodic sequences and one-point trivial nets
    let mut net_liminfs: Vec<ExtendedReal> = cycles(n)
        .into_iter()
        .filter(|c| cycle_converges(model, c, x))
        .map(|c| c.iter().map(|&p| model.value(p).clone()).min().expect("nonempty cycle"))
        .collect();
    net_liminfs.extend((0..n).filter(|&y| cycle_converges(model, &[y], x)).map(|y| model.value(y).clone()));
    // (3) one y below the liminf of every such net
    let three = values.iter().any(|v| net_liminfs.iter().all(|l| **v <= *l));
    // (4) every net has some y below its liminf
    let four = net_liminfs.iter().all(|l| values.iter().any(|v| **v <= *l));
    Ok([one, two, three, four])
}

/// LPC everywhere against closedness of every level set `{f <= lambda}`, `lambda` in the image.
pub fn check_lpc_levelsets(model: &FiniteModel) -> Result<CharPair, CheckError> {
    let definitional = check_global(Condition::LPC, model)?.holds;
    let n = model.space().len();
    let full = model.space().full();
    let opens = model.space().opens();
    let characterization = (0..n).all(|i| {
        let lev = model.level_set(model.value(i));
        opens.contains(&(full & !lev))
    });
    Ok(CharPair { definitional, characterization })
}

/// Whether a minimizing net converges to `x`. Values are finitely many, so a minimizing
/// net is eventually inside the argmin; it converges iff every open around `x` meets the argmin.
fn minimizing_net_converges(model: &FiniteModel, x: usize) -> bool {
    let argmin = model.argmin();
    opens_containing(model, x).all(|o| o & argmin != 0)
}

/// RGI at `x` against "f(x) = inf f, or no minimizing net converges to x".
pub fn check_rgi_char(model: &FiniteModel, x: usize) -> Result<CharPair, CheckError> {
    let definitional = check_at(Condition::RGI, model, &x)?.holds;
    let characterization = *model.value(x) == model.global().inf || !minimizing_net_converges(model, x);
    Ok(CharPair { definitional, characterization })
}

/// QRGI at `x` against "no minimizing net converges to x, or a net inside argmin does".
pub fn check_qrgi_char(model: &FiniteModel, x: usize) -> Result<CharPair, CheckError> {
    let definitional = check_at(Condition::QRGI, model, &x)?.holds;
    let argmin = model.argmin();
    // a net inside the argmin converges to x iff every open around x meets the argmin
    let argmin_net = opens_containing(model, x).all(|o| o & argmin != 0);
    let characterization = !minimizing_net_converges(model, x) || argmin_net;
    Ok(CharPair { definitional, characterization })
}

/// PLC everywhere against the ordering form: countably many jumps (automatic) and, for
/// non-jump pairs, a neighbourhood on which `f` stays at or above `f(y)`. The second side
/// works from the explicit jump list and the raw side profiles.
pub fn check_plc_jump_char(f: &PiecewiseFn) -> Result<CharPair, CheckError> {
    let definitional = check_global(Condition::PLC, f)?.holds;
    let image = f.image_of();
    let jumps = image.jumps();
    let jump_partner = |q: &ExtendedReal| -> Option<ExtendedReal> {
        if let Some((p, _)) = jumps.listed.iter().find(|(_, qq)| qq == q) {
            return Some(p.clone());
        }
        // tail jumps (1/(n+1), 1/n)
        let from = jumps.tail_from?;
        let r = q.as_finite()?;
        let n = r.denom();
        let ok = r.numer() == &1.into() && *n >= from.into();
        ok.then(|| ExtendedReal::Finite(num_rational::BigRational::new(1.into(), n + 1)))
    };
    let mut characterization = true;
    for x in f.cover().points {
        let a = f.analyze_point(&x)?;
        // allowed values c: c <= every side value near x, strictly below a rising side's limit
        let mut bound = (a.value.clone(), true);
        for s in [&a.left, &a.right] {
            let cand = match s {
                Side::NoApproach => continue,
                Side::Constant(v) | Side::FromAbove(v) => (v.clone(), true),
                Side::FromBelow(v) => (v.clone(), false),
            };
            if cand.0 < bound.0 || (cand.0 == bound.0 && !cand.1) {
                bound = cand;
            }
        }
        let partner = jump_partner(&a.value);
        let mut hi = (a.value.clone(), false);
        if let Some(p) = &partner {
            if *p > bound.0 || (*p == bound.0 && !bound.1) {
                hi = (p.clone(), false);
            }
        }
        let window = crate::extreal::Interval::new(bound.0.clone(), !bound.1, hi.0, hi.1);
        if image.meets(&window) {
            characterization = false;
            break;
        }
    }
    Ok(CharPair { definitional, characterization })
}
