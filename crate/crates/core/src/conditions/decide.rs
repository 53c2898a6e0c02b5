//! Decision rules over [`LocalData`]. Both backends share them; see `docs/reductions.md`.

use super::{Condition, Verdict, Witness};
use crate::error::CheckError;
use crate::extreal::{ExtendedReal, Interval};
use crate::model::{ApproachKind, GlobalData, LocalData, Model};

/// Outcome of a local decision: truth value plus certificate.
type Decision = (bool, Option<Witness>);

fn point_witness(v: ExtendedReal, preimage: &dyn Fn(&ExtendedReal) -> Option<String>) -> Witness {
    match preimage(&v) {
        Some(point) => Witness::Point { point, value: v },
        None => Witness::Value { value: v },
    }
}

fn approach(path: &Option<String>, limit: &ExtendedReal) -> Witness {
    Witness::Approach { path: path.clone().unwrap_or_default(), limit: limit.clone() }
}

fn nbhd(description: String) -> Option<Witness> {
    Some(Witness::Neighbourhood { description })
}

/// Decides a pointwise condition from the local summary. Sequential conditions must be
/// mapped to their counterparts by the caller; they are decided here as their counterpart.
pub fn decide_local(
    cond: Condition,
    local: &LocalData,
    global: &GlobalData,
    preimage: &dyn Fn(&ExtendedReal) -> Option<String>,
) -> Result<Decision, CheckError> {
    use Condition::*;
    let fx = &local.value;
    let l = &local.liminf;
    let m = &global.inf;
    let img = &global.image;
    // a violating value, if any, among the given windows
    let violation = |windows: &[Interval]| -> Decision {
        match windows.iter().find_map(|w| img.pick_in(w)) {
            Some(v) => (false, Some(point_witness(v, preimage))),
            None => (true, None),
        }
    };
    // the "c = L with L not realized by any neighbourhood" clause of WLC-type conditions
    let unattained_l = l < fx && !local.liminf_attained && img.contains(l);
    let decision = match cond.evaluated_as() {
        LSC => {
            if fx <= l {
                (true, None)
            } else {
                (false, Some(approach(&local.liminf_path, l)))
            }
        }
        LPC => violation(&[Interval::new(l.clone(), true, fx.clone(), false)]),
        LQC => violation(&[Interval::new(l.clone(), false, fx.clone(), false)]),
        WLC => {
            let mut d = violation(&[Interval::new(l.clone(), false, fx.clone(), false)]);
            if d.0 && unattained_l {
                d = (false, Some(point_witness(l.clone(), preimage)));
            }
            d
        }
        PLC => {
            // the pair (x, y) is a jump point exactly when f(y) is the attained predecessor of f(x)
            let p = img.predecessor(fx);
            let window = match &p {
                Some(p) if p > l => Some(Interval::new(l.clone(), false, p.clone(), false)),
                Some(_) => None,
                None => Some(Interval::new(l.clone(), false, fx.clone(), false)),
            };
            let mut d = violation(window.as_slice());
            if d.0 && unattained_l && p.as_ref() != Some(l) {
                d = (false, Some(point_witness(l.clone(), preimage)));
            }
            d
        }
        SM => match local.approaches.iter().find(|a| a.limit < *fx) {
            Some(a) => (false, Some(Witness::Approach { path: a.path.clone(), limit: a.limit.clone() })),
            None => (true, None),
        },
        DSC => match local.approaches.iter().find(|a| a.kind == ApproachKind::Descending && a.limit < *fx) {
            Some(a) => (false, Some(Witness::Approach { path: a.path.clone(), limit: a.limit.clone() })),
            None => (true, None),
        },
        RGI => {
            if fx == m {
                (true, nbhd("f(x) equals inf f".into()))
            } else if l > m {
                (true, nbhd(format!("some neighbourhood U has inf_U f > inf f = {m}")))
            } else {
                (false, Some(approach(&local.liminf_path, l)))
            }
        }
        QRGI => {
            if local.near_argmin {
                (true, nbhd("x lies in the closure of argmin f".into()))
            } else if l > m {
                (true, nbhd(format!("some neighbourhood U has inf_U f > inf f = {m}")))
            } else {
                (false, Some(approach(&local.liminf_path, l)))
            }
        }
        BLSCA => {
            let mut violators = local.approaches.iter().filter(|a| a.limit < *fx);
            if let Some(a) = violators.clone().find(|a| a.limit == *m) {
                (false, Some(Witness::Approach { path: a.path.clone(), limit: a.limit.clone() }))
            } else {
                let lowest = violators.by_ref().map(|a| &a.limit).min();
                (true, Some(Witness::Threshold { a: threshold(m, lowest) }))
            }
        }
        TLC => {
            if fx == m {
                (true, nbhd("f(x) equals inf f".into()))
            } else {
                let b = &local.transfer;
                let window = Interval::new(ExtendedReal::NegInf, true, b.value.clone(), b.inclusive);
                match img.pick_in(&window) {
                    Some(v) => (true, Some(point_witness(v, preimage))),
                    None => (false, Some(approach(&b.path, &b.value))),
                }
            }
        }
        TWLC => {
            let below = img.pick_in(&Interval::below(l));
            let at = (local.liminf_attained && img.contains(l)).then(|| l.clone());
            match below.or(at) {
                Some(v) => (true, Some(point_witness(v, preimage))),
                None => (false, Some(approach(&local.liminf_path, l))),
            }
        }
        UBLSCA | UBSLSCA => return Err(CheckError::GlobalOnly(cond.name().to_string())),
        seq => unreachable!("{seq} is mapped to its counterpart"),
    };
    Ok(decision)
}

/// A threshold strictly between `inf f` and every violating limit, or `+inf` when nothing
/// violates. With `inf f = +inf` the interval `(inf f, inf]` is empty and `+inf` is admitted.
fn threshold(inf: &ExtendedReal, lowest_violation: Option<&ExtendedReal>) -> ExtendedReal {
    match lowest_violation {
        Some(v) => inf.between(v).unwrap_or(ExtendedReal::PosInf),
        None => ExtendedReal::PosInf,
    }
}

fn reduction_note<M: Model>(cond: Condition, model: &M) -> String {
    let base = model.backend().reduction();
    match cond.counterpart() {
        Some(k) => format!("{base}; decided as {k}, equivalent to {cond} on first-countable spaces"),
        None => base.to_string(),
    }
}

/// Verdict for a pointwise condition at `x`.
pub fn check_at<M: Model>(cond: Condition, model: &M, x: &M::Point) -> Result<Verdict, CheckError> {
    if cond.is_global_only() {
        return Err(CheckError::GlobalOnly(cond.name().to_string()));
    }
    let local = model.local(x)?;
    let (holds, witness) = decide_local(cond, &local, model.global(), &|v| model.preimage(v))?;
    Ok(Verdict { condition: cond, point: Some(local.point), holds, witness, reduction: reduction_note(cond, model) })
}

/// Verdicts for every pointwise condition at `x`, in definition order.
pub fn check_all_at<M: Model>(model: &M, x: &M::Point) -> Result<Vec<Verdict>, CheckError> {
    Condition::ALL.iter().filter(|c| !c.is_global_only()).map(|&c| check_at(c, model, x)).collect()
}

/// UBLSCA: one threshold `a > inf f` serving every point at once.
pub fn decide_uniform<M: Model>(model: &M) -> Result<Decision, CheckError> {
    let global = model.global();
    let m = &global.inf;
    let cover = model.cover();
    let mut lowest: Option<ExtendedReal> = None;
    for x in &cover.points {
        let local = model.local(x)?;
        for a in local.approaches.iter().filter(|a| a.limit < local.value) {
            if a.limit == *m {
                let inner = Witness::Approach { path: a.path.clone(), limit: a.limit.clone() };
                return Ok((false, Some(Witness::AtPoint { point: local.point, inner: Box::new(inner) })));
            }
            if lowest.as_ref().is_none_or(|l| a.limit < *l) {
                lowest = Some(a.limit.clone());
            }
        }
    }
    if let Some(floor) = &cover.tail_floor {
        if floor == m {
            let description = format!(
                "violating limits at the staircase tail decrease to inf f = {m}: \
                 for every a > {m} some step n with 1/n <= a has f(n) = 1/n > 1/(n+1) = lim f(n + 1/k)"
            );
            return Ok((false, Some(Witness::Neighbourhood { description })));
        }
        if lowest.as_ref().is_none_or(|l| floor < l) {
            lowest = Some(floor.clone());
        }
    }
    Ok((true, Some(Witness::Threshold { a: threshold(m, lowest.as_ref()) })))
}

/// Verdict for the function as a whole.
pub fn check_global<M: Model>(cond: Condition, model: &M) -> Result<Verdict, CheckError> {
    let cover = model.cover();
    let mut reduction = reduction_note(cond, model);
    if let Some(note) = &cover.note {
        reduction = format!("{reduction}; {note}");
    }
    if cond.is_global_only() {
        let (holds, witness) = decide_uniform(model)?;
        return Ok(Verdict { condition: cond, point: None, holds, witness, reduction });
    }
    for x in &cover.points {
        let local = model.local(x)?;
        let (holds, witness) = decide_local(cond, &local, model.global(), &|v| model.preimage(v))?;
        if !holds {
            let witness = witness.map(|w| Witness::AtPoint { point: local.point.clone(), inner: Box::new(w) });
            return Ok(Verdict { condition: cond, point: None, holds: false, witness, reduction });
        }
    }
    Ok(Verdict { condition: cond, point: None, holds: true, witness: None, reduction })
}
