use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use semicont::extreal::{extract_decreasing, is_strictly_decreasing, Decreasing, ValueSequence};
use semicont::extreal::{inf_of, inf_or_top, sup_of, EmptySet};
use semicont::topology::{enumerate_spaces, FiniteModel, FiniteSpace, PointSequence};
use semicont::ExtendedReal;

fn spaces() -> &'static Vec<FiniteSpace> {
    static ALL: OnceLock<Vec<FiniteSpace>> = OnceLock::new();
    ALL.get_or_init(|| (1..=4).flat_map(|n| enumerate_spaces(n).unwrap()).collect())
}

fn extreal() -> impl Strategy<Value = ExtendedReal> {
    prop_oneof![
        1 => Just(ExtendedReal::NegInf),
        1 => Just(ExtendedReal::PosInf),
        6 => (-20i64..20, 1i64..6).prop_map(|(p, q)| ExtendedReal::ratio(p, q)),
    ]
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..6).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn contains(set: u64, p: usize) -> bool {
    set & (1 << p) != 0
}

#[test]
fn order_endpoints() {
    assert!(ExtendedReal::NegInf < ExtendedReal::from_int(-1_000_000));
    assert!(ExtendedReal::from_int(1_000_000) < ExtendedReal::PosInf);
    assert_eq!(inf_of(std::iter::empty()), Err(EmptySet));
    assert_eq!(inf_or_top(std::iter::empty()), ExtendedReal::PosInf);
    assert_eq!("-inf".parse::<ExtendedReal>().unwrap(), ExtendedReal::NegInf);
    assert_eq!("3/6".parse::<ExtendedReal>().unwrap(), ExtendedReal::ratio(1, 2));
}

#[test]
fn space_counts() {
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_spaces(n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 4, 29, 355]);
}

#[test]
fn harmonic_interleave_yields_a_decreasing_subsequence() {
    let seq = ValueSequence::Interleave(vec![
        ValueSequence::harmonic(),
        ValueSequence::Periodic { prefix: vec![ExtendedReal::from_int(5)], cycle: vec![ExtendedReal::zero()] },
    ]);
    let Decreasing::Subsequence(idx) = extract_decreasing(&seq).unwrap() else {
        panic!("not eventually constant");
    };
    let idx: Vec<usize> = idx.take(8).collect();
    assert!(idx.windows(2).all(|w| w[0] < w[1]));
    let values: Vec<ExtendedReal> = idx.iter().map(|&i| seq.term(i)).collect();
    assert!(is_strictly_decreasing(&values));
}

#[test]
fn sequences_not_converging_to_their_infimum_are_rejected() {
    let seq = ValueSequence::Periodic { prefix: vec![], cycle: vec![ExtendedReal::zero(), ExtendedReal::from_int(1)] };
    assert!(extract_decreasing(&seq).is_err());
}

proptest! {
    #[test]
    fn total_order(a in extreal(), b in extreal(), c in extreal()) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        prop_assert_eq!(a.to_string().parse::<ExtendedReal>().unwrap(), a);
    }

    #[test]
    fn between_is_strict(a in extreal(), b in extreal()) {
        match a.between(&b) {
            Some(m) => prop_assert!(a < m && m < b),
            None => prop_assert!(a >= b),
        }
    }

    #[test]
    fn inf_and_sup_bound_the_set(values in proptest::collection::vec(extreal(), 1..8)) {
        let lo = inf_of(&values).unwrap();
        let hi = sup_of(&values).unwrap();
        prop_assert!(values.iter().all(|v| lo <= *v && *v <= hi));
        prop_assert!(values.contains(&lo) && values.contains(&hi));
    }

    #[test]
    fn decreasing_extraction_replays(
        prefix in proptest::collection::vec(rational(), 0..4),
        limit in rational(),
        scale in rational(),
        offset in 1u64..4,
        constant_tail in proptest::collection::vec(any::<bool>(), 0..3),
    ) {
        let dips_below = scale < BigRational::from_integer(0.into()) || prefix.iter().any(|p| *p < limit);
        let mut parts = vec![ValueSequence::Harmonic {
            prefix: prefix.into_iter().map(ExtendedReal::Finite).collect(),
            limit: limit.clone(),
            scale: scale.clone(),
            offset,
        }];
        for _ in &constant_tail {
            parts.push(ValueSequence::constant(ExtendedReal::Finite(limit.clone())));
        }
        let seq = if parts.len() == 1 { parts.pop().unwrap() } else { ValueSequence::Interleave(parts) };
        let inf = seq.infimum().0;
        let outcome = extract_decreasing(&seq);
        prop_assert_eq!(outcome.is_err(), dips_below);
        match outcome {
            Ok(Decreasing::EventuallyConstantAtInf { from }) => {
                prop_assert!(seq.terms(from + 12).iter().skip(from).all(|t| *t == inf));
            }
            Ok(Decreasing::Subsequence(idx)) => {
                let idx: Vec<usize> = idx.take(6).collect();
                prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
                let values: Vec<ExtendedReal> = idx.iter().map(|&i| seq.term(i)).collect();
                prop_assert!(is_strictly_decreasing(&values));
                prop_assert!(values.iter().all(|v| *v > inf));
            }
            // some term sits below the limit, so the limit is not the infimum
            Err(_) => prop_assert!(dips_below),
        }
    }

    #[test]
    fn minimal_neighbourhood_is_least_open(i in 0usize..389, x in 0usize..4) {
        let s = &spaces()[i];
        let x = x % s.len();
        let m = s.min_nbhd(x).unwrap();
        prop_assert!(s.opens().contains(&m));
        prop_assert!(contains(m, x));
        for &o in s.opens() {
            if contains(o, x) {
                prop_assert_eq!(o & m, m);
            }
        }
    }

    #[test]
    fn closure_is_least_closed_superset(i in 0usize..389, set in 0u64..16) {
        let s = &spaces()[i];
        let set = set & s.full();
        let c = s.closure(set);
        prop_assert!(s.is_closed(c));
        prop_assert_eq!(c & set, set);
        for &o in s.opens() {
            let closed = s.full() & !o;
            if closed & set == set {
                prop_assert_eq!(closed & c, c);
            }
        }
    }

    #[test]
    fn liminf_is_sup_of_neighbourhood_infima(i in 0usize..389, values in proptest::collection::vec(-3i64..3, 4), x in 0usize..4) {
        let s = &spaces()[i];
        let n = s.len();
        let x = x % n;
        let values: Vec<ExtendedReal> = values[..n].iter().map(|&v| ExtendedReal::from_int(v)).collect();
        let model = FiniteModel::new(Arc::new(s.clone()), values.clone()).unwrap();
        let oracle = s
            .opens()
            .iter()
            .filter(|&&o| contains(o, x))
            .map(|&o| inf_of((0..n).filter(|&z| contains(o, z)).map(|z| &values[z])).unwrap())
            .max()
            .unwrap();
        prop_assert_eq!(model.liminf_at(x).unwrap(), oracle);
    }

    #[test]
    fn convergence_means_eventually_in_every_open(
        i in 0usize..389,
        prefix in proptest::collection::vec(0usize..4, 0..3),
        cycle in proptest::collection::vec(0usize..4, 1..4),
        x in 0usize..4,
    ) {
        let s = &spaces()[i];
        let n = s.len();
        let seq = PointSequence {
            prefix: prefix.iter().map(|p| p % n).collect(),
            cycle: cycle.iter().map(|p| p % n).collect(),
        };
        let x = x % n;
        let oracle = s.opens().iter().filter(|&&o| contains(o, x)).all(|&o| seq.cycle.iter().all(|&p| contains(o, p)));
        prop_assert_eq!(s.converges(&seq, x).unwrap(), oracle);
    }
}
