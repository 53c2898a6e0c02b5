use semicont::conditions::{check_at, check_global};
use semicont::graph::{Graph, Scope};
use semicont::search::{
    cross_validate, cross_validate_with, default_grid, model_by_id, parse_grid, sweep, ModelId, SweepReport,
};
use semicont::topology::LiminfFault;
use semicont::Condition::{self, *};
use semicont::ExtendedReal;

fn graph() -> Graph {
    Graph::load().unwrap()
}

fn grid(s: &str) -> Vec<ExtendedReal> {
    parse_grid(s).unwrap()
}

/// Re-evaluates a reported separation from scratch.
fn replay(report: &SweepReport, scope: Scope, a: Condition, b: Condition) {
    let row = report.row(scope, a, b).unwrap();
    let w = row.witness.as_ref().unwrap_or_else(|| panic!("{a} / {b} not separated"));
    let m = model_by_id(&w.model.parse::<ModelId>().unwrap(), &report.grid).unwrap();
    match &w.point {
        Some(name) => {
            let x = m.space().point(name).unwrap();
            assert!(check_at(a, &m, &x).unwrap().holds, "{a} at {name} in {}", w.model);
            assert!(!check_at(b, &m, &x).unwrap().holds, "{b} at {name} in {}", w.model);
        }
        None => {
            assert!(check_global(a, &m).unwrap().holds);
            assert!(!check_global(b, &m).unwrap().holds);
        }
    }
}

#[test]
fn single_points_satisfy_everything() {
    let g = default_grid();
    for f in 0..g.len() {
        let m = model_by_id(&ModelId { points: 1, topology: 0, function: f }, &g).unwrap();
        for c in Condition::ALL {
            assert!(check_global(c, &m).unwrap().holds, "{c} with f = {}", g[f]);
            if !c.is_global_only() {
                assert!(check_at(c, &m, &0).unwrap().holds);
            }
        }
    }
}

#[test]
fn two_points_never_break_lsc_to_twlc() {
    let r = sweep(&graph(), 2, &grid("0,1")).unwrap();
    assert!(r.is_clean());
    assert_eq!(r.models, 2 + 4 * 4);
    let row = r.row(Scope::Pointwise, LSC, TWLC).unwrap();
    assert!(row.derivable && row.witness.is_none());
}

#[test]
fn three_point_separations() {
    let r = sweep(&graph(), 3, &grid("-1,0,1")).unwrap();
    assert!(r.is_clean(), "{:?}", r.bridge_violations);
    // sequential approximations collapse on finite spaces
    let cell = r.row(Scope::Pointwise, LSCA, LSC).unwrap();
    assert!(cell.witness.is_none());
    assert!(cell.reason.is_some());
    replay(&r, Scope::Pointwise, QRGI, RGI);
    replay(&r, Scope::Pointwise, LQC, LPC);
    replay(&r, Scope::Global, TWLC, TLC);
}

#[test]
fn derivable_pairs_are_never_separated() {
    let r = sweep(&graph(), 3, &default_grid()).unwrap();
    assert!(r.separation_contradictions().is_empty());
    for row in r.pointwise.iter().chain(&r.global) {
        assert!(row.witness.is_none() || !row.derivable);
        assert!(row.witness.is_some() || row.derivable || row.reason.is_some());
    }
}

#[test]
fn reduced_checkers_match_literal_definitions_on_small_spaces() {
    let r = cross_validate(2, &grid("0,1,+inf")).unwrap();
    assert!(r.is_clean());
    assert_eq!(r.models, 3 + 4 * 9);
}

#[test]
fn cross_validation_detects_a_wrong_liminf() {
    let r = cross_validate_with(2, &default_grid(), Some(LiminfFault::PointOnly)).unwrap();
    assert!(!r.mismatches.is_empty());
    assert!(r.mismatches.iter().any(|m| m.condition == LSC && m.reduced && !m.literal));
    // dropping x from its own neighbourhood cannot change any verdict
    let r = cross_validate_with(2, &default_grid(), Some(LiminfFault::Punctured)).unwrap();
    assert!(r.mismatches.is_empty());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let s = sweep(&graph(), 3, &default_grid()).unwrap().render();
            let c = cross_validate(2, &default_grid()).unwrap().render();
            (s, c)
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn exhaustive_three_point_cross_validation() {
    let r = cross_validate(3, &default_grid()).unwrap();
    assert_eq!(r.topologies, 1 + 4 + 29);
    assert!(r.mismatches.is_empty(), "{:?}", &r.mismatches[..r.mismatches.len().min(5)]);
    assert_eq!(r.propositions.len(), 4);
    for p in &r.propositions {
        assert!(p.checks > 0);
        assert!(p.disagreements.is_empty(), "{}: {:?}", p.name, p.disagreements);
    }
}

#[test]
fn exhaustive_four_point_sweep() {
    let r = sweep(&graph(), 4, &default_grid()).unwrap();
    assert_eq!(r.topologies, 1 + 4 + 29 + 355);
    assert!(r.bridge_violations.is_empty(), "{:?}", r.bridge_violations);
    assert!(r.twlc_attainment_exceptions.is_empty());
    assert!(r.tlc_attainment_exceptions.is_empty());
    assert!(r.separation_contradictions().is_empty());
}
