use ordstat_core::numeric::linspace;
use ordstat_core::scenario::{first_sign_change, fixture, FigureOutcome, FIGURES, FIXTURES};
use ordstat_core::stochorder::{check_hr, check_st, default_grid, ST_SLACK};
use ordstat_core::theorems::sweep::run_sweep;
use ordstat_core::theorems::{eval_bound, lookup, verify, BoundKind};
use ordstat_core::{BaselineFamily, Direction, ElsBatch, Generator, OrderRelation, Status};

#[test]
fn every_fixture_is_consistent_with_its_theorem() {
    for (name, _) in FIXTURES {
        let s = fixture(name).unwrap();
        let (a, b) = s.batches().unwrap();
        let grid = s.grid.map(|g| g.points());
        let id = s.theorem.as_deref().unwrap();
        let r = verify(lookup(id).unwrap(), &a, &b, grid.as_deref()).unwrap();
        assert!(r.consistent, "{name}: {r:?}");
        if name.starts_with("example") {
            assert!(r.hypotheses_all_pass, "{name}: {:?}", r.hypothesis_results);
            assert_eq!(r.conclusion_verdict.status, Status::Holds, "{name}");
        } else {
            assert!(!r.hypotheses_all_pass, "{name}");
            assert_eq!(r.conclusion_verdict.status, Status::Fails, "{name}");
        }
    }
}

#[test]
fn counterexample_fails_the_expected_clauses() {
    let s = fixture("cex_3_1").unwrap();
    let (a, b) = s.batches().unwrap();
    let r = verify(lookup("T3.17").unwrap(), &a, &b, None).unwrap();
    let failed: Vec<&str> = r.hypothesis_results.iter().filter(|c| !c.passed).map(|c| c.clause.as_str()).collect();
    assert_eq!(failed.len(), 2, "{failed:?}");
    assert!(failed.iter().any(|c| c.contains("super-additive")));
    assert!(failed.iter().any(|c| c.contains("≤ 1")));
}

#[test]
fn identical_batches_pass_relation_clauses() {
    let s = fixture("example_3_1").unwrap();
    let (a, _) = s.batches().unwrap();
    let r = verify(lookup("T3.1").unwrap(), &a, &a, None).unwrap();
    assert!(r.hypotheses_all_pass);
    assert_eq!(r.conclusion_verdict.status, Status::Holds);
}

#[test]
fn figures_match_their_outcomes() {
    for f in FIGURES.iter() {
        let (a, b) = fixture(f.fixture).unwrap().batches().unwrap();
        let grid = f.grid.points();
        let d: Vec<f64> = grid.iter().map(|&x| a.sf_second(x).unwrap() - b.sf_second(x).unwrap()).collect();
        match f.expected {
            FigureOutcome::Dominance(Direction::AGeB) => {
                assert!(d.iter().all(|&v| v >= -ST_SLACK), "{}", f.id);
                let v = check_st(&a, &b, &grid).unwrap();
                assert_eq!((v.status, v.direction), (Status::Holds, Direction::AGeB), "{}", f.id);
            }
            FigureOutcome::Crossing => {
                assert!(first_sign_change(&d, ST_SLACK).is_some(), "{}", f.id);
                let v = check_st(&a, &b, &grid).unwrap();
                assert_eq!(v.status, Status::Fails);
                assert!(v.witness.is_some());
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}

#[test]
fn majorized_pareto_locations_give_hazard_order() {
    let p = BaselineFamily::pareto(1.5).unwrap();
    let a = ElsBatch::independent(p.clone(), vec![3.0, 2.0, 1.0], vec![1.0; 3], vec![1.0; 3]).unwrap();
    let b = ElsBatch::independent(p, vec![2.0; 3], vec![1.0; 3], vec![1.0; 3]).unwrap();
    let r = verify(lookup("T3.5").unwrap(), &a, &b, None).unwrap();
    assert!(r.hypotheses_all_pass, "{:?}", r.hypothesis_results);
    assert_eq!(r.conclusion_verdict.status, Status::Holds);
    let grid = default_grid(&a, &b, OrderRelation::Hr).unwrap();
    let v = check_hr(&a, &b, &grid).unwrap();
    assert_eq!((v.status, v.direction), (Status::Holds, Direction::BGeA));
}

#[test]
fn cor31_bound_dominates_on_reference_batch() {
    let b = ElsBatch::independent(BaselineFamily::pareto(2.0).unwrap(), vec![0.2, 0.4, 0.6], vec![0.5; 3], vec![0.2; 3])
        .unwrap();
    let grid = linspace(1.301, 12.0, 64);
    let r = eval_bound(BoundKind::Cor31SfUpper, &b, Some(&grid)).unwrap();
    assert!(r.supported, "{:?}", r.issues);
    assert!(r.dominates, "{:?}", r.witness);
    assert_eq!(r.points.len(), 64);
}

#[test]
fn cor35_mean_location_dominates() {
    let p = BaselineFamily::pareto(1.5).unwrap();
    let b = ElsBatch::independent(p, vec![0.5, 1.0, 2.5], vec![1.0; 3], vec![1.0; 3]).unwrap();
    for kind in [BoundKind::Cor35HazardLower, BoundKind::Cor35ParetoLower] {
        let r = eval_bound(kind, &b, None).unwrap();
        assert!(r.supported, "{:?}", r.issues);
        assert!(r.dominates, "{kind:?}: {:?}", r.witness);
    }
}

#[test]
fn small_sweeps_are_consistent() {
    for id in ["T3.1", "T3.1*", "T3.2*", "T3.3", "T3.4ii", "T3.8", "T3.14", "T3.5", "T3.7", "C3.2", "C3.4", "C3.6"] {
        let s = run_sweep(id, 10, 99).unwrap();
        assert!(s.inconsistent.is_empty(), "{id}: {:?}", s.inconsistent[0].report);
        assert_eq!(s.hypotheses_passed, 10, "{id}");
    }
}

/// Two-copula location result: with `φ_B∘ψ_A` sub-additive (Gumbel frailty `a_A <= a_B`) the larger
/// copula lowers the survival of the second smallest of two (`S_1 + S_2 - C`), so the stated
/// dominance can fail although every hypothesis holds.
#[test]
fn two_copula_location_result_fails_for_pairs() {
    let p = BaselineFamily::pareto(0.694476504600421).unwrap();
    let th = vec![1.6676350998269962, 2.307811221595413];
    let al = vec![0.45913420805205374; 2];
    let a = ElsBatch::new(
        p.clone(),
        vec![2.355167831015539, 5.568116180856217],
        th.clone(),
        al.clone(),
        Some(Generator::gumbel_frailty(0.10512002914611972).unwrap()),
    )
    .unwrap();
    let b = ElsBatch::new(
        p,
        vec![3.9178072448129266, 4.005476767058829],
        th,
        al,
        Some(Generator::gumbel_frailty(0.9125960605864623).unwrap()),
    )
    .unwrap();
    let r = verify(lookup("T3.15i").unwrap(), &a, &b, None).unwrap();
    assert!(r.hypotheses_all_pass, "{:?}", r.hypothesis_results);
    assert_eq!(r.conclusion_verdict.status, Status::Fails);
    assert!(!r.consistent);
    let w = r.conclusion_verdict.witness.unwrap();
    assert!(w.value_b - w.value_a > 5e-3);
}
