use ordstat_core::majorize::{majorized, reciprocal, t_transform, weak_sub, weak_super};
use ordstat_core::numeric::linspace;
use ordstat_core::stochorder::{check_hr, check_st, default_grid};
use ordstat_core::{BaselineFamily, Direction, ElsBatch, Generator, OrderRelation, Status};
use proptest::prelude::*;

fn positive_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..10.0, n)
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..6).prop_flat_map(|n| (positive_vec(n), positive_vec(n)))
}

/// A vector majorized by `y` through a T-transform, then scaled into weak relations.
fn majorized_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, f64)> {
    (2usize..6)
        .prop_flat_map(|n| (positive_vec(n), 0..n, 0..n, 0.0f64..1.0, 0.5f64..1.0))
        .prop_map(|(y, i, j, t, s)| (y.clone(), t_transform(&y, i, j, t), s))
}

proptest! {
    #[test]
    fn implication_chain((y, x) in pair()) {
        if majorized(&y, &x).unwrap() {
            prop_assert!(weak_sub(&y, &x).unwrap());
            prop_assert!(weak_super(&y, &x).unwrap());
        }
        if weak_super(&y, &x).unwrap() {
            prop_assert!(reciprocal(&y, &x).unwrap());
        }
    }

    #[test]
    fn constructed_relations_hold((y, x, s) in majorized_pair()) {
        prop_assert!(majorized(&y, &x).unwrap());
        let shrunk: Vec<f64> = x.iter().map(|v| v * s).collect();
        prop_assert!(weak_sub(&y, &shrunk).unwrap());
        let grown: Vec<f64> = x.iter().map(|v| v / s).collect();
        prop_assert!(weak_super(&y, &grown).unwrap());
        prop_assert!(reciprocal(&y, &grown).unwrap());
    }

    #[test]
    fn reflexive(v in (2usize..6).prop_flat_map(positive_vec)) {
        prop_assert!(majorized(&v, &v).unwrap());
        prop_assert!(weak_sub(&v, &v).unwrap());
        prop_assert!(weak_super(&v, &v).unwrap());
        prop_assert!(reciprocal(&v, &v).unwrap());
    }

    #[test]
    fn transitive((z, i, j, t, k, l, u) in (2usize..6).prop_flat_map(|n| (positive_vec(n), 0..n, 0..n, 0.0f64..1.0, 0..n, 0..n, 0.0f64..1.0))) {
        let y = t_transform(&z, i, j, t);
        let x = t_transform(&y, k, l, u);
        prop_assert!(majorized(&z, &y).unwrap() && majorized(&y, &x).unwrap());
        prop_assert!(majorized(&z, &x).unwrap());
    }

    #[test]
    fn permutation_invariant((y, x) in pair(), rot in 0usize..5) {
        let mut yp = y.clone();
        let r = rot % yp.len();
        yp.rotate_left(r);
        let mut xp = x.clone();
        xp.reverse();
        prop_assert_eq!(majorized(&y, &x).unwrap(), majorized(&yp, &xp).unwrap());
        prop_assert_eq!(weak_sub(&y, &x).unwrap(), weak_sub(&yp, &xp).unwrap());
        prop_assert_eq!(weak_super(&y, &x).unwrap(), weak_super(&yp, &xp).unwrap());
        prop_assert_eq!(reciprocal(&y, &x).unwrap(), reciprocal(&yp, &xp).unwrap());
    }

    #[test]
    fn generator_roundtrip(a in 0.05f64..1.0, gh in 1.0f64..5.0, c in 0.1f64..5.0, v in 1e-8f64..1.0) {
        for g in [Generator::gumbel_frailty(a).unwrap(), Generator::gumbel_hougaard(gh).unwrap(), Generator::clayton(c).unwrap()] {
            let x = g.phi(v).unwrap();
            prop_assert!(x >= 0.0);
            prop_assert!((g.psi(x) - v).abs() <= 1e-9 * v);
        }
    }

    #[test]
    fn survival_is_a_survival_function(
        loc in prop::collection::vec(0.0f64..4.0, 3),
        scale in prop::collection::vec(0.3f64..3.0, 3),
        alpha in 0.1f64..3.0,
        ga in 0.05f64..1.0,
        dependent in any::<bool>(),
    ) {
        let g = dependent.then(|| Generator::gumbel_frailty(ga).unwrap());
        let b = ElsBatch::new(BaselineFamily::burr(1.5, 0.8).unwrap(), loc.clone(), scale, vec![alpha; 3], g).unwrap();
        let min_loc = loc.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((b.sf_second(min_loc - 0.1).unwrap() - 1.0).abs() < 1e-12);
        let mut last = 1.0;
        for k in 0..40 {
            let x = min_loc + 0.25 * k as f64;
            let s = b.sf_second(x).unwrap();
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert!(s <= last + 1e-12);
            last = s;
        }
        prop_assert!(b.sf_second(1e9).unwrap() < 1e-6);
    }

    #[test]
    fn hazard_order_implies_usual_order(
        la in prop::collection::vec(0.0f64..3.0, 3),
        lb in prop::collection::vec(0.0f64..3.0, 3),
        t in 0.5f64..2.0,
    ) {
        let base = BaselineFamily::burr(2.0, 1.0).unwrap();
        let a = ElsBatch::independent(base.clone(), la, vec![t; 3], vec![1.0; 3]).unwrap();
        let b = ElsBatch::independent(base, lb, vec![t; 3], vec![1.0; 3]).unwrap();
        // hr on [x0, inf) only orders the survival ratio from x0 on; start where both survivals are 1
        let hi = *default_grid(&a, &b, OrderRelation::Hr).unwrap().last().unwrap();
        let grid = linspace(-0.5, hi, 512);
        let hr = check_hr(&a, &b, &grid).unwrap();
        if hr.status == Status::Holds {
            let st = check_st(&a, &b, &grid).unwrap();
            prop_assert_eq!(st.status, Status::Holds);
            if hr.direction != Direction::Equal {
                prop_assert!(st.direction == hr.direction || st.direction == Direction::Equal);
            }
        }
    }
}
