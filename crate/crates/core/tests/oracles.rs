use ordstat_core::orderstat::{
    hazard_second_indep_unit, oracle_sf_second_dep, sf_second_dep, sf_second_indep,
};
use ordstat_core::scenario::fixture;
use ordstat_core::stochorder::mc_sf_second;
use ordstat_core::{BaselineFamily, ElsBatch, Generator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Distribution of the number of failed components by dynamic programming over components;
/// `P(X_{2:n} > x) = P(at most one failed)`.
fn poisson_binomial_sf(batch: &ElsBatch, x: f64) -> f64 {
    let n = batch.n();
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    for i in 0..n {
        let f = batch.marginal_cdf(i, x);
        for k in (0..=i + 1).rev() {
            let stay = p[k] * (1.0 - f);
            let from = if k > 0 { p[k - 1] * f } else { 0.0 };
            p[k] = stay + from;
        }
    }
    p[0] + p[1]
}

fn hand_marginal(a: f64, loc: f64, scale: f64, alpha: f64, x: f64) -> f64 {
    let w: f64 = (x - loc) / scale;
    if w <= 1.0 {
        return 1.0;
    }
    1.0 - (1.0 - w.powf(-a)).powf(alpha)
}

#[test]
fn marginal_survival_by_hand() {
    let b = ElsBatch::homogeneous(BaselineFamily::pareto(2.0).unwrap(), 5.0, 0.5, 0.2, 2, None).unwrap();
    let expect = 1.0 - 0.75f64.powf(0.2);
    assert!((b.marginal_sf(0, 6.0) - expect).abs() < 1e-15);
    assert!((expect - 0.05591).abs() < 1e-5);
}

#[test]
fn independent_matches_dp_and_hand_formula() {
    let s = fixture("example_3_1").unwrap();
    let (a, _) = s.batches().unwrap();
    for x in [9.5, 10.0, 12.0, 20.0, 60.0] {
        let sf = sf_second_indep(&a, x).unwrap();
        assert!((sf - poisson_binomial_sf(&a, x)).abs() < 1e-14);
        let m: Vec<f64> = (0..3)
            .map(|i| hand_marginal(2.0, a.location()[i], a.scale()[i], 0.2, x))
            .collect();
        let f: Vec<f64> = m.iter().map(|s| 1.0 - s).collect();
        let hand = m[0] * m[1] * m[2] + f[0] * m[1] * m[2] + m[0] * f[1] * m[2] + m[0] * m[1] * f[2];
        assert!((sf - hand).abs() < 1e-14);
    }
}

#[test]
fn n2_survival_is_survival_of_maximum() {
    let b = ElsBatch::independent(BaselineFamily::burr(2.0, 1.5).unwrap(), vec![0.0, 1.0], vec![1.0, 2.0], vec![0.7, 1.3])
        .unwrap();
    for x in [0.5, 1.5, 3.0, 8.0] {
        let expect = 1.0 - b.marginal_cdf(0, x) * b.marginal_cdf(1, x);
        assert!((sf_second_indep(&b, x).unwrap() - expect).abs() < 1e-15);
    }
}

#[test]
fn monte_carlo_brackets_example_batch() {
    let s = fixture("example_3_1").unwrap();
    let (a, _) = s.batches().unwrap();
    let est = mc_sf_second(&a, 10.0, 1_000_000, 11).unwrap();
    let exact = sf_second_indep(&a, 10.0).unwrap();
    assert!((est.estimate - exact).abs() <= 3.0 * est.stderr, "{est:?} vs {exact}");
    let below = mc_sf_second(&a, 4.0, 10_000, 1).unwrap();
    assert_eq!(below.estimate, 1.0);
}

#[test]
fn dependent_matches_lattice_on_example_3_5() {
    let s = fixture("example_3_5").unwrap();
    let (a, b) = s.batches().unwrap();
    for batch in [&a, &b] {
        for k in 0..16 {
            let x = 5.05 + 3.0 * k as f64;
            let d = sf_second_dep(batch, x).unwrap();
            let o = oracle_sf_second_dep(batch, x).unwrap();
            assert!((d - o).abs() <= 1e-10, "x={x}: {d} vs {o}");
            assert!(d > 0.0 && d <= 1.0);
        }
    }
}

#[test]
fn dependent_n2_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gens = [
        Generator::gumbel_frailty(0.4).unwrap(),
        Generator::gumbel_hougaard(2.0).unwrap(),
        Generator::clayton(1.5).unwrap(),
    ];
    for g in gens {
        let b = ElsBatch::new(
            BaselineFamily::exp_weibull(0.8, 1.5).unwrap(),
            vec![0.0, 0.5],
            vec![1.0, 1.7],
            vec![0.6, 1.2],
            Some(g.clone()),
        )
        .unwrap();
        for _ in 0..16 {
            let x = rng.gen_range(0.6..6.0);
            let (s1, s2) = (b.marginal_sf(0, x), b.marginal_sf(1, x));
            let joint = g.psi(g.phi(s1).unwrap() + g.phi(s2).unwrap());
            let expect = s1 + s2 - joint;
            assert!((sf_second_dep(&b, x).unwrap() - expect).abs() < 1e-12);
        }
    }
}

#[test]
fn independence_generator_reduces_to_product_form() {
    let s = fixture("example_3_1").unwrap();
    let (a, _) = s.batches().unwrap();
    let dep = a.clone().with_generator(Some(Generator::Independence)).unwrap();
    for x in [9.5, 11.0, 30.0] {
        assert!((sf_second_dep(&dep, x).unwrap() - sf_second_indep(&a, x).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn closed_form_hazard_matches_log_survival_slope() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let n = rng.gen_range(2..=4);
        let loc: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
        let sc: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let b = ElsBatch::independent(BaselineFamily::burr(1.5, 2.0).unwrap(), loc.clone(), sc, vec![1.0; n]).unwrap();
        let start = loc.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.1;
        for k in 0..8 {
            let x = start + 0.5 * k as f64;
            let h = 1e-5 * x.abs().max(1.0);
            let ls = |t: f64| sf_second_indep(&b, t).unwrap().ln();
            let numeric = -(ls(x + h) - ls(x - h)) / (2.0 * h);
            let closed = hazard_second_indep_unit(&b, x).unwrap();
            assert!((closed - numeric).abs() <= 1e-5 * closed.abs(), "x={x}: {closed} vs {numeric}");
        }
    }
}

#[test]
fn marginal_hazard_scales_with_inverse_scale() {
    let base = BaselineFamily::trunc_weibull(0.7).unwrap();
    let b = ElsBatch::homogeneous(base.clone(), 2.0, 3.0, 1.0, 2, None).unwrap();
    let x = 9.0;
    let h = 1e-6;
    let numeric = -(b.marginal_sf(0, x + h).ln() - b.marginal_sf(0, x - h).ln()) / (2.0 * h);
    let expect = base.hazard_rate((x - 2.0) / 3.0) / 3.0;
    assert!((numeric - expect).abs() < 1e-6 * expect);
}
