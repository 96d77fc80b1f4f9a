//! Random scenario generation for falsification sweeps.
//!
//! Parameters are drawn so that the hypotheses of the chosen result hold by construction:
//! majorization relations come from T-transforms of a random vector, followed by
//! componentwise decreases (for `⪯_w`) or increases (for `⪯^w`); reciprocal majorization
//! `1/δ ⪯^{rm} 1/θ` is produced through its equivalent form `δ ⪯_w θ`. All chained vectors are
//! then sorted in one common direction.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_hypotheses, lookup, verify, TheoremReport};
use crate::baseline::BaselineFamily;
use crate::copula::Generator;
use crate::error::{Error, Result};
use crate::majorize::t_transform;
use crate::numeric::offset_logspace;
use crate::orderstat::ElsBatch;
use crate::stochorder::Status;

/// Baseline with cumulative hazard `A (1 - w^{-2})` on `[1, 1 + 1e3]`, so `w r(w) = 2A/w` and
/// `w^2 r(w) = 2A` decay; tabulated because no proper distribution has `w^2 r(w)` decreasing
/// on all of `(1, ∞)`. Beyond the table the hazard is constant.
pub fn steep_baseline(a: f64) -> Result<BaselineFamily> {
    let mut pts = vec![(1.0, 0.0)];
    for w in offset_logspace(1.0, 1e-6, 1e3, 1000) {
        let h = a * (1.0 - w.powi(-2));
        pts.push((w, -(-h).exp_m1()));
    }
    BaselineFamily::tabulated(pts)
}

fn uniform_vec<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// A few random T-transforms; the result is majorized by `v`.
fn t_mix<R: Rng>(rng: &mut R, v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut out = v.to_vec();
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            out = t_transform(&out, i, j, rng.gen_range(0.0..0.5));
        }
    }
    out
}

/// `x ⪯_w y`: T-transforms followed by optional decreases.
fn below_weak_sub<R: Rng>(rng: &mut R, y: &[f64], max_drop: f64) -> Vec<f64> {
    t_mix(rng, y)
        .into_iter()
        .map(|v| if rng.gen_bool(0.5) { v - rng.gen_range(0.0..max_drop) } else { v })
        .collect()
}

/// `x ⪯_w y` for positive vectors: T-transforms followed by shrink factors in `[0.6, 1]`.
fn below_weak_sub_positive<R: Rng>(rng: &mut R, y: &[f64]) -> Vec<f64> {
    t_mix(rng, y)
        .into_iter()
        .map(|v| if rng.gen_bool(0.5) { v * rng.gen_range(0.6..1.0) } else { v })
        .collect()
}

/// `x ⪯^w y` for positive vectors: T-transforms followed by growth factors in `[1, 1.6]`.
fn below_weak_super_positive<R: Rng>(rng: &mut R, y: &[f64]) -> Vec<f64> {
    t_mix(rng, y)
        .into_iter()
        .map(|v| if rng.gen_bool(0.5) { v * rng.gen_range(1.0..1.6) } else { v })
        .collect()
}

fn recip(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| 1.0 / x).collect()
}

fn orient(v: &mut [f64], descending: bool) {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    if descending {
        v.reverse();
    }
}

fn wr_baseline<R: Rng>(rng: &mut R) -> Result<BaselineFamily> {
    BaselineFamily::pareto(rng.gen_range(0.5..3.0))
}

fn w2r_baseline<R: Rng>(rng: &mut R) -> Result<BaselineFamily> {
    steep_baseline(rng.gen_range(12.0..20.0))
}

/// A baseline with decreasing hazard, from one of five families.
fn dhr_baseline<R: Rng>(rng: &mut R) -> Result<BaselineFamily> {
    match rng.gen_range(0..5) {
        0 => BaselineFamily::pareto(rng.gen_range(0.5..3.0)),
        1 => BaselineFamily::trunc_weibull(rng.gen_range(0.1..1.0)),
        2 => BaselineFamily::burr(rng.gen_range(0.2..1.0), rng.gen_range(0.5..3.0)),
        3 => {
            let c = rng.gen_range(0.2..0.95);
            BaselineFamily::power_gen_weibull(c, rng.gen_range(1.0..3.0))
        }
        _ => {
            let d = rng.gen_range(0.2..1.0);
            BaselineFamily::exp_weibull(d, rng.gen_range(0.2..1.0 / d))
        }
    }
}

fn log_concave_generator<R: Rng>(rng: &mut R) -> Result<Generator> {
    if rng.gen_bool(0.25) {
        Ok(Generator::Independence)
    } else {
        Generator::gumbel_frailty(rng.gen_range(0.05..1.0))
    }
}

/// Frailty generators `(ψ_A, ψ_B)` with `φ_B ∘ ψ_A` sub-additive (`a_A <= a_B`) or
/// super-additive (`a_A >= a_B`).
fn frailty_pair<R: Rng>(rng: &mut R, sub: bool) -> Result<(Generator, Generator)> {
    let x = rng.gen_range(0.05..1.0);
    let y = rng.gen_range(0.05..1.0);
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let (a, b) = if sub { (lo, hi) } else { (hi, lo) };
    Ok((Generator::gumbel_frailty(a)?, Generator::gumbel_frailty(b)?))
}

#[derive(Debug, Clone)]
struct Draft {
    base: BaselineFamily,
    lam: Vec<f64>,
    mu: Vec<f64>,
    th: Vec<f64>,
    de: Vec<f64>,
    alpha: f64,
    gens: Option<(Generator, Generator)>,
}

impl Draft {
    fn build(self) -> Result<(ElsBatch, ElsBatch)> {
        let n = self.lam.len();
        let (ga, gb) = match self.gens {
            Some((a, b)) => (Some(a), Some(b)),
            None => (None, None),
        };
        let a = ElsBatch::new(self.base.clone(), self.lam, self.th, vec![self.alpha; n], ga)?;
        let b = ElsBatch::new(self.base, self.mu, self.de, vec![self.alpha; n], gb)?;
        Ok((a, b))
    }
}

/// Draws a random pair of batches satisfying the hypotheses of theorem `id`.
pub fn random_pair(id: &str, rng: &mut ChaCha8Rng) -> Result<(ElsBatch, ElsBatch)> {
    lookup(id)?;
    let n = rng.gen_range(2..=5);
    let desc = rng.gen_bool(0.5);
    let alpha = rng.gen_range(0.1..=1.0);
    let locs = |rng: &mut ChaCha8Rng| uniform_vec(rng, n, 0.0, 6.0);
    let scales = |rng: &mut ChaCha8Rng| uniform_vec(rng, n, 0.5, 3.0);
    let scalar = |v: f64| vec![v; n];

    // location pair (λ greater, μ lesser) under ⪯_w
    let loc_wsub = |rng: &mut ChaCha8Rng| {
        let mut l = locs(rng);
        let mut m = below_weak_sub(rng, &l, 1.5);
        orient(&mut l, desc);
        orient(&mut m, desc);
        (l, m)
    };
    // scale pair with 1/δ ⪯^w 1/θ
    let scale_wsup = |rng: &mut ChaCha8Rng| {
        let mut t = scales(rng);
        let mut d = recip(&below_weak_super_positive(rng, &recip(&t)));
        orient(&mut t, desc);
        orient(&mut d, desc);
        (t, d)
    };
    // scale pair with 1/δ ⪯^rm 1/θ, i.e. δ ⪯_w θ
    let scale_rm = |rng: &mut ChaCha8Rng| {
        let mut t = scales(rng);
        let mut d = below_weak_sub_positive(rng, &t);
        orient(&mut t, desc);
        orient(&mut d, desc);
        (t, d)
    };
    let sorted = |mut v: Vec<f64>| {
        orient(&mut v, desc);
        v
    };

    let draft = match id {
        "T3.1" | "T3.8" | "T3.15i" | "T3.15ii" => {
            let (mut l, mut m) = loc_wsub(rng);
            if id == "T3.15ii" {
                std::mem::swap(&mut l, &mut m);
            }
            let th = sorted(scales(rng));
            let gens = match id {
                "T3.8" => {
                    let g = log_concave_generator(rng)?;
                    Some((g.clone(), g))
                }
                "T3.15i" => Some(frailty_pair(rng, true)?),
                "T3.15ii" => Some(frailty_pair(rng, false)?),
                _ => None,
            };
            Draft { base: wr_baseline(rng)?, lam: l, mu: m, de: th.clone(), th, alpha, gens }
        }
        "T3.1*" | "T3.8*" | "T3.17" => {
            let (mut l, mut m) = loc_wsub(rng);
            if id == "T3.17" {
                std::mem::swap(&mut l, &mut m);
            }
            let t = rng.gen_range(0.5..3.0);
            let gens = match id {
                "T3.8*" => {
                    let g = log_concave_generator(rng)?;
                    Some((g.clone(), g))
                }
                "T3.17" => Some(frailty_pair(rng, false)?),
                _ => None,
            };
            Draft { base: dhr_baseline(rng)?, lam: l, mu: m, th: scalar(t), de: scalar(t), alpha, gens }
        }
        "T3.2" | "T3.10" | "T3.16i" | "T3.16ii" => {
            let (mut t, mut d) = scale_wsup(rng);
            if id == "T3.16ii" {
                std::mem::swap(&mut t, &mut d);
            }
            let l = sorted(locs(rng));
            let gens = match id {
                "T3.10" => {
                    let g = log_concave_generator(rng)?;
                    Some((g.clone(), g))
                }
                "T3.16i" => Some(frailty_pair(rng, true)?),
                "T3.16ii" => Some(frailty_pair(rng, false)?),
                _ => None,
            };
            Draft { base: wr_baseline(rng)?, mu: l.clone(), lam: l, th: t, de: d, alpha, gens }
        }
        "T3.2*" | "T3.14" | "T3.18" => {
            let (mut t, mut d) = scale_wsup(rng);
            if id == "T3.18" {
                std::mem::swap(&mut t, &mut d);
            }
            let l = rng.gen_range(0.0..6.0);
            let gens = match id {
                "T3.14" => {
                    let g = log_concave_generator(rng)?;
                    Some((g.clone(), g))
                }
                "T3.18" => Some(frailty_pair(rng, false)?),
                _ => None,
            };
            Draft { base: dhr_baseline(rng)?, lam: scalar(l), mu: scalar(l), th: t, de: d, alpha, gens }
        }
        "T3.3" | "T3.9" => {
            let (t, d) = scale_rm(rng);
            let l = sorted(locs(rng));
            let gens = if id == "T3.9" {
                let g = log_concave_generator(rng)?;
                Some((g.clone(), g))
            } else {
                None
            };
            Draft { base: w2r_baseline(rng)?, mu: l.clone(), lam: l, th: t, de: d, alpha, gens }
        }
        "T3.4i" | "T3.4ii" => {
            let (l, m) = loc_wsub(rng);
            let (t, d) = if id == "T3.4i" { scale_wsup(rng) } else { scale_rm(rng) };
            let base = if id == "T3.4i" { wr_baseline(rng)? } else { w2r_baseline(rng)? };
            Draft { base, lam: l, mu: m, th: t, de: d, alpha, gens: None }
        }
        "T3.5" | "T3.6" => {
            let mut l = locs(rng);
            let mut m = t_mix(rng, &l);
            orient(&mut l, desc);
            orient(&mut m, desc);
            let base = BaselineFamily::pareto(rng.gen_range(1.05..1.95))?;
            let (th, de) = if id == "T3.5" {
                let t = rng.gen_range(0.5..3.0);
                (scalar(t), scalar(t))
            } else {
                let t = sorted(scales(rng));
                (t.clone(), t)
            };
            Draft { base, lam: l, mu: m, th, de, alpha: 1.0, gens: None }
        }
        "T3.7" => {
            let mut t = scales(rng);
            let mut d = recip(&t_mix(rng, &recip(&t)));
            orient(&mut t, desc);
            orient(&mut d, desc);
            let l = rng.gen_range(0.0..6.0);
            Draft { base: BaselineFamily::ratio_pareto(), lam: scalar(l), mu: scalar(l), th: t, de: d, alpha: 1.0, gens: None }
        }
        "C3.1" => {
            let mut m = uniform_vec(rng, n, -3.0, 1.0);
            orient(&mut m, false);
            let mu_m = m.iter().map(|v| 0.5 * (1.0 + v)).fold(f64::NEG_INFINITY, f64::max);
            let t = rng.gen_range(0.5..3.0);
            Draft { base: wr_baseline(rng)?, lam: scalar(mu_m), mu: m, th: scalar(t), de: scalar(t), alpha, gens: None }
        }
        "C3.2" => {
            let l = sorted(locs(rng));
            let mean = l.iter().sum::<f64>() / n as f64;
            let mu = mean - rng.gen_range(0.0..1.5);
            let th = sorted(scales(rng));
            Draft { base: wr_baseline(rng)?, lam: l, mu: scalar(mu), de: th.clone(), th, alpha, gens: None }
        }
        "C3.3" => {
            let th = sorted(scales(rng));
            let hm = n as f64 / th.iter().map(|t| 1.0 / t).sum::<f64>();
            let l = rng.gen_range(0.0..6.0);
            let d = hm * rng.gen_range(0.6..1.0);
            Draft { base: wr_baseline(rng)?, lam: scalar(l), mu: scalar(l), th, de: scalar(d), alpha, gens: None }
        }
        "C3.4" => {
            let l = sorted(locs(rng));
            let th = sorted(scales(rng));
            let mean = th.iter().sum::<f64>() / n as f64;
            let d = mean * rng.gen_range(0.6..1.0);
            Draft { base: w2r_baseline(rng)?, mu: l.clone(), lam: l, th, de: scalar(d), alpha, gens: None }
        }
        "C3.5" => {
            let l = sorted(locs(rng));
            let mean = l.iter().sum::<f64>() / n as f64;
            let t = rng.gen_range(0.5..3.0);
            let base = BaselineFamily::pareto(rng.gen_range(1.05..1.95))?;
            Draft { base, lam: l, mu: scalar(mean), th: scalar(t), de: scalar(t), alpha: 1.0, gens: None }
        }
        "C3.6" => {
            let th = sorted(scales(rng));
            let d = n as f64 / th.iter().map(|t| 1.0 / t).sum::<f64>();
            let l = rng.gen_range(0.0..6.0);
            Draft { base: BaselineFamily::ratio_pareto(), lam: scalar(l), mu: scalar(l), th, de: scalar(d), alpha: 1.0, gens: None }
        }
        other => return Err(Error::UnknownTag(other.to_string())),
    };
    draft.build()
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub index: usize,
    pub report: TheoremReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub id: String,
    pub seed: u64,
    pub total: usize,
    /// Scenarios whose hypotheses all passed.
    pub hypotheses_passed: usize,
    /// Scenarios whose conclusion held on the grid.
    pub conclusion_held: usize,
    pub inconsistent: Vec<SweepFailure>,
}

/// Verifies `count` random hypothesis-satisfying scenarios for theorem `id`.
pub fn run_sweep(id: &str, count: usize, seed: u64) -> Result<SweepSummary> {
    let spec = lookup(id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = SweepSummary {
        id: id.to_string(),
        seed,
        total: 0,
        hypotheses_passed: 0,
        conclusion_held: 0,
        inconsistent: Vec::new(),
    };
    for index in 0..count {
        let (a, b) = random_pair(id, &mut rng)?;
        let report = verify(spec, &a, &b, None)?;
        s.total += 1;
        s.hypotheses_passed += report.hypotheses_all_pass as usize;
        s.conclusion_held += (report.conclusion_verdict.status == Status::Holds) as usize;
        if !report.consistent {
            s.inconsistent.push(SweepFailure { index, report });
        }
    }
    Ok(s)
}

/// Hypothesis check only, for diagnosing generated scenarios.
pub fn hypotheses_hold(id: &str, a: &ElsBatch, b: &ElsBatch) -> Result<bool> {
    Ok(check_hypotheses(lookup(id)?, a, b)?.iter().all(|c| c.passed))
}
