use serde::Serialize;

use super::{Dependence, Derived, GeneratorCondition, ParamConstraint, TheoremSpec, VectorRef};
use crate::baseline::check_shape;
use crate::copula::{check_additivity, check_log_concave, default_additivity_pairs, Additivity, Generator};
use crate::error::{Error, Result};
use crate::majorize::{chain_class, check as major_check, joint_chain};
use crate::orderstat::ElsBatch;
use crate::stochorder::{check_directed, default_grid, OrderRelation, OrderVerdict, Status};

/// Relative tolerance for parameter equalities.
pub const PARAM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseResult {
    pub clause: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ClauseResult {
    fn new(clause: impl Into<String>, passed: bool, witness: Option<String>) -> Self {
        ClauseResult { clause: clause.into(), passed, witness, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub id: String,
    pub hypothesis_results: Vec<ClauseResult>,
    pub hypotheses_all_pass: bool,
    pub conclusion_verdict: OrderVerdict,
    /// False only when every hypothesis passes and the conclusion fails.
    pub consistent: bool,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PARAM_TOL * (1.0 + a.abs().max(b.abs()))
}

fn le(a: f64, b: f64) -> bool {
    a <= b + PARAM_TOL * (1.0 + a.abs().max(b.abs()))
}

fn first_mismatch(a: &[f64], b: &[f64]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| !close(*x, *y))
}

fn constant(v: &[f64]) -> bool {
    v.iter().all(|x| close(*x, v[0]))
}

fn vector<'a>(a: &'a ElsBatch, b: &'a ElsBatch, r: VectorRef) -> &'a [f64] {
    match r {
        VectorRef::LocA => a.location(),
        VectorRef::LocB => b.location(),
        VectorRef::ScaleA => a.scale(),
        VectorRef::ScaleB => b.scale(),
    }
}

fn derived(a: &ElsBatch, b: &ElsBatch, d: Derived) -> Vec<f64> {
    match d {
        Derived::LocA => a.location().to_vec(),
        Derived::LocB => b.location().to_vec(),
        Derived::RecipScaleA => a.reciprocal_scale(),
        Derived::RecipScaleB => b.reciprocal_scale(),
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

fn check_param(p: ParamConstraint, a: &ElsBatch, b: &ElsBatch) -> ClauseResult {
    let n = a.n() as f64;
    let (lam, mu, th, de) = (a.location(), b.location(), a.scale(), b.scale());
    let at = |i: Option<usize>| i.map(|i| format!("component {}", i + 1));
    let (passed, witness) = match p {
        ParamConstraint::ScaleVectorsEqual => {
            let m = first_mismatch(th, de);
            (m.is_none(), at(m))
        }
        ParamConstraint::LocationVectorsEqual => {
            let m = first_mismatch(lam, mu);
            (m.is_none(), at(m))
        }
        ParamConstraint::ScalesCommonScalar => {
            let ok = constant(th) && constant(de) && close(th[0], de[0]);
            (ok, (!ok).then(|| format!("θ = {}, δ = {}", fmt_vec(th), fmt_vec(de))))
        }
        ParamConstraint::LocationsCommonScalar => {
            let ok = constant(lam) && constant(mu) && close(lam[0], mu[0]);
            (ok, (!ok).then(|| format!("λ = {}, μ = {}", fmt_vec(lam), fmt_vec(mu))))
        }
        ParamConstraint::ShapesCommonAtMostOne => {
            let al = a.shape()[0];
            let common = constant(a.shape()) && constant(b.shape()) && close(al, b.shape()[0]);
            let ok = common && le(al, 1.0);
            let w = if !common {
                format!("α = {}, β = {}", fmt_vec(a.shape()), fmt_vec(b.shape()))
            } else {
                format!("α = {al} > 1")
            };
            (ok, (!ok).then_some(w))
        }
        ParamConstraint::ShapesUnit => {
            let ok = a.shape().iter().chain(b.shape()).all(|&s| close(s, 1.0));
            (ok, (!ok).then(|| format!("α = {}, β = {}", fmt_vec(a.shape()), fmt_vec(b.shape()))))
        }
        ParamConstraint::BLocationsConstant => {
            let ok = constant(mu);
            (ok, (!ok).then(|| format!("μ = {}", fmt_vec(mu))))
        }
        ParamConstraint::BScalesConstant => {
            let ok = constant(de);
            (ok, (!ok).then(|| format!("δ = {}", fmt_vec(de))))
        }
        ParamConstraint::ALocationHalfShiftMaxOfB => {
            let target = mu.iter().map(|m| 0.5 * (1.0 + m)).fold(f64::NEG_INFINITY, f64::max);
            let ok = lam.iter().all(|l| close(*l, target));
            (ok, (!ok).then(|| format!("λ = {}, required {target}", fmt_vec(lam))))
        }
        ParamConstraint::BLocationsAtMostOne => {
            let m = b.max_location();
            (le(m, 1.0), (!le(m, 1.0)).then(|| format!("max μ = {m}")))
        }
        ParamConstraint::NBLocationAtMostSumA => {
            let (l, r) = (n * mu[0], lam.iter().sum::<f64>());
            (constant(mu) && le(l, r), (!le(l, r)).then(|| format!("n μ = {l} > Σλ = {r}")))
        }
        ParamConstraint::NOverBScaleAtLeastSumRecipA => {
            let (l, r) = (n / de[0], th.iter().map(|t| 1.0 / t).sum::<f64>());
            (constant(de) && le(r, l), (!le(r, l)).then(|| format!("n/δ = {l} < Σ1/θ = {r}")))
        }
        ParamConstraint::NBScaleAtMostSumA => {
            let (l, r) = (n * de[0], th.iter().sum::<f64>());
            (constant(de) && le(l, r), (!le(l, r)).then(|| format!("n δ = {l} > Σθ = {r}")))
        }
        ParamConstraint::BLocationIsMeanOfA => {
            let mean = lam.iter().sum::<f64>() / n;
            let ok = mu.iter().all(|m| close(*m, mean));
            (ok, (!ok).then(|| format!("μ = {}, mean λ = {mean}", fmt_vec(mu))))
        }
        ParamConstraint::BRecipScaleIsMeanOfA => {
            let mean = th.iter().map(|t| 1.0 / t).sum::<f64>() / n;
            let ok = de.iter().all(|d| close(1.0 / d, mean));
            (ok, (!ok).then(|| format!("1/δ = {}, mean 1/θ = {mean}", fmt_vec(&b.reciprocal_scale()))))
        }
    };
    ClauseResult::new(p.describe(), passed, witness)
}

fn generator_pair<'a>(spec: &TheoremSpec, a: &'a ElsBatch, b: &'a ElsBatch) -> Result<Option<(&'a Generator, &'a Generator)>> {
    match (spec.dependence, a.generator(), b.generator()) {
        (Dependence::Independent, None, None) => Ok(None),
        (Dependence::Independent, _, _) => Err(Error::DependenceMismatch(format!(
            "{} compares independent batches; remove the generators",
            spec.id
        ))),
        (Dependence::CommonCopula, Some(ga), Some(gb)) if ga == gb => Ok(Some((ga, gb))),
        (Dependence::CommonCopula, _, _) => Err(Error::DependenceMismatch(format!(
            "{} needs both batches to share one generator",
            spec.id
        ))),
        (Dependence::TwoCopulas, Some(ga), Some(gb)) => Ok(Some((ga, gb))),
        (Dependence::TwoCopulas, _, _) => Err(Error::DependenceMismatch(format!(
            "{} needs a generator on each batch",
            spec.id
        ))),
    }
}

fn log_concave(g: &Generator) -> Result<(bool, Option<String>)> {
    let c = check_log_concave(g, &g.default_log_concave_grid())?;
    Ok((c.satisfied, c.witness.map(|(x, _)| format!("{} at x = {x}", g.tag()))))
}

fn check_generator(cond: GeneratorCondition, ga: &Generator, gb: &Generator) -> Result<ClauseResult> {
    let name = cond.describe();
    Ok(match cond {
        GeneratorCondition::LogConcavePsi => {
            let (ok, w) = log_concave(ga)?;
            ClauseResult::new(name, ok, w)
        }
        GeneratorCondition::LogConcaveEither => {
            let (oa, wa) = log_concave(ga)?;
            let (ob, wb) = log_concave(gb)?;
            let witness = (!(oa || ob)).then(|| format!("{}; {}", wa.unwrap_or_default(), wb.unwrap_or_default()));
            ClauseResult::new(name, oa || ob, witness).with_note("passes if either generator is log-concave")
        }
        GeneratorCondition::SubAdditiveComposition | GeneratorCondition::SuperAdditiveComposition => {
            let mode = if cond == GeneratorCondition::SubAdditiveComposition {
                Additivity::Sub
            } else {
                Additivity::Super
            };
            let c = check_additivity(gb, ga, mode, &default_additivity_pairs(ga))?;
            ClauseResult::new(name, c.satisfied, c.witness.map(|(x, y)| format!("x = {x}, y = {y}")))
        }
    })
}

/// Evaluates every hypothesis clause of `spec` on the pair `(a, b)`; nothing short-circuits.
pub fn check_hypotheses(spec: &TheoremSpec, a: &ElsBatch, b: &ElsBatch) -> Result<Vec<ClauseResult>> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch { left: a.n(), right: b.n() });
    }
    let gens = generator_pair(spec, a, b)?;
    let mut out = Vec::new();
    let same = a.baseline() == b.baseline();
    out.push(ClauseResult::new(
        "common baseline",
        same,
        (!same).then(|| format!("{} vs {}", a.baseline().tag(), b.baseline().tag())),
    ));
    for &p in spec.params {
        out.push(check_param(p, a, b));
    }
    if !spec.chain.is_empty() {
        let vs: Vec<&[f64]> = spec.chain.iter().map(|&r| vector(a, b, r)).collect();
        let ok = joint_chain(&vs);
        let names: Vec<&str> = spec.chain.iter().map(|v| v.symbol()).collect();
        let witness = (!ok).then(|| {
            spec.chain
                .iter()
                .zip(&vs)
                .map(|(r, v)| format!("{}: {:?}", r.symbol(), chain_class(v)))
                .collect::<Vec<_>>()
                .join(", ")
        });
        out.push(ClauseResult::new(format!("{} jointly increasing or decreasing", names.join(", ")), ok, witness));
    }
    for r in spec.relations {
        let y = derived(a, b, r.greater);
        let x = derived(a, b, r.lesser);
        let c = major_check(r.kind, &y, &x)?;
        out.push(ClauseResult::new(
            format!("{} {} {}", r.lesser.symbol(), r.kind.symbol(), r.greater.symbol()),
            c.holds,
            c.first_violation.map(|i| format!("partial sum {i}")),
        ));
    }
    let base = a.baseline();
    let grid = base.default_shape_grid();
    for &s in spec.shapes {
        let c = check_shape(base, s, &grid)?;
        let mut res = ClauseResult::new(s.describe(), c.satisfied, c.witness.map(|w| format!("w = {w}")));
        if c.unsupported {
            res = res.with_note("derivative not available for this baseline");
        }
        out.push(res);
    }
    if let Some((ga, gb)) = gens {
        for &g in spec.generator {
            out.push(check_generator(g, ga, gb)?);
        }
    }
    Ok(out)
}

/// Runs the hypothesis clauses and the conclusion check. With no grid, the default grid starts
/// above the largest support floor of either batch, where every component is inside its support:
/// below it the hypotheses on the baseline say nothing about the jump into the support.
pub fn verify(spec: &TheoremSpec, a: &ElsBatch, b: &ElsBatch, grid: Option<&[f64]>) -> Result<TheoremReport> {
    let hypothesis_results = check_hypotheses(spec, a, b)?;
    let hypotheses_all_pass = hypothesis_results.iter().all(|c| c.passed);
    let owned;
    let grid = match grid {
        Some(g) => g,
        None => {
            owned = default_grid(a, b, OrderRelation::Hr)?;
            &owned
        }
    };
    let conclusion_verdict = check_directed(spec.conclusion.relation, a, b, spec.conclusion.direction, grid)?;
    let consistent = !(hypotheses_all_pass && conclusion_verdict.status == Status::Fails);
    Ok(TheoremReport {
        id: spec.id.to_string(),
        hypothesis_results,
        hypotheses_all_pass,
        conclusion_verdict,
        consistent,
    })
}
