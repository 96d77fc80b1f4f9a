use serde::{Deserialize, Serialize};

use crate::baseline::{check_shape, BaselineFamily, ShapeCondition};
use crate::error::{Error, Result};
use crate::majorize::chain_class;
use crate::orderstat::{bound_cor31, sf_second_indep, ElsBatch, SF_FLOOR};
use crate::stochorder::{default_grid, OrderRelation, HR_ABS_SLACK, HR_REL_SLACK, ST_SLACK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Upper bound on the survival of a heterogeneous-location batch by the homogeneous batch
    /// at `max_i (1 + μ_i) / 2`.
    Cor31SfUpper,
    /// Lower bound on the hazard of a heterogeneous-location unit-shape batch by the
    /// homogeneous batch at the mean location.
    Cor35HazardLower,
    /// Closed form of the previous bound for a Pareto baseline.
    Cor35ParetoLower,
}

impl BoundKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cor31_sf_upper" => Ok(BoundKind::Cor31SfUpper),
            "cor35_hazard_lower" => Ok(BoundKind::Cor35HazardLower),
            "cor35_pareto_lower" => Ok(BoundKind::Cor35ParetoLower),
            _ => Err(Error::UnknownTag(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundPoint {
    pub x: f64,
    pub bound: f64,
    pub exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// All preconditions hold.
    pub supported: bool,
    pub issues: Vec<String>,
    pub points: Vec<BoundPoint>,
    pub dominates: bool,
    pub witness: Option<BoundPoint>,
    /// Grid points outside the precondition domain or with negligible survival.
    pub trimmed: usize,
}

/// Pareto(a) hazard lower bound for `n` components at common scale `θ` and mean location `λ`:
/// `n a (n - 1)(w^a - 1) / (θ w (n w^a + 1 - n))`, `w = (x - λ) / θ`.
pub fn pareto_hazard_lower(a: f64, n: usize, theta: f64, lambda: f64, x: f64) -> f64 {
    let w = (x - lambda) / theta;
    let nf = n as f64;
    let wa = w.powf(a);
    nf * a * (nf - 1.0) * (wa - 1.0) / (theta * w * (nf * wa + 1.0 - nf))
}

/// The closed form `n [a + (a n - 1)(w^a + 1)] / (θ [n w^a + 1 - n])` as it is commonly quoted.
/// It does not agree with the homogeneous hazard and is not a lower bound; kept for comparison.
pub fn pareto_hazard_lower_as_printed(a: f64, n: usize, theta: f64, lambda: f64, x: f64) -> f64 {
    let w = (x - lambda) / theta;
    let nf = n as f64;
    let wa = w.powf(a);
    nf * (a + (a * nf - 1.0) * (wa + 1.0)) / (theta * (nf * wa + 1.0 - nf))
}

fn common(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

fn shape_issues(base: &BaselineFamily, conds: &[ShapeCondition], issues: &mut Vec<String>) -> Result<()> {
    let grid = base.default_shape_grid();
    for &c in conds {
        if !check_shape(base, c, &grid)?.satisfied {
            issues.push(format!("baseline fails '{}'", c.describe()));
        }
    }
    Ok(())
}

fn hazard_preconditions(batch: &ElsBatch, issues: &mut Vec<String>) -> Result<()> {
    if batch.generator().is_some() {
        issues.push("batch is not independent".into());
    }
    if !batch.is_unit_shape() {
        issues.push("shapes are not all 1".into());
    }
    if !common(batch.scale()) {
        issues.push("scales are not common".into());
    }
    let c = chain_class(batch.location());
    if !(c.ascending() || c.descending()) {
        issues.push("locations are not monotone".into());
    }
    shape_issues(
        batch.baseline(),
        &[ShapeCondition::HazardDecreasingConvex, ShapeCondition::GIncreasingConvex, ShapeCondition::GSecondDecreasing],
        issues,
    )
}

/// Evaluates a closed-form bound against the exact curve and checks dominance pointwise.
/// Without a grid the default grid of the compared pair is used.
pub fn eval_bound(kind: BoundKind, batch: &ElsBatch, grid: Option<&[f64]>) -> Result<BoundReport> {
    let mut issues = Vec::new();
    let n = batch.n();
    let mean_loc = batch.location().iter().sum::<f64>() / n as f64;
    let hom = |loc: f64| {
        ElsBatch::new(batch.baseline().clone(), vec![loc; n], batch.scale().to_vec(), batch.shape().to_vec(), None)
    };
    let mut points = Vec::new();
    let mut trimmed = 0;
    let (dominates, witness) = match kind {
        BoundKind::Cor31SfUpper => {
            let first = bound_cor31(batch, batch.max_location())?;
            issues.extend(first.issues);
            if !chain_class(batch.location()).ascending() {
                issues.push("locations are not increasing".into());
            }
            shape_issues(batch.baseline(), &[ShapeCondition::WHazardDecreasing], &mut issues)?;
            let mu_m = batch.location().iter().map(|m| 0.5 * (1.0 + m)).fold(f64::NEG_INFINITY, f64::max);
            let h = hom(mu_m)?;
            let owned;
            let g = match grid {
                Some(g) => g,
                None => {
                    owned = default_grid(&h, batch, OrderRelation::St)?;
                    &owned
                }
            };
            let exact_batch = batch.clone().with_generator(None)?;
            for &x in g {
                let bound = sf_second_indep(&h, x)?;
                let exact = sf_second_indep(&exact_batch, x)?;
                points.push(BoundPoint { x, bound, exact });
            }
            let bad = points.iter().find(|p| p.exact > p.bound + ST_SLACK).copied();
            (bad.is_none(), bad)
        }
        BoundKind::Cor35HazardLower | BoundKind::Cor35ParetoLower => {
            hazard_preconditions(batch, &mut issues)?;
            let pareto_a = match *batch.baseline() {
                BaselineFamily::Pareto { a } => Some(a),
                _ => None,
            };
            if kind == BoundKind::Cor35ParetoLower {
                match pareto_a {
                    Some(a) if a > 1.0 && a < 2.0 => {}
                    Some(a) => issues.push(format!("Pareto exponent {a} outside (1, 2)")),
                    None => {
                        return Err(Error::InvalidParameter("the Pareto bound needs a Pareto baseline".into()))
                    }
                }
            }
            let unit = ElsBatch::new(
                batch.baseline().clone(),
                batch.location().to_vec(),
                batch.scale().to_vec(),
                vec![1.0; n],
                None,
            )?;
            let h = ElsBatch::new(batch.baseline().clone(), vec![mean_loc; n], batch.scale().to_vec(), vec![1.0; n], None)?;
            let floor = unit.support_floor();
            let owned;
            let g = match grid {
                Some(g) => g,
                None => {
                    owned = default_grid(&unit, &h, OrderRelation::Hr)?;
                    &owned
                }
            };
            for &x in g {
                if x <= floor || unit.sf_second(x)? <= SF_FLOOR || h.sf_second(x)? <= SF_FLOOR {
                    trimmed += 1;
                    continue;
                }
                let exact = unit.hazard_second(x)?;
                let bound = match (kind, pareto_a) {
                    (BoundKind::Cor35ParetoLower, Some(a)) => pareto_hazard_lower(a, n, batch.scale()[0], mean_loc, x),
                    _ => h.hazard_second(x)?,
                };
                points.push(BoundPoint { x, bound, exact });
            }
            let bad = points
                .iter()
                .find(|p| p.exact < p.bound - HR_ABS_SLACK.max(HR_REL_SLACK * p.bound.abs().max(p.exact.abs())))
                .copied();
            (bad.is_none(), bad)
        }
    };
    Ok(BoundReport { kind, supported: issues.is_empty(), issues, points, dominates, witness, trimmed })
}
