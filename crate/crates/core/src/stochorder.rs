//! Usual-stochastic and hazard-rate order verdicts between two second-order statistics,
//! plus the Monte-Carlo estimator used as an independent check of the survival formula.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect, offset_logspace};
use crate::orderstat::{ElsBatch, SF_FLOOR};

/// Absolute slack for survival comparisons.
pub const ST_SLACK: f64 = 1e-9;
/// Absolute floor of the hazard slack; the relative part is [`HR_REL_SLACK`].
pub const HR_ABS_SLACK: f64 = 1e-7;
pub const HR_REL_SLACK: f64 = 1e-4;
/// Minimum number of grid points for an order check.
pub const MIN_ORDER_GRID: usize = 128;
/// Survival level that fixes the upper end of the default grid.
pub const DEFAULT_SF_TAIL: f64 = 1e-4;
pub const DEFAULT_GRID_POINTS: usize = 512;
/// Widest default grid, for tails that never reach [`DEFAULT_SF_TAIL`].
pub const MAX_GRID_SPAN: f64 = 1e12;
/// Monte-Carlo samples are drawn in chunks of this size, each from its own stream.
pub const MC_CHUNK: u64 = 1 << 16;
pub const MC_MIN_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderRelation {
    St,
    Hr,
}

impl OrderRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderRelation::St => "st",
            OrderRelation::Hr => "hr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "A_ge_B")]
    AGeB,
    #[serde(rename = "B_ge_A")]
    BGeA,
    #[serde(rename = "equal")]
    Equal,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::AGeB => Direction::BGeA,
            Direction::BGeA => Direction::AGeB,
            Direction::Equal => Direction::Equal,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::AGeB => "A_ge_B",
            Direction::BGeA => "B_ge_A",
            Direction::Equal => "equal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: f64,
    pub value_a: f64,
    pub value_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMeta {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    /// Points dropped because a survival value fell below the floor.
    #[serde(skip_serializing_if = "is_zero")]
    pub trimmed: usize,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

impl GridMeta {
    fn of(points: &[f64], trimmed: usize) -> Self {
        GridMeta {
            lo: points.first().copied().unwrap_or(f64::NAN),
            hi: points.last().copied().unwrap_or(f64::NAN),
            n: points.len(),
            trimmed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub relation: OrderRelation,
    pub direction: Direction,
    pub status: Status,
    pub witness: Option<Witness>,
    pub grid: GridMeta,
    pub max_violation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Per-point comparison data: `d > 0` favours `A >= B`.
struct Comparison {
    relation: OrderRelation,
    xs: Vec<f64>,
    va: Vec<f64>,
    vb: Vec<f64>,
    d: Vec<f64>,
    slack: Vec<f64>,
    trimmed: usize,
}

impl Comparison {
    fn indeterminate(&self, direction: Direction) -> OrderVerdict {
        OrderVerdict {
            relation: self.relation,
            direction,
            status: Status::Indeterminate,
            witness: None,
            grid: GridMeta::of(&self.xs, self.trimmed),
            max_violation: f64::NAN,
            seed: None,
        }
    }

    fn is_degenerate(&self) -> bool {
        self.xs.is_empty() || self.d.iter().any(|v| v.is_nan())
    }

    fn violations(&self, direction: Direction) -> Vec<f64> {
        self.d
            .iter()
            .map(|&d| match direction {
                Direction::AGeB => -d,
                Direction::BGeA => d,
                Direction::Equal => d.abs(),
            })
            .collect()
    }

    fn directed(&self, direction: Direction) -> OrderVerdict {
        if self.is_degenerate() {
            return self.indeterminate(direction);
        }
        let v = self.violations(direction);
        let holds = v.iter().zip(&self.slack).all(|(v, s)| v <= s);
        let (imax, vmax) = v
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
        OrderVerdict {
            relation: self.relation,
            direction,
            status: if holds { Status::Holds } else { Status::Fails },
            witness: (!holds).then(|| self.witness(imax)),
            grid: GridMeta::of(&self.xs, self.trimmed),
            max_violation: vmax.max(0.0),
            seed: None,
        }
    }

    fn undirected(&self) -> OrderVerdict {
        if self.is_degenerate() {
            return self.indeterminate(Direction::Equal);
        }
        for dir in [Direction::Equal, Direction::AGeB, Direction::BGeA] {
            let v = self.directed(dir);
            if v.status == Status::Holds {
                return v;
            }
        }
        let a = self.directed(Direction::AGeB);
        let b = self.directed(Direction::BGeA);
        if a.max_violation <= b.max_violation {
            a
        } else {
            b
        }
    }

    fn witness(&self, i: usize) -> Witness {
        Witness { x: self.xs[i], value_a: self.va[i], value_b: self.vb[i] }
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < MIN_ORDER_GRID {
        return Err(Error::GridTooShort { needed: MIN_ORDER_GRID, got: grid.len() });
    }
    if let Some(&bad) = grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::GridOutsideDomain(bad));
    }
    Ok(())
}

fn st_comparison(a: &ElsBatch, b: &ElsBatch, grid: &[f64]) -> Result<Comparison> {
    check_grid(grid)?;
    let va = grid.iter().map(|&x| a.sf_second(x)).collect::<Result<Vec<_>>>()?;
    let vb = grid.iter().map(|&x| b.sf_second(x)).collect::<Result<Vec<_>>>()?;
    let d = va.iter().zip(&vb).map(|(x, y)| x - y).collect();
    Ok(Comparison {
        relation: OrderRelation::St,
        xs: grid.to_vec(),
        va,
        vb,
        d,
        slack: vec![ST_SLACK; grid.len()],
        trimmed: 0,
    })
}

fn hr_comparison(a: &ElsBatch, b: &ElsBatch, grid: &[f64]) -> Result<Comparison> {
    check_grid(grid)?;
    let mut c = Comparison {
        relation: OrderRelation::Hr,
        xs: Vec::new(),
        va: Vec::new(),
        vb: Vec::new(),
        d: Vec::new(),
        slack: Vec::new(),
        trimmed: 0,
    };
    for &x in grid {
        if a.sf_second(x)? <= SF_FLOOR || b.sf_second(x)? <= SF_FLOOR {
            c.trimmed += 1;
            continue;
        }
        let (ra, rb) = match (a.hazard_second(x), b.hazard_second(x)) {
            (Ok(ra), Ok(rb)) => (ra, rb),
            (Err(Error::SurvivalUnderflow(_)), _) | (_, Err(Error::SurvivalUnderflow(_))) => {
                c.trimmed += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        c.xs.push(x);
        c.va.push(ra);
        c.vb.push(rb);
        // A >= B in hazard-rate order means r_A <= r_B.
        c.d.push(rb - ra);
        c.slack.push(HR_ABS_SLACK.max(HR_REL_SLACK * ra.abs().max(rb.abs())));
    }
    Ok(c)
}

/// Usual stochastic order between the second-order statistics of `a` and `b`.
pub fn check_st(a: &ElsBatch, b: &ElsBatch, grid: &[f64]) -> Result<OrderVerdict> {
    Ok(st_comparison(a, b, grid)?.undirected())
}

/// Tests only the requested direction.
pub fn check_st_directed(a: &ElsBatch, b: &ElsBatch, direction: Direction, grid: &[f64]) -> Result<OrderVerdict> {
    Ok(st_comparison(a, b, grid)?.directed(direction))
}

/// Hazard-rate order; points where either survival is below the floor are trimmed.
pub fn check_hr(a: &ElsBatch, b: &ElsBatch, grid: &[f64]) -> Result<OrderVerdict> {
    Ok(hr_comparison(a, b, grid)?.undirected())
}

pub fn check_hr_directed(a: &ElsBatch, b: &ElsBatch, direction: Direction, grid: &[f64]) -> Result<OrderVerdict> {
    Ok(hr_comparison(a, b, grid)?.directed(direction))
}

pub fn check(relation: OrderRelation, a: &ElsBatch, b: &ElsBatch, grid: &[f64]) -> Result<OrderVerdict> {
    match relation {
        OrderRelation::St => check_st(a, b, grid),
        OrderRelation::Hr => check_hr(a, b, grid),
    }
}

pub fn check_directed(
    relation: OrderRelation,
    a: &ElsBatch,
    b: &ElsBatch,
    direction: Direction,
    grid: &[f64],
) -> Result<OrderVerdict> {
    match relation {
        OrderRelation::St => check_st_directed(a, b, direction, grid),
        OrderRelation::Hr => check_hr_directed(a, b, direction, grid),
    }
}

/// Point where the survival of the second smallest drops to `level`.
pub fn tail_point(batch: &ElsBatch, from: f64, level: f64) -> Result<f64> {
    let f = |x: f64| batch.sf_second(x).map(|s| s - level);
    if f(from)? <= 0.0 {
        return Ok(from);
    }
    let mut lo = from;
    let mut step = 1.0;
    loop {
        let hi = from + step;
        if f(hi)? <= 0.0 {
            return Ok(bisect(|x| f(x).unwrap_or(f64::NAN), lo, hi, 1e-12));
        }
        lo = hi;
        step *= 2.0;
        if step > 1e15 {
            return Err(Error::Domain { what: "survival tail search", value: hi });
        }
    }
}

/// Default grid: 512 points with geometric offsets from `start + 1e-3` to the point where the
/// larger survival function reaches `1e-4`, at most [`MAX_GRID_SPAN`] past `start`. `start` is
/// the largest location for `st` and the largest support floor `λ_i + θ_i * support_lo` for `hr`.
pub fn default_grid(a: &ElsBatch, b: &ElsBatch, relation: OrderRelation) -> Result<Vec<f64>> {
    let start = match relation {
        OrderRelation::St => a.max_location().max(b.max_location()),
        OrderRelation::Hr => a.support_floor().max(b.support_floor()),
    };
    let lo = start + 1e-3;
    // very heavy tails may not reach the level in f64 range; stop at a fixed span instead
    let tail = |batch: &ElsBatch| match tail_point(batch, lo, DEFAULT_SF_TAIL) {
        Err(Error::Domain { .. }) => Ok(start + MAX_GRID_SPAN),
        other => other,
    };
    let hi = tail(a)?.max(tail(b)?).min(start + MAX_GRID_SPAN);
    let hi = hi.max(lo + 1.0);
    Ok(offset_logspace(start, 1e-3, hi - start, DEFAULT_GRID_POINTS))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub x: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

fn draw_component(batch: &ElsBatch, i: usize, rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.sample(Open01);
    // F_b^{-1}(u^{1/α}) through the cumulative hazard h = -ln(1 - u^{1/α})
    let h = -(-(u.ln() / batch.shape()[i]).exp_m1()).ln();
    batch.location()[i] + batch.scale()[i] * batch.baseline().inverse_cum_hazard(h)
}

/// Monte-Carlo estimates of `P(X_{2:n} > x)` at every `x`, for independent batches.
///
/// Samples are drawn in chunks of [`MC_CHUNK`]; chunk `c` uses stream `c` of a ChaCha8
/// generator seeded with `seed`, so results do not depend on how chunks are scheduled.
pub fn mc_sf_second_many(batch: &ElsBatch, xs: &[f64], samples: u64, seed: u64) -> Result<Vec<McEstimate>> {
    if batch.generator().is_some() {
        return Err(Error::DependenceMismatch("Monte-Carlo sampler draws independent components".into()));
    }
    if samples < MC_MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least {MC_MIN_SAMPLES} samples")));
    }
    let n = batch.n();
    let mut counts = vec![0u64; xs.len()];
    let chunks = samples.div_ceil(MC_CHUNK);
    for c in 0..chunks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c);
        let m = MC_CHUNK.min(samples - c * MC_CHUNK);
        for _ in 0..m {
            let (mut lo1, mut lo2) = (f64::INFINITY, f64::INFINITY);
            for i in 0..n {
                let v = draw_component(batch, i, &mut rng);
                if v < lo1 {
                    lo2 = lo1;
                    lo1 = v;
                } else if v < lo2 {
                    lo2 = v;
                }
            }
            for (k, &x) in xs.iter().enumerate() {
                if lo2 > x {
                    counts[k] += 1;
                }
            }
        }
    }
    let nf = samples as f64;
    Ok(xs
        .iter()
        .zip(counts)
        .map(|(&x, c)| {
            let p = c as f64 / nf;
            McEstimate { x, estimate: p, stderr: (p * (1.0 - p) / nf).sqrt(), samples, seed }
        })
        .collect())
}

pub fn mc_sf_second(batch: &ElsBatch, x: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    Ok(mc_sf_second_many(batch, &[x], samples, seed)?[0])
}
