//! Majorization-type orders between real vectors.
//!
//! Every test has the form `relation(y, x)`, answering whether `x` is dominated by `y`
//! (`x ⪯ y`). Sorting conventions: `x_(1) <= ... <= x_(n)` ascending.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for comparing partial sums.
pub const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorKind {
    /// `x ⪯^m y`: majorization (equal totals).
    #[serde(rename = "m")]
    Majorization,
    /// `x ⪯_w y`: weak submajorization.
    #[serde(rename = "w_sub")]
    WeakSub,
    /// `x ⪯^w y`: weak supermajorization.
    #[serde(rename = "w_sup")]
    WeakSuper,
    /// `x ⪯^{rm} y`: reciprocal majorization.
    #[serde(rename = "rm")]
    Reciprocal,
}

impl MajorKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(MajorKind::Majorization),
            "w_sub" => Ok(MajorKind::WeakSub),
            "w_sup" => Ok(MajorKind::WeakSuper),
            "rm" => Ok(MajorKind::Reciprocal),
            _ => Err(Error::UnknownTag(s.to_string())),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MajorKind::Majorization => "⪯^m",
            MajorKind::WeakSub => "⪯_w",
            MajorKind::WeakSuper => "⪯^w",
            MajorKind::Reciprocal => "⪯^rm",
        }
    }
}

/// Outcome of a majorization test; `first_violation` is the 1-based partial-sum index
/// (`n` for a total mismatch).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MajorCheck {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

impl MajorCheck {
    fn from_violation(v: Option<usize>) -> Self {
        MajorCheck { holds: v.is_none(), first_violation: v }
    }
}

fn validate(y: &[f64], x: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: y.len(), right: x.len() });
    }
    if x.is_empty() {
        return Err(Error::InvalidParameter("empty vector".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("vectors must be finite".into()));
    }
    Ok(())
}

pub fn sorted_ascending(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    s
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn tol_for(a: f64, b: f64) -> f64 {
    SUM_TOL * (1.0 + a.abs().max(b.abs()))
}

/// First 1-based index where the ascending prefix sums of `x` fall below those of `y`.
fn ascending_prefix_ge(y: &[f64], x: &[f64]) -> Option<usize> {
    let px = prefix_sums(&sorted_ascending(x));
    let py = prefix_sums(&sorted_ascending(y));
    (0..px.len()).find(|&i| px[i] < py[i] - tol_for(px[i], py[i])).map(|i| i + 1)
}

/// First 1-based index where the descending prefix sums of `x` exceed those of `y`.
fn descending_prefix_le(y: &[f64], x: &[f64]) -> Option<usize> {
    let mut sx = sorted_ascending(x);
    let mut sy = sorted_ascending(y);
    sx.reverse();
    sy.reverse();
    let px = prefix_sums(&sx);
    let py = prefix_sums(&sy);
    (0..px.len()).find(|&i| px[i] > py[i] + tol_for(px[i], py[i])).map(|i| i + 1)
}

/// Whether `x ⪯^m y`.
pub fn majorized_detail(y: &[f64], x: &[f64]) -> Result<MajorCheck> {
    validate(y, x)?;
    let n = x.len();
    let v = ascending_prefix_ge(y, x).or_else(|| {
        let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
        ((sx - sy).abs() > tol_for(sx, sy)).then_some(n)
    });
    Ok(MajorCheck::from_violation(v))
}

/// Whether `x ⪯_w y`: descending partial sums of `x` never exceed those of `y`.
pub fn weak_sub_detail(y: &[f64], x: &[f64]) -> Result<MajorCheck> {
    validate(y, x)?;
    Ok(MajorCheck::from_violation(descending_prefix_le(y, x)))
}

/// Whether `x ⪯^w y`: ascending partial sums of `x` never fall below those of `y`.
pub fn weak_super_detail(y: &[f64], x: &[f64]) -> Result<MajorCheck> {
    validate(y, x)?;
    Ok(MajorCheck::from_violation(ascending_prefix_ge(y, x)))
}

/// Whether `x ⪯^{rm} y`: `sum_{i<=l} 1/x_(i) <= sum_{i<=l} 1/y_(i)` for ascending orders.
pub fn reciprocal_detail(y: &[f64], x: &[f64]) -> Result<MajorCheck> {
    validate(y, x)?;
    if x.iter().chain(y).any(|&v| v <= 0.0) {
        return Err(Error::InvalidParameter("reciprocal majorization needs positive entries".into()));
    }
    let rx = prefix_sums(&sorted_ascending(x).iter().map(|v| 1.0 / v).collect::<Vec<_>>());
    let ry = prefix_sums(&sorted_ascending(y).iter().map(|v| 1.0 / v).collect::<Vec<_>>());
    let v = (0..rx.len()).find(|&i| rx[i] > ry[i] + tol_for(rx[i], ry[i])).map(|i| i + 1);
    Ok(MajorCheck::from_violation(v))
}

pub fn check(kind: MajorKind, y: &[f64], x: &[f64]) -> Result<MajorCheck> {
    match kind {
        MajorKind::Majorization => majorized_detail(y, x),
        MajorKind::WeakSub => weak_sub_detail(y, x),
        MajorKind::WeakSuper => weak_super_detail(y, x),
        MajorKind::Reciprocal => reciprocal_detail(y, x),
    }
}

pub fn majorized(y: &[f64], x: &[f64]) -> Result<bool> {
    majorized_detail(y, x).map(|c| c.holds)
}

pub fn weak_sub(y: &[f64], x: &[f64]) -> Result<bool> {
    weak_sub_detail(y, x).map(|c| c.holds)
}

pub fn weak_super(y: &[f64], x: &[f64]) -> Result<bool> {
    weak_super_detail(y, x).map(|c| c.holds)
}

pub fn reciprocal(y: &[f64], x: &[f64]) -> Result<bool> {
    reciprocal_detail(y, x).map(|c| c.holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainClass {
    Ascending,
    Descending,
    /// Constant vectors are both.
    Both,
    Neither,
}

impl ChainClass {
    pub fn ascending(self) -> bool {
        matches!(self, ChainClass::Ascending | ChainClass::Both)
    }

    pub fn descending(self) -> bool {
        matches!(self, ChainClass::Descending | ChainClass::Both)
    }
}

/// Monotonicity class of a vector in its given order.
pub fn chain_class(v: &[f64]) -> ChainClass {
    let up = v.windows(2).all(|w| w[0] <= w[1]);
    let down = v.windows(2).all(|w| w[0] >= w[1]);
    match (up, down) {
        (true, true) => ChainClass::Both,
        (true, false) => ChainClass::Ascending,
        (false, true) => ChainClass::Descending,
        (false, false) => ChainClass::Neither,
    }
}

/// Whether all vectors are jointly ascending or jointly descending.
pub fn joint_chain(vs: &[&[f64]]) -> bool {
    let classes: Vec<ChainClass> = vs.iter().map(|v| chain_class(v)).collect();
    classes.iter().all(|c| c.ascending()) || classes.iter().all(|c| c.descending())
}

/// T-transform `x_i' = (1 - t) x_i + t x_j`, `x_j' = t x_i + (1 - t) x_j`, `t in [0, 1]`.
/// The result is majorized by `v`.
pub fn t_transform(v: &[f64], i: usize, j: usize, t: f64) -> Vec<f64> {
    let mut out = v.to_vec();
    let (a, b) = (v[i], v[j]);
    out[i] = (1.0 - t) * a + t * b;
    out[j] = t * a + (1.0 - t) * b;
    out
}

/// Spot-checks Schur-convexity of `f` on supplied pairs `(y, x)` with `x ⪯^m y`:
/// returns the index of the first pair with `f(x) > f(y)` beyond slack.
pub fn schur_convex_spot_check<F: Fn(&[f64]) -> f64>(f: F, pairs: &[(Vec<f64>, Vec<f64>)]) -> Option<usize> {
    pairs.iter().position(|(y, x)| {
        let (fx, fy) = (f(x), f(y));
        fx > fy + 1e-12 * (1.0 + fy.abs())
    })
}
