//! Archimedean copula generators `psi` and their inverses `phi`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{first_nonconcave, linspace, MonotoneCubic};

/// Stand-in for `phi(0) = +inf`; any argument at or above it makes `psi` vanish.
pub const SATURATED: f64 = 1e308;
/// Slack for the additivity inequalities.
pub const ADDITIVITY_SLACK: f64 = 1e-9;
/// Minimum number of `(x, y)` pairs for [`check_additivity`].
pub const MIN_ADDITIVITY_PAIRS: usize = 64;
/// Minimum number of points for [`check_log_concave`].
pub const MIN_LOG_CONCAVE_GRID: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `psi(x) = exp(-x)`.
    Independence,
    /// `psi(x) = exp((1 - e^x) / a)`, `0 < a <= 1`.
    GumbelFrailty { a: f64 },
    /// `psi(x) = exp(-x^{1/a})`, `a >= 1`.
    GumbelHougaard { a: f64 },
    /// `psi(x) = (1 + c x)^{-1/c}`, `c > 0`.
    Clayton { c: f64 },
    /// Interpolated from `(x, psi)` pairs.
    Tabulated(Arc<TabulatedGenerator>),
}

/// Monotone interpolation of `ln psi` with a linear (exponential-tail) continuation.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedGenerator {
    points: Vec<(f64, f64)>,
    log_psi: MonotoneCubic,
    tail_slope: f64,
}

impl TabulatedGenerator {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InvalidParameter("tabulated generator needs >= 4 points".into()));
        }
        if points[0] != (0.0, 1.0) {
            return Err(Error::InvalidParameter("tabulated generator must start at (0, 1)".into()));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 < w[0].1 && w[1].1 > 0.0) {
                return Err(Error::InvalidParameter(
                    "tabulated generator needs increasing x and decreasing positive psi".into(),
                ));
            }
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ls: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
        let log_psi = MonotoneCubic::new(xs, ls)?;
        let mut tail_slope = log_psi.slope_last();
        if tail_slope >= 0.0 {
            let n = points.len();
            tail_slope = (points[n - 1].1.ln() - points[n - 2].1.ln()) / (points[n - 1].0 - points[n - 2].0);
        }
        Ok(TabulatedGenerator { points, log_psi, tail_slope })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn log_psi(&self, x: f64) -> f64 {
        if x >= self.log_psi.x_max() {
            self.log_psi.y_last() + self.tail_slope * (x - self.log_psi.x_max())
        } else {
            self.log_psi.eval(x)
        }
    }
}

/// Direction of the additivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Additivity {
    /// `f(x + y) <= f(x) + f(y)`.
    Sub,
    /// `f(x + y) >= f(x) + f(y)`.
    Super,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorCheck {
    pub satisfied: bool,
    /// First failing point; `(x, y)` pairs report `y` in the second slot.
    pub witness: Option<(f64, f64)>,
}

fn check_param(name: &str, ok: bool, v: f64) -> Result<()> {
    if ok && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} out of range: {v}")))
    }
}

impl Generator {
    pub fn gumbel_frailty(a: f64) -> Result<Self> {
        check_param("gumbel_frailty a (0 < a <= 1)", a > 0.0 && a <= 1.0, a)?;
        Ok(Generator::GumbelFrailty { a })
    }

    pub fn gumbel_hougaard(a: f64) -> Result<Self> {
        check_param("gumbel_hougaard a (a >= 1)", a >= 1.0, a)?;
        Ok(Generator::GumbelHougaard { a })
    }

    pub fn clayton(c: f64) -> Result<Self> {
        check_param("clayton c (c > 0)", c > 0.0, c)?;
        Ok(Generator::Clayton { c })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        Ok(Generator::Tabulated(Arc::new(TabulatedGenerator::new(points)?)))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Generator::GumbelFrailty { a } => Self::gumbel_frailty(a).map(|_| ()),
            Generator::GumbelHougaard { a } => Self::gumbel_hougaard(a).map(|_| ()),
            Generator::Clayton { c } => Self::clayton(c).map(|_| ()),
            Generator::Independence | Generator::Tabulated(_) => Ok(()),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Generator::Independence => "independence",
            Generator::GumbelFrailty { .. } => "gumbel_frailty",
            Generator::GumbelHougaard { .. } => "gumbel_hougaard",
            Generator::Clayton { .. } => "clayton",
            Generator::Tabulated(_) => "tabulated",
        }
    }

    /// `ln psi(x)` for `x >= 0`.
    pub fn log_psi(&self, x: f64) -> f64 {
        if x >= SATURATED {
            return f64::NEG_INFINITY;
        }
        let x = x.max(0.0);
        match *self {
            Generator::Independence => -x,
            Generator::GumbelFrailty { a } => -x.exp_m1() / a,
            Generator::GumbelHougaard { a } => -x.powf(1.0 / a),
            Generator::Clayton { c } => -(c * x).ln_1p() / c,
            Generator::Tabulated(ref t) => t.log_psi(x),
        }
    }

    pub fn psi(&self, x: f64) -> f64 {
        self.log_psi(x).exp()
    }

    /// `phi(v)` given `ln v` (`ln v <= 0`); `-inf` maps to [`SATURATED`].
    pub fn phi_from_log(&self, ln_v: f64) -> f64 {
        if ln_v == f64::NEG_INFINITY {
            return SATURATED;
        }
        let l = ln_v.min(0.0);
        let x = match *self {
            Generator::Independence => -l,
            Generator::GumbelFrailty { a } => (-a * l).ln_1p(),
            Generator::GumbelHougaard { a } => (-l).powf(a),
            Generator::Clayton { c } => (-c * l).exp_m1() / c,
            Generator::Tabulated(_) => self.invert_log_psi(l),
        };
        x.min(SATURATED)
    }

    fn invert_log_psi(&self, l: f64) -> f64 {
        if l >= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.log_psi(hi) > l {
            hi *= 2.0;
            if hi > 1e300 {
                return SATURATED;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.log_psi(mid) > l {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse generator on `[0, 1]`; `phi(0)` is [`SATURATED`].
    pub fn phi(&self, v: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain { what: "generator inverse", value: v });
        }
        Ok(self.phi_from_log(v.ln()))
    }

    /// Log-concavity of `psi`: only the independence and Gumbel-frailty families are
    /// log-concave among the built-ins; this is decided numerically.
    pub fn is_log_concave(&self) -> bool {
        check_log_concave(self, &self.default_log_concave_grid())
            .map(|c| c.satisfied)
            .unwrap_or(false)
    }

    /// Upper end of the default test range: `phi(1e-6)`.
    pub fn default_upper(&self) -> f64 {
        self.phi_from_log(1e-6f64.ln())
    }

    /// 128 points on `(0, phi(1e-6)]`.
    pub fn default_log_concave_grid(&self) -> Vec<f64> {
        let hi = self.default_upper();
        linspace(0.0, hi, 129).into_iter().skip(1).collect()
    }
}

/// Tests concavity of `ln psi` on the grid by chord comparison.
pub fn check_log_concave(gen: &Generator, grid: &[f64]) -> Result<GeneratorCheck> {
    if grid.len() < MIN_LOG_CONCAVE_GRID {
        return Err(Error::GridTooShort { needed: MIN_LOG_CONCAVE_GRID, got: grid.len() });
    }
    if let Some(&bad) = grid.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::GridOutsideDomain(bad));
    }
    let vals: Vec<f64> = grid.iter().map(|&x| gen.log_psi(x)).collect();
    if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
        return Err(Error::GridOutsideDomain(grid[i]));
    }
    let fail = first_nonconcave(grid, &vals, 1e-10);
    Ok(GeneratorCheck { satisfied: fail.is_none(), witness: fail.map(|i| (grid[i], vals[i])) })
}

/// `phi_outer(psi_inner(x))`, evaluated in log space.
pub fn compose(outer: &Generator, inner: &Generator, x: f64) -> f64 {
    outer.phi_from_log(inner.log_psi(x))
}

/// Pairs `(x, y)` from an `m`-point grid on `[0, x_hi]` with `x + y <= x_hi`.
pub fn triangular_pairs(x_hi: f64, m: usize) -> Vec<(f64, f64)> {
    let xs = linspace(0.0, x_hi, m);
    let mut out = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for &y in xs.iter().take(m - i) {
            out.push((x, (y).min(x_hi - x).max(0.0)));
        }
    }
    out
}

/// Default additivity pairs: triangle with `psi_inner(x_hi) = 1e-6`, 16-point sides.
pub fn default_additivity_pairs(inner: &Generator) -> Vec<(f64, f64)> {
    triangular_pairs(inner.default_upper(), 16)
}

/// Tests sub- or super-additivity of `phi_outer o psi_inner` on the given pairs.
pub fn check_additivity(
    outer: &Generator,
    inner: &Generator,
    mode: Additivity,
    pairs: &[(f64, f64)],
) -> Result<GeneratorCheck> {
    if pairs.len() < MIN_ADDITIVITY_PAIRS {
        return Err(Error::GridTooShort { needed: MIN_ADDITIVITY_PAIRS, got: pairs.len() });
    }
    let f = |x: f64| -> Result<f64> {
        if !(x >= 0.0) || !inner.log_psi(x).is_finite() {
            return Err(Error::GridOutsideDomain(x));
        }
        Ok(compose(outer, inner, x))
    };
    for &(x, y) in pairs {
        let (fx, fy, fxy) = (f(x)?, f(y)?, f(x + y)?);
        let slack = ADDITIVITY_SLACK * (1.0 + fxy.abs());
        let bad = match mode {
            Additivity::Sub => fxy > fx + fy + slack,
            Additivity::Super => fxy < fx + fy - slack,
        };
        if bad {
            return Ok(GeneratorCheck { satisfied: false, witness: Some((x, y)) });
        }
    }
    Ok(GeneratorCheck { satisfied: true, witness: None })
}

/// Checks `(-1)^i Delta_h^i psi >= 0` for `i = 0..=order` on a uniform grid.
pub fn check_d_monotone(gen: &Generator, order: usize, x_hi: f64, m: usize) -> GeneratorCheck {
    let xs = linspace(0.0, x_hi, m);
    let mut diffs: Vec<f64> = xs.iter().map(|&x| gen.psi(x)).collect();
    for i in 0..=order {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        if let Some(j) = diffs.iter().position(|&d| sign * d < -1e-7) {
            return GeneratorCheck { satisfied: false, witness: Some((xs[j], i as f64)) };
        }
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    GeneratorCheck { satisfied: true, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens() -> Vec<Generator> {
        vec![
            Generator::Independence,
            Generator::gumbel_frailty(0.5).unwrap(),
            Generator::gumbel_frailty(0.001).unwrap(),
            Generator::gumbel_hougaard(2.5).unwrap(),
            Generator::gumbel_hougaard(1.0001).unwrap(),
            Generator::clayton(1.5).unwrap(),
        ]
    }

    #[test]
    fn reference_values() {
        let gf = Generator::gumbel_frailty(0.5).unwrap();
        let expect = (2.0 * (1.0 - 1f64.exp())).exp();
        assert!((gf.psi(1.0) - expect).abs() < 1e-15);
        assert_eq!(Generator::Independence.psi(0.0), 1.0);
        assert!((Generator::Independence.phi(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(Generator::Independence.phi(0.0).unwrap(), SATURATED);
        assert_eq!(Generator::Independence.psi(SATURATED), 0.0);
        assert!(Generator::Independence.phi(1.5).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Generator::gumbel_frailty(0.0).is_err());
        assert!(Generator::gumbel_frailty(1.5).is_err());
        assert!(Generator::gumbel_hougaard(0.9).is_err());
        assert!(Generator::clayton(0.0).is_err());
        assert!(Generator::clayton(-1.0).is_err());
        assert!(Generator::tabulated(vec![(0.0, 1.0), (1.0, 0.5), (2.0, 0.6), (3.0, 0.1)]).is_err());
    }

    #[test]
    fn psi_phi_roundtrip() {
        for g in gens() {
            for &v in &[1e-300, 1e-12, 0.01, 0.3, 0.9, 1.0 - 1e-12, 1.0] {
                let x = g.phi(v).unwrap();
                if x >= SATURATED {
                    // v is below what phi can represent; saturation reads back as 0
                    assert_eq!(g.psi(x), 0.0);
                    continue;
                }
                let back = g.psi(x);
                assert!((back - v).abs() <= 1e-10 * v, "{g:?} v={v} back={back}");
            }
        }
    }

    #[test]
    fn log_concavity_classification() {
        assert!(Generator::Independence.is_log_concave());
        assert!(Generator::gumbel_frailty(0.5).unwrap().is_log_concave());
        assert!(!Generator::gumbel_hougaard(2.5).unwrap().is_log_concave());
        assert!(!Generator::clayton(1.5).unwrap().is_log_concave());
    }

    #[test]
    fn additivity_cross_checks() {
        let g1 = Generator::gumbel_frailty(0.001).unwrap();
        let g2 = Generator::gumbel_frailty(0.5).unwrap();
        // phi_2 o psi_1 for frailty generators with a1 < a2 is concave through 0, hence sub-additive.
        let pairs = default_additivity_pairs(&g1);
        assert!(pairs.len() >= MIN_ADDITIVITY_PAIRS);
        assert!(check_additivity(&g2, &g1, Additivity::Sub, &pairs).unwrap().satisfied);
        let sup = check_additivity(&g2, &g1, Additivity::Super, &pairs).unwrap();
        assert!(!sup.satisfied && sup.witness.is_some());
        let pairs = default_additivity_pairs(&g2);
        assert!(check_additivity(&g1, &g2, Additivity::Super, &pairs).unwrap().satisfied);
        let id = Generator::Independence;
        let pairs = default_additivity_pairs(&id);
        assert!(check_additivity(&id, &id, Additivity::Sub, &pairs).unwrap().satisfied);
        assert!(check_additivity(&id, &id, Additivity::Super, &pairs).unwrap().satisfied);
    }

    #[test]
    fn additivity_rejects_short_input() {
        let id = Generator::Independence;
        let few = triangular_pairs(1.0, 4);
        assert!(check_additivity(&id, &id, Additivity::Sub, &few).is_err());
    }

    #[test]
    fn d_monotonicity() {
        for g in gens() {
            let c = check_d_monotone(&g, 2, g.default_upper().min(50.0), 200);
            assert!(c.satisfied, "{g:?}: {:?}", c.witness);
        }
        for g in [Generator::Independence, Generator::gumbel_hougaard(2.5).unwrap(), Generator::clayton(1.5).unwrap()] {
            assert!(check_d_monotone(&g, 3, g.default_upper().min(50.0), 200).satisfied, "{g:?}");
        }
        // psi''' > 0 near the origin for the frailty family.
        let gf = Generator::gumbel_frailty(0.9).unwrap();
        assert!(!check_d_monotone(&gf, 3, 2.0, 400).satisfied);
    }

    #[test]
    fn tabulated_generator_matches_source() {
        let src = Generator::clayton(0.8).unwrap();
        let pts: Vec<(f64, f64)> =
            linspace(0.0, 40.0, 400).into_iter().map(|x| (x, src.psi(x))).collect();
        let tab = Generator::tabulated(pts).unwrap();
        for &x in &[0.3, 2.0, 17.0] {
            assert!((tab.psi(x) - src.psi(x)).abs() < 1e-6);
        }
        let x = tab.phi(0.2).unwrap();
        assert!((tab.psi(x) - 0.2).abs() < 1e-12);
        assert!(tab.psi(100.0) > 0.0);
    }
}
