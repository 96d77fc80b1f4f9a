//! Baseline distribution families `F_b` and the hazard-shape conditions used as hypotheses.
//!
//! Every family is described through its cumulative hazard `H(w) = -ln(1 - F_b(w))`, which keeps
//! survival probabilities accurate deep in the tail. Below the support (`w <= support_lo`) the
//! distribution function is zero and all hazard-type quantities vanish.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    first_decrease, first_increase, first_nonconcave, first_nonconvex, offset_logspace,
    MonotoneCubic,
};

/// Minimum number of grid points accepted by [`check_shape`].
pub const MIN_SHAPE_GRID: usize = 32;
/// Slack used by the discrete monotonicity and convexity tests.
pub const SHAPE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum BaselineFamily {
    /// `F(w) = 1 - w^{-a}`, `w >= 1`.
    Pareto { a: f64 },
    /// `F(w) = 1 - (1 + w^c)^{-k}`, `w >= 0`.
    Burr { c: f64, k: f64 },
    /// `F(w) = 1 - exp(1 - (1 + w^c)^{1/k})`, `w >= 0`.
    PowerGenWeibull { c: f64, k: f64 },
    /// `F(w) = (1 - exp(-w^d))^c`, `w >= 0`.
    ExpWeibull { d: f64, c: f64 },
    /// `F(w) = 1 - exp(1 - w^a)`, `w >= 1`.
    TruncWeibull { a: f64 },
    /// `F(w) = (w - 1) / (w + 1)`, `w >= 1`.
    RatioPareto,
    /// Interpolated from `(w, F)` pairs.
    Tabulated(Arc<TabulatedBaseline>),
}

/// Monotone interpolation of the cumulative hazard through tabulated `(w, F)` pairs,
/// continued beyond the last node with the final hazard rate.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedBaseline {
    points: Vec<(f64, f64)>,
    cum: MonotoneCubic,
    tail_rate: f64,
}

impl TabulatedBaseline {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InvalidParameter("tabulated baseline needs >= 4 points".into()));
        }
        if points[0].1 != 0.0 {
            return Err(Error::InvalidParameter("tabulated baseline must start at F = 0".into()));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(Error::InvalidParameter(
                    "tabulated baseline needs strictly increasing w and F".into(),
                ));
            }
        }
        if points.iter().any(|p| !(p.1 >= 0.0 && p.1 < 1.0) || !p.0.is_finite()) {
            return Err(Error::InvalidParameter("tabulated F values must lie in [0, 1)".into()));
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let hs: Vec<f64> = points.iter().map(|p| -(-p.1).ln_1p()).collect();
        let cum = MonotoneCubic::new(xs, hs)?;
        let mut tail_rate = cum.slope_last();
        if tail_rate <= 0.0 {
            let n = points.len();
            let (x0, x1) = (points[n - 2].0, points[n - 1].0);
            tail_rate = (cum.eval(x1) - cum.eval(x0)) / (x1 - x0);
        }
        Ok(TabulatedBaseline { points, cum, tail_rate })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// `(H, H', H'')` at `w`, zero below the first node.
    fn eval(&self, w: f64) -> (f64, f64, f64) {
        if w <= self.cum.x_min() {
            return (0.0, 0.0, 0.0);
        }
        if w >= self.cum.x_max() {
            let h = self.cum.y_last() + self.tail_rate * (w - self.cum.x_max());
            return (h, self.tail_rate, 0.0);
        }
        self.cum.eval_all(w)
    }

    fn inverse(&self, h: f64) -> f64 {
        if h >= self.cum.y_last() {
            self.cum.x_max() + (h - self.cum.y_last()) / self.tail_rate
        } else {
            self.cum.inverse_increasing(h)
        }
    }
}

/// Hazard-shape hypotheses. `w` is the baseline argument, `r` the hazard rate, `g = F / (1 - F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeCondition {
    /// `r` decreasing.
    HazardDecreasing,
    /// `w r(w)` decreasing.
    WHazardDecreasing,
    /// `w^2 r(w)` decreasing.
    W2HazardDecreasing,
    /// `r` decreasing and convex.
    HazardDecreasingConvex,
    /// `w^2 r'(w)` increasing.
    W2HazardPrimeIncreasing,
    /// `g` increasing and convex.
    GIncreasingConvex,
    /// `g''` decreasing.
    GSecondDecreasing,
    /// `w^2 g''(w)` decreasing.
    W2GSecondDecreasing,
    /// `w r(w)` increasing and concave.
    WHazardIncreasingConcave,
    /// `g` increasing and concave.
    GIncreasingConcave,
    /// `w g'(w)` convex.
    WGPrimeConvex,
}

impl ShapeCondition {
    pub const ALL: [ShapeCondition; 11] = [
        ShapeCondition::HazardDecreasing,
        ShapeCondition::WHazardDecreasing,
        ShapeCondition::W2HazardDecreasing,
        ShapeCondition::HazardDecreasingConvex,
        ShapeCondition::W2HazardPrimeIncreasing,
        ShapeCondition::GIncreasingConvex,
        ShapeCondition::GSecondDecreasing,
        ShapeCondition::W2GSecondDecreasing,
        ShapeCondition::WHazardIncreasingConcave,
        ShapeCondition::GIncreasingConcave,
        ShapeCondition::WGPrimeConvex,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            ShapeCondition::HazardDecreasing => "r(w) decreasing",
            ShapeCondition::WHazardDecreasing => "w r(w) decreasing",
            ShapeCondition::W2HazardDecreasing => "w^2 r(w) decreasing",
            ShapeCondition::HazardDecreasingConvex => "r(w) decreasing and convex",
            ShapeCondition::W2HazardPrimeIncreasing => "w^2 r'(w) increasing",
            ShapeCondition::GIncreasingConvex => "g(w) increasing and convex",
            ShapeCondition::GSecondDecreasing => "g''(w) decreasing",
            ShapeCondition::W2GSecondDecreasing => "w^2 g''(w) decreasing",
            ShapeCondition::WHazardIncreasingConcave => "w r(w) increasing and concave",
            ShapeCondition::GIncreasingConcave => "g(w) increasing and concave",
            ShapeCondition::WGPrimeConvex => "w g'(w) convex",
        }
    }
}

/// Result of a shape test on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeCheck {
    pub satisfied: bool,
    /// First abscissa where the condition fails.
    pub witness: Option<f64>,
    /// The family does not provide the derivative the condition needs.
    pub unsupported: bool,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl BaselineFamily {
    pub fn pareto(a: f64) -> Result<Self> {
        positive("pareto a", a)?;
        Ok(BaselineFamily::Pareto { a })
    }

    pub fn burr(c: f64, k: f64) -> Result<Self> {
        positive("burr c", c)?;
        positive("burr k", k)?;
        Ok(BaselineFamily::Burr { c, k })
    }

    pub fn power_gen_weibull(c: f64, k: f64) -> Result<Self> {
        positive("pgw c", c)?;
        positive("pgw k", k)?;
        Ok(BaselineFamily::PowerGenWeibull { c, k })
    }

    pub fn exp_weibull(d: f64, c: f64) -> Result<Self> {
        positive("expweibull d", d)?;
        positive("expweibull c", c)?;
        Ok(BaselineFamily::ExpWeibull { d, c })
    }

    pub fn trunc_weibull(a: f64) -> Result<Self> {
        positive("truncweibull a", a)?;
        Ok(BaselineFamily::TruncWeibull { a })
    }

    pub fn ratio_pareto() -> Self {
        BaselineFamily::RatioPareto
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        Ok(BaselineFamily::Tabulated(Arc::new(TabulatedBaseline::new(points)?)))
    }

    /// Re-runs the constructor checks.
    pub fn validate(&self) -> Result<()> {
        match *self {
            BaselineFamily::Pareto { a } => Self::pareto(a).map(|_| ()),
            BaselineFamily::Burr { c, k } => Self::burr(c, k).map(|_| ()),
            BaselineFamily::PowerGenWeibull { c, k } => Self::power_gen_weibull(c, k).map(|_| ()),
            BaselineFamily::ExpWeibull { d, c } => Self::exp_weibull(d, c).map(|_| ()),
            BaselineFamily::TruncWeibull { a } => Self::trunc_weibull(a).map(|_| ()),
            BaselineFamily::RatioPareto | BaselineFamily::Tabulated(_) => Ok(()),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            BaselineFamily::Pareto { .. } => "pareto",
            BaselineFamily::Burr { .. } => "burr",
            BaselineFamily::PowerGenWeibull { .. } => "pgw",
            BaselineFamily::ExpWeibull { .. } => "expweibull",
            BaselineFamily::TruncWeibull { .. } => "truncweibull",
            BaselineFamily::RatioPareto => "ratio",
            BaselineFamily::Tabulated(_) => "tabulated",
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self, BaselineFamily::Tabulated(_))
    }

    pub fn support_lo(&self) -> f64 {
        match self {
            BaselineFamily::Pareto { .. }
            | BaselineFamily::TruncWeibull { .. }
            | BaselineFamily::RatioPareto => 1.0,
            BaselineFamily::Burr { .. }
            | BaselineFamily::PowerGenWeibull { .. }
            | BaselineFamily::ExpWeibull { .. } => 0.0,
            BaselineFamily::Tabulated(t) => t.points[0].0,
        }
    }

    /// `(ln F, ln S)` for the exponentiated Weibull family, both computed without cancellation.
    fn expweibull_logs(d: f64, c: f64, w: f64) -> (f64, f64) {
        let z = w.powf(d);
        let ln_u = if z < std::f64::consts::LN_2 { (-(-z).exp_m1()).ln() } else { (-(-z).exp()).ln_1p() };
        let ln_f = c * ln_u;
        let ln_s = if ln_f < -std::f64::consts::LN_2 { (-ln_f.exp()).ln_1p() } else { (-ln_f.exp_m1()).ln() };
        (ln_f, ln_s)
    }

    /// Cumulative hazard `H(w) = -ln S_b(w)`.
    pub fn cum_hazard(&self, w: f64) -> f64 {
        if w <= self.support_lo() || w.is_nan() {
            return if w.is_nan() { f64::NAN } else { 0.0 };
        }
        match *self {
            BaselineFamily::Pareto { a } => a * w.ln(),
            BaselineFamily::Burr { c, k } => k * w.powf(c).ln_1p(),
            BaselineFamily::PowerGenWeibull { c, k } => (w.powf(c).ln_1p() / k).exp_m1(),
            BaselineFamily::ExpWeibull { d, c } => -Self::expweibull_logs(d, c, w).1,
            BaselineFamily::TruncWeibull { a } => (a * w.ln()).exp_m1(),
            BaselineFamily::RatioPareto => (0.5 * (w - 1.0)).ln_1p(),
            BaselineFamily::Tabulated(ref t) => t.eval(w).0,
        }
    }

    pub fn sf(&self, w: f64) -> f64 {
        (-self.cum_hazard(w)).exp()
    }

    pub fn cdf(&self, w: f64) -> f64 {
        if let BaselineFamily::ExpWeibull { d, c } = *self {
            if w <= 0.0 {
                return 0.0;
            }
            return Self::expweibull_logs(d, c, w).0.exp();
        }
        -(-self.cum_hazard(w)).exp_m1()
    }

    /// `ln F_b(w)`, `-inf` at or below the support.
    pub fn log_cdf(&self, w: f64) -> f64 {
        if w <= self.support_lo() {
            return f64::NEG_INFINITY;
        }
        if let BaselineFamily::ExpWeibull { d, c } = *self {
            return Self::expweibull_logs(d, c, w).0;
        }
        let h = self.cum_hazard(w);
        if h < std::f64::consts::LN_2 {
            (-(-h).exp_m1()).ln()
        } else {
            (-(-h).exp()).ln_1p()
        }
    }

    /// Hazard rate `r(w) = H'(w)`; zero below the support.
    pub fn hazard_rate(&self, w: f64) -> f64 {
        if w <= self.support_lo() {
            return 0.0;
        }
        match *self {
            BaselineFamily::Pareto { a } => a / w,
            BaselineFamily::Burr { c, k } => {
                let wc = w.powf(c);
                c * k * wc / (w * (1.0 + wc))
            }
            BaselineFamily::PowerGenWeibull { c, k } => {
                let wc = w.powf(c);
                (c / k) * wc / w * ((1.0 / k - 1.0) * wc.ln_1p()).exp()
            }
            BaselineFamily::ExpWeibull { d, c } => {
                let z = w.powf(d);
                let (ln_f, ln_s) = Self::expweibull_logs(d, c, w);
                let ln_u = ln_f / c;
                let ln_dens = (c * d).ln() + (d - 1.0) * w.ln() - z + (c - 1.0) * ln_u;
                (ln_dens - ln_s).exp()
            }
            BaselineFamily::TruncWeibull { a } => a * ((a - 1.0) * w.ln()).exp(),
            BaselineFamily::RatioPareto => 1.0 / (w + 1.0),
            BaselineFamily::Tabulated(ref t) => t.eval(w).1,
        }
    }

    /// Checked hazard rate: requires `w` inside the support with `F_b(w) < 1`.
    pub fn hazard(&self, w: f64) -> Result<f64> {
        if !(w > self.support_lo()) {
            return Err(Error::Domain { what: "baseline hazard", value: w });
        }
        if self.sf(w) == 0.0 {
            return Err(Error::SurvivalUnderflow(w));
        }
        Ok(self.hazard_rate(w))
    }

    /// Derivative of the hazard rate `r'(w)`.
    pub fn hazard_slope(&self, w: f64) -> f64 {
        if w <= self.support_lo() {
            return 0.0;
        }
        match *self {
            BaselineFamily::Pareto { a } => -a / (w * w),
            BaselineFamily::Burr { c, k } => {
                let wc = w.powf(c);
                c * k * (wc / (w * w)) * ((c - 1.0) - wc) / ((1.0 + wc) * (1.0 + wc))
            }
            BaselineFamily::PowerGenWeibull { c, k } => {
                let wc = w.powf(c);
                let r = self.hazard_rate(w);
                r * ((c - 1.0) / w + (1.0 / k - 1.0) * c * (wc / w) / (1.0 + wc))
            }
            BaselineFamily::ExpWeibull { d, c } => {
                let z = w.powf(d);
                let zw = z / w;
                let r = self.hazard_rate(w);
                let dlogf = (d - 1.0) / w - d * zw + (c - 1.0) * d * zw / z.exp_m1();
                r * (dlogf + r)
            }
            BaselineFamily::TruncWeibull { a } => a * (a - 1.0) * ((a - 2.0) * w.ln()).exp(),
            BaselineFamily::RatioPareto => -1.0 / ((w + 1.0) * (w + 1.0)),
            BaselineFamily::Tabulated(ref t) => t.eval(w).2,
        }
    }

    pub fn density(&self, w: f64) -> f64 {
        if w <= self.support_lo() {
            return 0.0;
        }
        self.hazard_rate(w) * self.sf(w)
    }

    /// Reversed hazard `f / F`.
    pub fn reversed_hazard(&self, w: f64) -> Result<f64> {
        if !(w > self.support_lo()) {
            return Err(Error::Domain { what: "reversed hazard", value: w });
        }
        let f = self.cdf(w);
        if f == 0.0 {
            return Err(Error::Domain { what: "reversed hazard", value: w });
        }
        Ok(self.density(w) / f)
    }

    /// Odds ratio `g(w) = F(w) / (1 - F(w)) = e^{H} - 1`.
    pub fn g(&self, w: f64) -> f64 {
        self.cum_hazard(w).exp_m1()
    }

    /// `g'(w) = r(w) e^{H(w)}`.
    pub fn g_prime(&self, w: f64) -> f64 {
        if w <= self.support_lo() {
            return 0.0;
        }
        self.hazard_rate(w) * self.cum_hazard(w).exp()
    }

    /// `g''(w) = (r'(w) + r(w)^2) e^{H(w)}`.
    pub fn g_second(&self, w: f64) -> f64 {
        if w <= self.support_lo() {
            return 0.0;
        }
        let r = self.hazard_rate(w);
        (self.hazard_slope(w) + r * r) * self.cum_hazard(w).exp()
    }

    /// Inverse of the cumulative hazard: the `w` with `H(w) = h`.
    pub fn inverse_cum_hazard(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return self.support_lo();
        }
        if h == f64::INFINITY {
            return f64::INFINITY;
        }
        match *self {
            BaselineFamily::Pareto { a } => (h / a).exp(),
            BaselineFamily::Burr { c, k } => (h / k).exp_m1().powf(1.0 / c),
            BaselineFamily::PowerGenWeibull { c, k } => (k * h.ln_1p()).exp_m1().powf(1.0 / c),
            BaselineFamily::ExpWeibull { d, c } => {
                let ln_f = if h > std::f64::consts::LN_2 { (-(-h).exp()).ln_1p() } else { (-(-h).exp_m1()).ln() };
                let q = ln_f / c;
                let z = if q < -std::f64::consts::LN_2 { -(-q.exp()).ln_1p() } else { -(-q.exp_m1()).ln() };
                z.powf(1.0 / d)
            }
            BaselineFamily::TruncWeibull { a } => (h.ln_1p() / a).exp(),
            BaselineFamily::RatioPareto => 2.0 * h.exp() - 1.0,
            BaselineFamily::Tabulated(ref t) => t.inverse(h),
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain { what: "quantile probability", value: p });
        }
        Ok(self.inverse_cum_hazard(-(-p).ln_1p()))
    }

    /// Default shape grid: 128 log-spaced offsets in `(lo + 1e-6, lo + 50)`.
    pub fn default_shape_grid(&self) -> Vec<f64> {
        offset_logspace(self.support_lo(), 1e-6, 50.0, 128)
    }
}

/// Tests a shape condition on a grid strictly inside the support.
pub fn check_shape(family: &BaselineFamily, cond: ShapeCondition, grid: &[f64]) -> Result<ShapeCheck> {
    if grid.len() < MIN_SHAPE_GRID {
        return Err(Error::GridTooShort { needed: MIN_SHAPE_GRID, got: grid.len() });
    }
    let lo = family.support_lo();
    if let Some(&bad) = grid.iter().find(|&&w| !(w > lo) || !w.is_finite()) {
        return Err(Error::GridOutsideDomain(bad));
    }
    if grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter("shape grid must be strictly increasing".into()));
    }
    if cond == ShapeCondition::W2HazardPrimeIncreasing && family.is_tabulated() {
        return Ok(ShapeCheck { satisfied: false, witness: None, unsupported: true });
    }
    let eval = |f: &dyn Fn(f64) -> f64| grid.iter().map(|&w| f(w)).collect::<Vec<f64>>();
    let s = SHAPE_SLACK;
    let fail = match cond {
        ShapeCondition::HazardDecreasing => first_increase(&eval(&|w| family.hazard_rate(w)), s),
        ShapeCondition::WHazardDecreasing => first_increase(&eval(&|w| w * family.hazard_rate(w)), s),
        ShapeCondition::W2HazardDecreasing => {
            first_increase(&eval(&|w| w * w * family.hazard_rate(w)), s)
        }
        ShapeCondition::HazardDecreasingConvex => {
            let r = eval(&|w| family.hazard_rate(w));
            first_increase(&r, s).or_else(|| first_nonconvex(grid, &r, s))
        }
        ShapeCondition::W2HazardPrimeIncreasing => {
            first_decrease(&eval(&|w| w * w * family.hazard_slope(w)), s)
        }
        ShapeCondition::GIncreasingConvex => {
            let g = eval(&|w| family.g(w));
            first_decrease(&g, s).or_else(|| first_nonconvex(grid, &g, s))
        }
        ShapeCondition::GSecondDecreasing => first_increase(&eval(&|w| family.g_second(w)), s),
        ShapeCondition::W2GSecondDecreasing => {
            first_increase(&eval(&|w| w * w * family.g_second(w)), s)
        }
        ShapeCondition::WHazardIncreasingConcave => {
            let v = eval(&|w| w * family.hazard_rate(w));
            first_decrease(&v, s).or_else(|| first_nonconcave(grid, &v, s))
        }
        ShapeCondition::GIncreasingConcave => {
            let g = eval(&|w| family.g(w));
            first_decrease(&g, s).or_else(|| first_nonconcave(grid, &g, s))
        }
        ShapeCondition::WGPrimeConvex => first_nonconvex(grid, &eval(&|w| w * family.g_prime(w)), s),
    };
    Ok(ShapeCheck { satisfied: fail.is_none(), witness: fail.map(|i| grid[i]), unsupported: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::richardson_derivative;

    fn families() -> Vec<BaselineFamily> {
        vec![
            BaselineFamily::pareto(2.0).unwrap(),
            BaselineFamily::pareto(0.7).unwrap(),
            BaselineFamily::burr(0.5, 2.0).unwrap(),
            BaselineFamily::burr(2.5, 0.8).unwrap(),
            BaselineFamily::power_gen_weibull(0.5, 2.0).unwrap(),
            BaselineFamily::power_gen_weibull(1.5, 0.7).unwrap(),
            BaselineFamily::exp_weibull(0.5, 0.2).unwrap(),
            BaselineFamily::exp_weibull(1.7, 2.5).unwrap(),
            BaselineFamily::trunc_weibull(0.12).unwrap(),
            BaselineFamily::trunc_weibull(1.8).unwrap(),
            BaselineFamily::ratio_pareto(),
        ]
    }

    #[test]
    fn pareto_reference_values() {
        let p = BaselineFamily::pareto(2.0).unwrap();
        assert!((p.cdf(2.0) - 0.75).abs() < 1e-15);
        assert!((p.g(2.0) - 3.0).abs() < 1e-14);
        assert!((p.reversed_hazard(2.0).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((p.hazard(2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_and_truncweibull_reference_values() {
        let r = BaselineFamily::ratio_pareto();
        assert!((r.hazard_rate(1.0 + 1e-12) - 0.5).abs() < 1e-9);
        assert!((r.cdf(3.0) - 0.5).abs() < 1e-15);
        let t = BaselineFamily::trunc_weibull(0.5).unwrap();
        assert_eq!(t.cdf(1.0), 0.0);
        assert!((t.cdf(4.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BaselineFamily::pareto(0.0).is_err());
        assert!(BaselineFamily::pareto(-1.0).is_err());
        assert!(BaselineFamily::burr(1.0, f64::NAN).is_err());
        assert!(BaselineFamily::exp_weibull(0.0, 1.0).is_err());
        assert!(BaselineFamily::tabulated(vec![(0.0, 0.1), (1.0, 0.2), (2.0, 0.3), (3.0, 0.4)]).is_err());
        assert!(BaselineFamily::tabulated(vec![(0.0, 0.0), (1.0, 0.2), (2.0, 1.0), (3.0, 0.4)]).is_err());
    }

    #[test]
    fn below_support_is_zero() {
        for f in families() {
            let w = f.support_lo() - 0.5;
            assert_eq!(f.cdf(w), 0.0);
            assert_eq!(f.sf(w), 1.0);
            assert_eq!(f.hazard_rate(w), 0.0);
            assert_eq!(f.g(w), 0.0);
            assert!(f.hazard(w).is_err());
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for f in families() {
            for &off in &[0.05, 0.4, 1.3, 4.0, 11.0] {
                let w = f.support_lo() + off;
                let h = 1e-4 * w;
                let r_num = richardson_derivative(&|x| f.cum_hazard(x), w, h);
                let r = f.hazard_rate(w);
                assert!((r - r_num).abs() <= 1e-7 * (1.0 + r.abs()), "{f:?} r at {w}: {r} vs {r_num}");
                let rp_num = richardson_derivative(&|x| f.hazard_rate(x), w, h);
                let rp = f.hazard_slope(w);
                assert!((rp - rp_num).abs() <= 1e-6 * (1.0 + rp.abs()), "{f:?} r' at {w}: {rp} vs {rp_num}");
                let gp_num = richardson_derivative(&|x| f.g(x), w, h);
                assert!((f.g_prime(w) - gp_num).abs() <= 1e-6 * (1.0 + gp_num.abs()));
                let gs_num = richardson_derivative(&|x| f.g_prime(x), w, h);
                assert!(
                    (f.g_second(w) - gs_num).abs() <= 1e-6 * (1.0 + gs_num.abs()),
                    "{f:?} g'' at {w}"
                );
            }
        }
    }

    #[test]
    fn density_integrates_cdf() {
        for f in families() {
            let w = f.support_lo() + 0.8;
            let num = richardson_derivative(&|x| f.cdf(x), w, 1e-4);
            assert!((f.density(w) - num).abs() < 1e-8 * (1.0 + num.abs()), "{f:?}");
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for f in families() {
            for &p in &[1e-9, 0.01, 0.3, 0.75, 0.999, 1.0 - 1e-10] {
                let w = f.quantile(p).unwrap();
                let back = f.cdf(w);
                assert!((back - p).abs() <= 1e-9 * p.max(1e-3), "{f:?} p={p} back={back}");
            }
        }
    }

    #[test]
    fn expweibull_tail_is_accurate() {
        let f = BaselineFamily::exp_weibull(1.0, 1.0).unwrap();
        assert!((f.cum_hazard(50.0) - 50.0).abs() < 1e-9);
        assert!((f.hazard_rate(30.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn shape_checks_on_known_families() {
        let p = BaselineFamily::pareto(1.5).unwrap();
        let grid = p.default_shape_grid();
        let ok = |f: &BaselineFamily, c| check_shape(f, c, &f.default_shape_grid()).unwrap().satisfied;
        assert!(ok(&p, ShapeCondition::WHazardDecreasing));
        assert!(ok(&p, ShapeCondition::HazardDecreasingConvex));
        assert!(ok(&p, ShapeCondition::GIncreasingConvex));
        assert!(ok(&p, ShapeCondition::GSecondDecreasing));
        assert!(!ok(&p, ShapeCondition::W2HazardDecreasing));
        assert!(check_shape(&p, ShapeCondition::W2HazardDecreasing, &grid).unwrap().witness.is_some());
        let p3 = BaselineFamily::pareto(3.0).unwrap();
        assert!(!ok(&p3, ShapeCondition::GSecondDecreasing));
        let r = BaselineFamily::ratio_pareto();
        assert!(ok(&r, ShapeCondition::WHazardIncreasingConcave));
        assert!(ok(&r, ShapeCondition::GIncreasingConcave));
        assert!(ok(&r, ShapeCondition::WGPrimeConvex));
        let t = BaselineFamily::trunc_weibull(0.12).unwrap();
        assert!(ok(&t, ShapeCondition::HazardDecreasing));
        assert!(!ok(&t, ShapeCondition::WHazardDecreasing));
        let tw = BaselineFamily::trunc_weibull(1.8).unwrap();
        assert!(!ok(&tw, ShapeCondition::HazardDecreasing));
        let b = BaselineFamily::burr(0.5, 2.0).unwrap();
        assert!(ok(&b, ShapeCondition::HazardDecreasing));
        let pg = BaselineFamily::power_gen_weibull(0.5, 2.0).unwrap();
        assert!(ok(&pg, ShapeCondition::HazardDecreasing));
        let e = BaselineFamily::exp_weibull(0.5, 0.2).unwrap();
        assert!(ok(&e, ShapeCondition::HazardDecreasing));
    }

    #[test]
    fn shape_check_rejects_bad_grids() {
        let p = BaselineFamily::pareto(1.5).unwrap();
        let short = vec![1.5, 2.0, 3.0];
        assert!(matches!(
            check_shape(&p, ShapeCondition::HazardDecreasing, &short),
            Err(Error::GridTooShort { .. })
        ));
        let mut outside = p.default_shape_grid();
        outside[0] = 0.5;
        assert!(matches!(
            check_shape(&p, ShapeCondition::HazardDecreasing, &outside),
            Err(Error::GridOutsideDomain(_))
        ));
    }

    #[test]
    fn tabulated_reproduces_source_family() {
        let src = BaselineFamily::trunc_weibull(0.7).unwrap();
        let pts: Vec<(f64, f64)> = crate::numeric::offset_logspace(1.0, 1e-4, 80.0, 600)
            .into_iter()
            .map(|w| (w, src.cdf(w)))
            .chain(std::iter::once((1.0, 0.0)))
            .collect::<Vec<_>>();
        let mut pts = pts;
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let tab = BaselineFamily::tabulated(pts).unwrap();
        assert_eq!(tab.support_lo(), 1.0);
        for &w in &[1.5, 3.0, 10.0, 40.0] {
            assert!((tab.cdf(w) - src.cdf(w)).abs() < 1e-6);
            assert!((tab.hazard_rate(w) - src.hazard_rate(w)).abs() < 1e-3 * src.hazard_rate(w));
        }
        let q = tab.quantile(0.9).unwrap();
        assert!((tab.cdf(q) - 0.9).abs() < 1e-10);
        let beyond = tab.quantile(1.0 - 1e-15).unwrap();
        assert!(beyond > 81.0);
        let c = check_shape(&tab, ShapeCondition::W2HazardPrimeIncreasing, &tab.default_shape_grid()).unwrap();
        assert!(c.unsupported && !c.satisfied);
    }
}
