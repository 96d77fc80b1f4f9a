//! Second-order statistic `X_{2:n}` of ELS samples: survival function, hazard rate and the
//! subset-enumeration oracle.
//!
//! A component is `X_i ~ F_b((x - λ_i) / θ_i)^{α_i}`, zero below `λ_i` (and below
//! `λ_i + θ_i * support_lo`).

use crate::baseline::BaselineFamily;
use crate::copula::{Generator, SATURATED};
use crate::error::{Error, Result};
use crate::numeric::richardson_derivative;

/// Survival values below this are treated as underflow for hazard evaluation.
pub const SF_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ElsBatch {
    baseline: BaselineFamily,
    location: Vec<f64>,
    scale: Vec<f64>,
    shape: Vec<f64>,
    generator: Option<Generator>,
}

fn ln_one_minus_exp(l: f64) -> f64 {
    // ln(1 - e^l) for l <= 0
    if l < -std::f64::consts::LN_2 {
        (-l.exp()).ln_1p()
    } else {
        (-l.exp_m1()).ln()
    }
}

impl ElsBatch {
    pub fn new(
        baseline: BaselineFamily,
        location: Vec<f64>,
        scale: Vec<f64>,
        shape: Vec<f64>,
        generator: Option<Generator>,
    ) -> Result<Self> {
        let n = location.len();
        if n < 2 {
            return Err(Error::InvalidParameter("a batch needs at least 2 components".into()));
        }
        if scale.len() != n {
            return Err(Error::LengthMismatch { left: n, right: scale.len() });
        }
        if shape.len() != n {
            return Err(Error::LengthMismatch { left: n, right: shape.len() });
        }
        if location.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("locations must be finite".into()));
        }
        if scale.iter().chain(&shape).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidParameter("scales and shapes must be positive".into()));
        }
        baseline.validate()?;
        if let Some(g) = &generator {
            g.validate()?;
        }
        Ok(ElsBatch { baseline, location, scale, shape, generator })
    }

    pub fn independent(
        baseline: BaselineFamily,
        location: Vec<f64>,
        scale: Vec<f64>,
        shape: Vec<f64>,
    ) -> Result<Self> {
        Self::new(baseline, location, scale, shape, None)
    }

    /// `n` identical components.
    pub fn homogeneous(
        baseline: BaselineFamily,
        location: f64,
        scale: f64,
        shape: f64,
        n: usize,
        generator: Option<Generator>,
    ) -> Result<Self> {
        Self::new(baseline, vec![location; n], vec![scale; n], vec![shape; n], generator)
    }

    pub fn with_generator(mut self, generator: Option<Generator>) -> Result<Self> {
        if let Some(g) = &generator {
            g.validate()?;
        }
        self.generator = generator;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.location.len()
    }

    pub fn baseline(&self) -> &BaselineFamily {
        &self.baseline
    }

    pub fn location(&self) -> &[f64] {
        &self.location
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn shape(&self) -> &[f64] {
        &self.shape
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }

    pub fn reciprocal_scale(&self) -> Vec<f64> {
        self.scale.iter().map(|t| 1.0 / t).collect()
    }

    pub fn is_unit_shape(&self) -> bool {
        self.shape.iter().all(|&a| a == 1.0)
    }

    pub fn max_location(&self) -> f64 {
        self.location.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest point where some component's baseline argument reaches the support.
    pub fn support_floor(&self) -> f64 {
        let lo = self.baseline.support_lo();
        self.location
            .iter()
            .zip(&self.scale)
            .map(|(l, t)| l + t * lo)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn w(&self, i: usize, x: f64) -> f64 {
        (x - self.location[i]) / self.scale[i]
    }

    /// `ln F_{X_i}(x)`.
    pub fn marginal_log_cdf(&self, i: usize, x: f64) -> f64 {
        let l = self.baseline.log_cdf(self.w(i, x));
        if l == f64::NEG_INFINITY {
            l
        } else {
            self.shape[i] * l
        }
    }

    pub fn marginal_cdf(&self, i: usize, x: f64) -> f64 {
        self.marginal_log_cdf(i, x).exp()
    }

    pub fn marginal_sf(&self, i: usize, x: f64) -> f64 {
        -self.marginal_log_cdf(i, x).exp_m1()
    }

    pub fn marginal_log_sf(&self, i: usize, x: f64) -> f64 {
        let l = self.marginal_log_cdf(i, x);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            ln_one_minus_exp(l)
        }
    }

    /// Survival function of the second smallest component, dispatching on dependence.
    pub fn sf_second(&self, x: f64) -> Result<f64> {
        match self.generator {
            None => sf_second_indep(self, x),
            Some(_) => sf_second_dep(self, x),
        }
    }

    /// Hazard rate of the second smallest component: closed form for independent unit-shape
    /// batches, numeric differentiation of `-ln sf` otherwise.
    pub fn hazard_second(&self, x: f64) -> Result<f64> {
        if self.generator.is_none() && self.is_unit_shape() {
            hazard_second_indep_unit(self, x)
        } else {
            hazard_numeric(|t| self.sf_second(t), x)
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_nan() {
        Err(Error::Domain { what: "order statistic argument", value: x })
    } else {
        Ok(())
    }
}

/// Independent survival `P(X_{2:n} > x) = prod S_k + sum_l F_l prod_{k != l} S_k`.
///
/// This equals `sum_l prod_{k != l} S_k - (n - 1) prod S_k` but has only non-negative terms.
pub fn sf_second_indep(batch: &ElsBatch, x: f64) -> Result<f64> {
    if batch.generator.is_some() {
        return Err(Error::DependenceMismatch("independent formula applied to a copula batch".into()));
    }
    check_x(x)?;
    let n = batch.n();
    let s: Vec<f64> = (0..n).map(|i| batch.marginal_sf(i, x)).collect();
    let f: Vec<f64> = (0..n).map(|i| batch.marginal_cdf(i, x)).collect();
    let mut prefix = vec![1.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] * s[i];
    }
    let mut suffix = 1.0;
    let mut acc = 0.0;
    for l in (0..n).rev() {
        acc += f[l] * prefix[l] * suffix;
        suffix *= s[l];
    }
    Ok((prefix[n] + acc).clamp(0.0, 1.0))
}

/// Archimedean survival
/// `sum_l psi(sum_{k != l} phi(S_k)) - (n - 1) psi(sum_k phi(S_k))`, clamped to `[0, 1]`.
pub fn sf_second_dep(batch: &ElsBatch, x: f64) -> Result<f64> {
    let gen = batch
        .generator
        .as_ref()
        .ok_or_else(|| Error::DependenceMismatch("copula formula needs a generator".into()))?;
    check_x(x)?;
    let n = batch.n();
    let t: Vec<f64> = (0..n).map(|i| gen.phi_from_log(batch.marginal_log_sf(i, x))).collect();
    let add = |a: f64, b: f64| (a + b).min(SATURATED);
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = add(prefix[i], t[i]);
    }
    let total = prefix[n];
    let mut suffix = 0.0;
    let mut acc = 0.0;
    for l in (0..n).rev() {
        acc += gen.psi(add(prefix[l], suffix));
        suffix = add(suffix, t[l]);
    }
    let v = acc - (n as f64 - 1.0) * gen.psi(total);
    Ok(v.clamp(0.0, 1.0))
}

/// Subset-lattice oracle: `P(exactly T alive) = sum_{U ⊇ T} (-1)^{|U|-|T|} psi(sum_{k in U} phi(S_k))`,
/// summed over `|T| >= n - 1`. A batch without a generator is treated as independent.
pub fn oracle_sf_second_dep(batch: &ElsBatch, x: f64) -> Result<f64> {
    let n = batch.n();
    if n > 12 {
        return Err(Error::TooManyComponents(n));
    }
    check_x(x)?;
    let gen = batch.generator.clone().unwrap_or(Generator::Independence);
    let t: Vec<f64> = (0..n).map(|i| gen.phi_from_log(batch.marginal_log_sf(i, x))).collect();
    let full = (1usize << n) - 1;
    let joint = |mask: usize| -> f64 {
        let s: f64 = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| t[k]).sum();
        gen.psi(s.min(SATURATED))
    };
    let mut total = 0.0;
    for tmask in 0..=full {
        if (tmask.count_ones() as usize) + 1 < n {
            continue;
        }
        // supersets of tmask
        let free = full & !tmask;
        let mut sub = free;
        loop {
            let u = tmask | sub;
            let sign = if sub.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            total += sign * joint(u);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    Ok(total)
}

/// Closed-form hazard for independent unit-shape batches:
/// `sum (1/θ_i) r(w_i) - [sum (1/θ_i) g'(w_i)] / [sum g(w_i) + 1]`.
pub fn hazard_second_indep_unit(batch: &ElsBatch, x: f64) -> Result<f64> {
    if batch.generator.is_some() {
        return Err(Error::DependenceMismatch("closed-form hazard needs independence".into()));
    }
    if !batch.is_unit_shape() {
        return Err(Error::InvalidParameter("closed-form hazard needs unit shapes".into()));
    }
    check_x(x)?;
    let b = &batch.baseline;
    let lo = b.support_lo();
    let n = batch.n();
    let ws: Vec<f64> = (0..n).map(|i| batch.w(i, x)).collect();
    let hs: Vec<f64> = ws.iter().map(|&w| b.cum_hazard(w)).collect();
    if hs.iter().any(|h| !h.is_finite()) || batch.sf_second(x)? == 0.0 {
        return Err(Error::SurvivalUnderflow(x));
    }
    let m = hs.iter().cloned().fold(0.0, f64::max);
    let mut first = 0.0;
    let mut num = 0.0;
    // scaled by e^{-m}: g e^{-m} = e^{H - m} - e^{-m}
    let mut den = (-m).exp();
    for i in 0..n {
        if ws[i] <= lo {
            continue;
        }
        let r = b.hazard_rate(ws[i]);
        let inv = 1.0 / batch.scale[i];
        first += inv * r;
        num += inv * r * (hs[i] - m).exp();
        den += (hs[i] - m).exp() - (-m).exp();
    }
    Ok(first - num / den)
}

/// `-d/dx ln sf(x)` by Richardson-extrapolated central differences.
pub fn hazard_numeric<F: Fn(f64) -> Result<f64>>(sf: F, x: f64) -> Result<f64> {
    let h = 1e-4 * x.abs().max(1.0);
    for t in [x - h, x, x + h] {
        if sf(t)? <= SF_FLOOR {
            return Err(Error::SurvivalUnderflow(t));
        }
    }
    let err = std::cell::RefCell::new(None);
    let d = richardson_derivative(
        &|t| match sf(t) {
            Ok(v) => v.ln(),
            Err(e) => {
                *err.borrow_mut() = Some(e);
                f64::NAN
            }
        },
        x,
        h,
    );
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(-d),
    }
}

/// Value of a bound together with whether its preconditions hold.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub supported: bool,
    pub issues: Vec<String>,
}

/// Upper bound for the survival of `Y_{2:n}` obtained by replacing every location with
/// `μ_m = max_i (1 + μ_i) / 2`. Preconditions: independent, common scale, common shape
/// `<= 1`, `μ_max <= 1`; violations are listed in `issues`.
pub fn bound_cor31(batch: &ElsBatch, x: f64) -> Result<BoundValue> {
    let mut issues = Vec::new();
    if batch.generator.is_some() {
        issues.push("batch is not independent".to_string());
    }
    let th = batch.scale[0];
    if batch.scale.iter().any(|&t| t != th) {
        issues.push("scales are not common".to_string());
    }
    let al = batch.shape[0];
    if batch.shape.iter().any(|&a| a != al) || al > 1.0 {
        issues.push("shapes are not a common value <= 1".to_string());
    }
    if batch.max_location() > 1.0 {
        issues.push("largest location exceeds 1".to_string());
    }
    let mu_m = batch.location.iter().map(|m| 0.5 * (1.0 + m)).fold(f64::NEG_INFINITY, f64::max);
    let hom = ElsBatch::new(
        batch.baseline.clone(),
        vec![mu_m; batch.n()],
        batch.scale.clone(),
        batch.shape.clone(),
        None,
    )?;
    Ok(BoundValue { value: sf_second_indep(&hom, x)?, supported: issues.is_empty(), issues })
}
