use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{first_decrease, first_increase, linspace};

fn check_args(alpha: f64, t: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain { what: "omega alpha", value: alpha });
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain { what: "omega t", value: t });
    }
    Ok(())
}

/// `ω(α, t) = α (1 - t) t^α / (1 - t^α)` for `α > 0`, `0 < t < 1`. `ω(1, t) = t`.
pub fn omega(alpha: f64, t: f64) -> Result<f64> {
    Ok(t * omega_kernel(alpha, t)?)
}

/// `α (1 - t) t^{α-1} / (1 - t^α)`: the factor that appears when differentiating
/// `1 - F^α` against `1 - F`. Decreasing in `α`; decreasing in `t` for `α <= 1`,
/// increasing for `α >= 1`; identically 1 at `α = 1`.
pub fn omega_kernel(alpha: f64, t: f64) -> Result<f64> {
    check_args(alpha, t)?;
    let lt = t.ln();
    let one_minus = -(alpha * lt).exp_m1();
    Ok(alpha * (1.0 - t) * ((alpha - 1.0) * lt).exp() / one_minus)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaClaims {
    /// Decreasing in `α` for every sampled `t`.
    pub decreasing_in_alpha: bool,
    /// Decreasing in `t` for every sampled `α <= 1`.
    pub decreasing_in_t_below_one: bool,
    /// Increasing in `t` for every sampled `α >= 1`.
    pub increasing_in_t_above_one: bool,
    /// Descriptions of failures.
    pub witnesses: Vec<String>,
}

impl LemmaClaims {
    pub fn all(&self) -> bool {
        self.decreasing_in_alpha && self.decreasing_in_t_below_one && self.increasing_in_t_above_one
    }
}

/// Checks the three monotonicity claims of `f` on `t_points` interior points of `(0, 1)`
/// and the supplied `α` values.
pub fn lemma_claims(f: fn(f64, f64) -> Result<f64>, alphas: &[f64], t_points: usize) -> Result<LemmaClaims> {
    let ts: Vec<f64> = linspace(0.0, 1.0, t_points + 2)[1..=t_points].to_vec();
    let mut alphas = alphas.to_vec();
    alphas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let slack = 1e-12;
    let mut witnesses = Vec::new();

    let mut dec_alpha = true;
    for &t in &ts {
        let vals = alphas.iter().map(|&a| f(a, t)).collect::<Result<Vec<_>>>()?;
        if let Some(i) = first_increase(&vals, slack) {
            dec_alpha = false;
            witnesses.push(format!("increase in α between {} and {} at t = {t}", alphas[i - 1], alphas[i]));
            break;
        }
    }
    let mut dec_t = true;
    let mut inc_t = true;
    for &a in &alphas {
        let vals = ts.iter().map(|&t| f(a, t)).collect::<Result<Vec<_>>>()?;
        if a <= 1.0 {
            if let Some(i) = first_increase(&vals, slack) {
                dec_t = false;
                witnesses.push(format!("α = {a}: increase in t at t = {}", ts[i]));
            }
        }
        if a >= 1.0 {
            if let Some(i) = first_decrease(&vals, slack) {
                inc_t = false;
                witnesses.push(format!("α = {a}: decrease in t at t = {}", ts[i]));
            }
        }
    }
    Ok(LemmaClaims {
        decreasing_in_alpha: dec_alpha,
        decreasing_in_t_below_one: dec_t,
        increasing_in_t_above_one: inc_t,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((omega(0.5, 0.25).unwrap() - 0.375).abs() < 1e-15);
        assert!((omega(1.0, 0.25).unwrap() - 0.25).abs() < 1e-15);
        assert!((omega(2.0, 0.25).unwrap() - 0.1).abs() < 1e-15);
        assert!((omega(1.0, 0.7).unwrap() - 0.7).abs() < 1e-15);
        assert!((omega_kernel(1.0, 0.3).unwrap() - 1.0).abs() < 1e-15);
        assert!((omega_kernel(0.5, 0.25).unwrap() - 1.5).abs() < 1e-15);
        assert!((omega_kernel(2.0, 0.25).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn boundary_rejected() {
        assert!(omega(1.0, 0.0).is_err());
        assert!(omega(1.0, 1.0).is_err());
        assert!(omega(0.0, 0.5).is_err());
    }

    #[test]
    fn claims_hold_for_kernel() {
        let c = lemma_claims(omega_kernel, &[0.2, 0.5, 1.0, 2.0, 5.0], 64).unwrap();
        assert!(c.all(), "{:?}", c.witnesses);
    }

    #[test]
    fn t_monotonicity_below_one_fails_for_extra_factor() {
        let c = lemma_claims(omega, &[0.2, 0.5, 1.0, 2.0, 5.0], 64).unwrap();
        assert!(c.decreasing_in_alpha);
        assert!(c.increasing_in_t_above_one);
        assert!(!c.decreasing_in_t_below_one);
    }
}
