//! Grids, root finding, monotone interpolation and discrete shape tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Evaluation grid description: `n` points on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Grid {
    pub fn linear(lo: f64, hi: f64, n: usize) -> Self {
        Grid { lo, hi, n, spacing: Spacing::Linear }
    }

    pub fn log(lo: f64, hi: f64, n: usize) -> Self {
        Grid { lo, hi, n, spacing: Spacing::Log }
    }

    /// Parses `lo:hi:n`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!("grid '{s}' is not lo:hi:n")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad grid bound '{p}'")))
        };
        let lo = num(parts[0])?;
        let hi = num(parts[1])?;
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad grid size '{}'", parts[2])))?;
        let g = Grid::linear(lo, hi, n);
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must satisfy lo < hi, got {}:{}",
                self.lo, self.hi
            )));
        }
        if self.n < 2 {
            return Err(Error::GridTooShort { needed: 2, got: self.n });
        }
        if self.spacing == Spacing::Log && self.lo <= 0.0 {
            return Err(Error::InvalidParameter("log grid needs lo > 0".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.lo, self.hi, self.n),
            Spacing::Log => logspace(self.lo, self.hi, self.n),
        }
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    v[n - 1] = hi;
    v
}

/// Geometrically spaced points on `[lo, hi]`, `lo > 0`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut v: Vec<f64> = linspace(a, b, n).into_iter().map(f64::exp).collect();
    v[0] = lo;
    v[n - 1] = hi;
    v
}

/// `origin + d` for `d` geometric between `first` and `last` offsets.
pub fn offset_logspace(origin: f64, first: f64, last: f64, n: usize) -> Vec<f64> {
    logspace(first, last, n).into_iter().map(|d| origin + d).collect()
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * (1.0 + mid.abs()) {
            return mid;
        }
        let fm = f(mid);
        if (fm > 0.0) == (flo > 0.0) && fm != 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn central_difference<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central difference with one Richardson extrapolation step.
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d1 = central_difference(f, x, h);
    let d2 = central_difference(f, x, h / 2.0);
    (4.0 * d2 - d1) / 3.0
}

/// Piecewise cubic Hermite interpolant with shape-preserving (Fritsch-Butland) slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch { left: xs.len(), right: ys.len() });
        }
        let n = xs.len();
        if n < 2 {
            return Err(Error::InvalidParameter("interpolation needs at least 2 nodes".into()));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("interpolation nodes must be finite".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("interpolation abscissae must increase".into()));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut ds = vec![0.0; n];
        if n == 2 {
            ds[0] = del[0];
            ds[1] = del[0];
        } else {
            for k in 1..n - 1 {
                if del[k - 1] * del[k] <= 0.0 {
                    ds[k] = 0.0;
                } else {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    ds[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
                }
            }
            ds[0] = end_slope(h[0], h[1], del[0], del[1]);
            ds[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        Ok(MonotoneCubic { xs, ys, ds })
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn y_last(&self) -> f64 {
        self.ys[self.ys.len() - 1]
    }

    pub fn slope_last(&self) -> f64 {
        self.ds[self.ds.len() - 1]
    }

    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    fn interval(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v <= x);
        k.saturating_sub(1).min(self.xs.len() - 2)
    }

    /// Value, first and second derivative at `x` (clamped to the node range).
    pub fn eval_all(&self, x: f64) -> (f64, f64, f64) {
        let x = x.clamp(self.x_min(), self.x_max());
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let (y0, y1, d0, d1) = (self.ys[k], self.ys[k + 1], self.ds[k], self.ds[k + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * h * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * d1;
        let dv = ((6.0 * t2 - 6.0 * t) * y0 + (-6.0 * t2 + 6.0 * t) * y1) / h
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (3.0 * t2 - 2.0 * t) * d1;
        let ddv = ((12.0 * t - 6.0) * y0 + (-12.0 * t + 6.0) * y1) / (h * h)
            + ((6.0 * t - 4.0) * d0 + (6.0 * t - 2.0) * d1) / h;
        (v, dv, ddv)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_all(x).0
    }

    /// Inverse of an increasing interpolant on `[y_first, y_last]`.
    pub fn inverse_increasing(&self, y: f64) -> f64 {
        if y <= self.ys[0] {
            return self.xs[0];
        }
        if y >= self.y_last() {
            return self.x_max();
        }
        let k = self.ys.partition_point(|&v| v <= y).saturating_sub(1);
        bisect(|x| self.eval(x) - y, self.xs[k], self.xs[k + 1], 1e-15)
    }
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

fn tol(slack: f64, scale: f64) -> f64 {
    slack * (1.0 + scale.abs())
}

/// Index of the first `i` with `ys[i+1] > ys[i]` beyond slack, i.e. where non-increase fails.
pub fn first_increase(ys: &[f64], slack: f64) -> Option<usize> {
    ys.windows(2)
        .position(|w| w[1] - w[0] > tol(slack, w[0].abs().max(w[1].abs())) || w[1].is_nan())
        .map(|i| i + 1)
}

/// Index of the first `i` with `ys[i+1] < ys[i]` beyond slack.
pub fn first_decrease(ys: &[f64], slack: f64) -> Option<usize> {
    ys.windows(2)
        .position(|w| w[0] - w[1] > tol(slack, w[0].abs().max(w[1].abs())) || w[1].is_nan())
        .map(|i| i + 1)
}

fn chord_gap(xs: &[f64], ys: &[f64], i: usize) -> (f64, f64) {
    let (x0, x1, x2) = (xs[i - 1], xs[i], xs[i + 1]);
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let t = (x1 - x0) / (x2 - x0);
    let chord = y0 + t * (y2 - y0);
    let scale = y0.abs().max(y1.abs()).max(y2.abs());
    (y1 - chord, scale)
}

/// First interior index where `ys` lies above the chord of its neighbours.
pub fn first_nonconvex(xs: &[f64], ys: &[f64], slack: f64) -> Option<usize> {
    (1..xs.len().saturating_sub(1)).find(|&i| {
        let (gap, scale) = chord_gap(xs, ys, i);
        gap > tol(slack, scale) || gap.is_nan()
    })
}

/// First interior index where `ys` lies below the chord of its neighbours.
pub fn first_nonconcave(xs: &[f64], ys: &[f64], slack: f64) -> Option<usize> {
    (1..xs.len().saturating_sub(1)).find(|&i| {
        let (gap, scale) = chord_gap(xs, ys, i);
        -gap > tol(slack, scale) || gap.is_nan()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parse_roundtrip() {
        let g = Grid::parse("1:2:11").unwrap();
        let p = g.points();
        assert_eq!(p.len(), 11);
        assert_eq!(p[0], 1.0);
        assert_eq!(p[10], 2.0);
        assert!(Grid::parse("2:1:5").is_err());
        assert!(Grid::parse("1:2").is_err());
        assert!(Grid::parse("a:2:3").is_err());
    }

    #[test]
    fn logspace_endpoints_and_ratio() {
        let v = logspace(1e-3, 10.0, 5);
        assert_eq!(v[0], 1e-3);
        assert_eq!(v[4], 10.0);
        let r0 = v[1] / v[0];
        let r3 = v[4] / v[3];
        assert!((r0 - r3).abs() < 1e-10);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn richardson_beats_central() {
        let f = |x: f64| x.sin();
        let h = 1e-2;
        let e1 = (central_difference(&f, 1.0, h) - 1f64.cos()).abs();
        let e2 = (richardson_derivative(&f, 1.0, h) - 1f64.cos()).abs();
        assert!(e2 < e1 / 100.0);
    }

    #[test]
    fn pchip_interpolates_nodes_and_stays_monotone() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| if *x < 5.0 { 0.0 } else { 1.0 + x }).collect();
        let c = MonotoneCubic::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((c.eval(*x) - y).abs() < 1e-12);
        }
        let fine = linspace(0.0, 9.0, 1000);
        let vals: Vec<f64> = fine.iter().map(|&x| c.eval(x)).collect();
        assert_eq!(first_decrease(&vals, 0.0), None);
    }

    #[test]
    fn pchip_accuracy_on_smooth_function() {
        let xs = linspace(0.0, 2.0, 200);
        let ys: Vec<f64> = xs.iter().map(|x| x.exp()).collect();
        let c = MonotoneCubic::new(xs, ys).unwrap();
        let (v, d, _) = c.eval_all(1.2345);
        assert!((v - 1.2345f64.exp()).abs() < 1e-7);
        assert!((d - 1.2345f64.exp()).abs() < 1e-3);
        let x = c.inverse_increasing(3.0);
        assert!((x - 3f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn shape_helpers() {
        let xs = linspace(0.0, 1.0, 50);
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        assert_eq!(first_nonconvex(&xs, &sq, 1e-12), None);
        assert!(first_nonconcave(&xs, &sq, 1e-12).is_some());
        assert_eq!(first_decrease(&sq, 0.0), None);
        assert_eq!(first_increase(&sq, 0.0), Some(1));
        let neg: Vec<f64> = sq.iter().map(|v| -v).collect();
        assert_eq!(first_nonconcave(&xs, &neg, 1e-12), None);
    }
}
