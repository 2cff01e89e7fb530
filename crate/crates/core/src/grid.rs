//! Log-spaced grids, regime windows and the small fitting helpers shared by
//! the numeric decisions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric grid `min · 10^(i / per_decade)`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    pub min: f64,
    pub max: f64,
    pub per_decade: usize,
}

impl Default for LogGrid {
    fn default() -> Self {
        LogGrid::DEFAULT
    }
}

impl LogGrid {
    pub const DEFAULT: LogGrid = LogGrid { min: 1e-12, max: 1e12, per_decade: 64 };

    pub fn new(min: f64, max: f64, per_decade: usize) -> Result<Self> {
        if !(min > 0.0 && max > min && max.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid bounds [{min}, {max}]")));
        }
        if per_decade == 0 {
            return Err(Error::InvalidParameter("per_decade must be positive".into()));
        }
        Ok(LogGrid { min, max, per_decade })
    }

    pub fn decades(&self) -> f64 {
        (self.max / self.min).log10()
    }

    /// Ratio between consecutive points.
    pub fn step_ratio(&self) -> f64 {
        10f64.powf(1.0 / self.per_decade as f64)
    }

    pub fn len(&self) -> usize {
        (self.decades() * self.per_decade as f64).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        geometric(self.min, self.max, self.per_decade)
    }

    /// Same density, different bounds.
    pub fn with_bounds(&self, min: f64, max: f64) -> LogGrid {
        LogGrid { min, max, per_decade: self.per_decade }
    }
}

/// Points `lo · 10^(i/per_decade)` up to `hi`; the last point is exactly `hi`.
pub fn geometric(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let l0 = lo.log10();
    let l1 = hi.log10();
    let n = ((l1 - l0) * per_decade as f64).round().max(1.0) as usize;
    let mut out = Vec::with_capacity(n + 1);
    out.push(lo);
    for i in 1..n {
        out.push(10f64.powf(l0 + (l1 - l0) * i as f64 / n as f64));
    }
    out.push(hi);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    NearZero,
    NearInfinity,
    Global,
}

/// A regime tag together with the sampling window that stands in for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    pub lo: f64,
    pub hi: f64,
    pub per_decade: usize,
}

impl Regime {
    pub fn near_zero() -> Self {
        Regime { kind: RegimeKind::NearZero, lo: 1e-12, hi: 1e-2, per_decade: 64 }
    }

    pub fn near_infinity() -> Self {
        Regime { kind: RegimeKind::NearInfinity, lo: 1e2, hi: 1e12, per_decade: 64 }
    }

    pub fn global() -> Self {
        Regime { kind: RegimeKind::Global, lo: 1e-12, hi: 1e12, per_decade: 64 }
    }

    pub fn new(kind: RegimeKind, lo: f64, hi: f64, per_decade: usize) -> Result<Self> {
        let ok = lo > 0.0
            && lo < hi
            && hi.is_finite()
            && per_decade > 0
            && match kind {
                RegimeKind::NearZero => hi <= 1.0,
                RegimeKind::NearInfinity => lo >= 1.0,
                RegimeKind::Global => true,
            };
        if !ok {
            return Err(Error::InvalidParameter(format!("window [{lo}, {hi}] for {kind:?}")));
        }
        Ok(Regime { kind, lo, hi, per_decade })
    }

    pub fn from_grid(kind: RegimeKind, grid: &LogGrid) -> Self {
        match kind {
            RegimeKind::NearZero => Regime { kind, lo: grid.min, hi: 1e-2f64.max(grid.min * 10.0), per_decade: grid.per_decade },
            RegimeKind::NearInfinity => Regime { kind, lo: 1e2f64.min(grid.max / 10.0), hi: grid.max, per_decade: grid.per_decade },
            RegimeKind::Global => Regime { kind, lo: grid.min, hi: grid.max, per_decade: grid.per_decade },
        }
    }

    pub fn samples(&self) -> Vec<f64> {
        geometric(self.lo, self.hi, self.per_decade)
    }
}

/// Least-squares slope of `ln v` against `ln t`.
pub fn loglog_slope(ts: &[f64], vs: &[f64]) -> f64 {
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    linear_fit(&xs, &ys).1
}

/// Ordinary least squares `y = a + b x`; returns `(a, b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - b * mx, b)
}

/// Fit `y = a + b / x` and return `(a, b)`; used to extrapolate quantities whose
/// leading correction is `O(1 / ln t)`.
pub fn fit_inverse(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let inv: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
    linear_fit(&inv, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = LogGrid::DEFAULT;
        let p = g.points();
        assert_eq!(p.len(), 24 * 64 + 1);
        assert_eq!(p.len(), g.len());
        assert_eq!(p[0], 1e-12);
        assert_eq!(*p.last().unwrap(), 1e12);
        assert!(p.windows(2).all(|w| w[1] > w[0]));
        assert!((p[64] - 1e-11).abs() < 1e-24);
    }

    #[test]
    fn regime_windows_validated() {
        assert!(Regime::new(RegimeKind::NearZero, 1e-6, 2.0, 64).is_err());
        assert!(Regime::new(RegimeKind::NearInfinity, 0.5, 10.0, 64).is_err());
        assert!(Regime::new(RegimeKind::Global, 1.0, 1.0, 64).is_err());
        let r = Regime::near_infinity();
        assert_eq!(r.samples().len(), 641);
    }

    #[test]
    fn fits_recover_exact_models() {
        let ts: Vec<f64> = geometric(1.0, 1e6, 8);
        let vs: Vec<f64> = ts.iter().map(|t| 3.0 * t.powf(1.7)).collect();
        assert!((loglog_slope(&ts, &vs) - 1.7).abs() < 1e-12);
        let xs = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 - 0.25 / x).collect();
        let (a, b) = fit_inverse(&xs, &ys);
        assert!((a - 1.5).abs() < 1e-12 && (b + 0.25).abs() < 1e-12);
    }
}
