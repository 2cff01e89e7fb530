//! Orlicz machinery on intervals: step functions, rearrangements, Luxemburg
//! and Marcinkiewicz norms, and the Hardy operators `H_{α,β}`.

mod hardy;
mod probe;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::geometric;
use crate::young::YoungFunction;

pub use hardy::{hardy_apply, hardy_at, hardy_inf_apply, integral_condition_check, IntegralCheckOptions};
pub use probe::{norm_probe, trial_family, weak_vs_strong_probe, ProbeOptions, ProbeReport, ProbeVerdict, TargetNorm, TrialResult, WeakStrongReport, STRUCTURED_TRIALS};

/// A nonnegative step function on `(0, L)`: value `values[i]` on
/// `(edges[i], edges[i + 1])`, with `edges[0] = 0` and `edges.last() = L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    edges: Vec<f64>,
    values: Vec<f64>,
    monotone_nonincreasing: bool,
}

/// `[0]` followed by a geometric partition of `[lo, l]`.
pub fn geometric_edges(lo: f64, l: f64, per_decade: usize) -> Vec<f64> {
    let mut e = vec![0.0];
    e.extend(geometric(lo, l, per_decade));
    e
}

impl SampledFunction {
    pub fn new(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if edges.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::InvalidParameter("need one more edge than values".into()));
        }
        if edges[0] != 0.0 {
            return Err(Error::InvalidParameter("first edge must be 0".into()));
        }
        if !edges.windows(2).all(|w| w[1] > w[0]) || !edges.last().unwrap().is_finite() {
            return Err(Error::InvalidParameter("edges must be finite and strictly increasing".into()));
        }
        if !values.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(Error::InvalidParameter("values must be finite and nonnegative".into()));
        }
        let monotone_nonincreasing = values.windows(2).all(|w| w[1] <= w[0]);
        Ok(SampledFunction { edges, values, monotone_nonincreasing })
    }

    /// Cell values taken from `f` at the geometric midpoint of each cell; the
    /// first cell `(0, e_1)` uses `f(e_1 / sqrt(e_2 / e_1))`.
    pub fn from_fn(edges: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = edges.len() - 1;
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let x = if i == 0 {
                let r = if edges.len() > 2 { edges[2] / edges[1] } else { 4.0 };
                edges[1] / r.sqrt()
            } else {
                (edges[i] * edges[i + 1]).sqrt()
            };
            values.push(f(x));
        }
        Self::new(edges, values)
    }

    /// `c χ_(0, r)` on `(0, l)`.
    pub fn indicator(r: f64, l: f64, c: f64) -> Result<Self> {
        if r >= l {
            Self::new(vec![0.0, l], vec![c])
        } else {
            Self::new(vec![0.0, r, l], vec![c, 0.0])
        }
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Length `L` of the underlying interval.
    pub fn length(&self) -> f64 {
        *self.edges.last().unwrap()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.monotone_nonincreasing
    }

    pub fn measure(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < self.length()) {
            return 0.0;
        }
        let i = self.edges.partition_point(|&e| e <= x) - 1;
        self.values[i]
    }

    pub fn integral(&self) -> f64 {
        (0..self.len()).map(|i| self.values[i] * self.measure(i)).sum()
    }

    /// `|{f > y}|`.
    pub fn distribution(&self, y: f64) -> f64 {
        (0..self.len()).filter(|&i| self.values[i] > y).map(|i| self.measure(i)).sum()
    }

    /// Same edges, values scaled by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.edges.clone(), self.values.iter().map(|v| v * c).collect())
    }
}

/// Decreasing rearrangement: cells sorted by value, measures preserved.
pub fn rearrange(f: &SampledFunction) -> SampledFunction {
    if f.monotone_nonincreasing {
        return f.clone();
    }
    let mut cells: Vec<(f64, f64)> = (0..f.len()).map(|i| (f.values[i], f.measure(i))).collect();
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut edges = Vec::with_capacity(cells.len() + 1);
    edges.push(0.0);
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(cells.len());
    for (v, m) in cells {
        let next = acc + m;
        if next > acc {
            edges.push(next);
            values.push(v);
            acc = next;
        }
    }
    SampledFunction { edges, values, monotone_nonincreasing: true }
}

/// `f**(s) = (1/s) ∫_0^s f*` at an arbitrary `s`, exact for step functions.
pub fn doublestar_at(fstar: &SampledFunction, s: f64) -> f64 {
    if !(s > 0.0) {
        return fstar.values[0];
    }
    let mut acc = 0.0;
    for i in 0..fstar.len() {
        let (a, b) = (fstar.edges[i], fstar.edges[i + 1]);
        if s <= b {
            acc += fstar.values[i] * (s - a);
            return acc / s;
        }
        acc += fstar.values[i] * (b - a);
    }
    acc / s
}

/// `f**` sampled at the right edge of every cell (its smallest value on the
/// cell, since `f**` is nonincreasing). The input must be nonincreasing.
pub fn doublestar(fstar: &SampledFunction) -> Result<SampledFunction> {
    if !fstar.monotone_nonincreasing {
        return Err(Error::InvalidParameter("doublestar expects a nonincreasing function".into()));
    }
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(fstar.len());
    for i in 0..fstar.len() {
        acc += fstar.values[i] * fstar.measure(i);
        values.push(acc / fstar.edges[i + 1]);
    }
    SampledFunction::new(fstar.edges.clone(), values)
}

fn modular(f: &SampledFunction, a: &YoungFunction, lambda: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..f.len() {
        let v = f.values[i];
        if v > 0.0 {
            acc += a.eval(v / lambda) * f.measure(i);
            if acc.is_infinite() {
                break;
            }
        }
    }
    acc
}

/// `inf{λ : ∫ A(|f|/λ) <= 1}` by bisection in `ln λ`; relative tolerance 1e-13.
pub fn luxemburg_norm(f: &SampledFunction, a: &YoungFunction) -> f64 {
    let vmax = f.values.iter().copied().fold(0.0, f64::max);
    if vmax == 0.0 {
        return 0.0;
    }
    let fits = |l: f64| modular(f, a, l) <= 1.0;
    let (mut lo, mut hi) = (1e-15 * vmax, 1e15 * vmax);
    let mut guard = 0;
    while !fits(hi) {
        lo = hi;
        hi *= 1e15;
        guard += 1;
        if guard > 20 || hi.is_infinite() {
            return f64::INFINITY;
        }
    }
    while fits(lo) {
        hi = lo;
        lo *= 1e-15;
        guard += 1;
        if guard > 20 || lo == 0.0 {
            return hi;
        }
    }
    while hi / lo - 1.0 > 1e-13 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `sup_s f**(s) / A^{-1}(1/s)` over the right cell edges of `f*`.
pub fn marcinkiewicz_norm(f: &SampledFunction, a: &YoungFunction) -> f64 {
    let fs = rearrange(f);
    let mut acc = 0.0;
    let mut best = 0.0f64;
    for i in 0..fs.len() {
        acc += fs.values[i] * fs.measure(i);
        let s = fs.edges[i + 1];
        let d = a.inverse(1.0 / s);
        if acc > 0.0 {
            best = best.max(acc / s / d);
        }
    }
    best
}

/// `sup_s f*(s) / A^{-1}(1/s)` over the right cell edges; a lower bound for the
/// Marcinkiewicz norm.
pub fn weak_type_sup(f: &SampledFunction, a: &YoungFunction) -> f64 {
    let fs = rearrange(f);
    (0..fs.len())
        .filter(|&i| fs.values[i] > 0.0)
        .map(|i| fs.values[i] / a.inverse(1.0 / fs.edges[i + 1]))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests;
