//! `H_{α,β} f(s) = ∫_{s^β}^{L} f(r) r^{α-1} dr` on step functions, and the
//! dual integral condition for the operator on `(0, ∞)`.

use super::SampledFunction;
use crate::construct::{build_b, ConstructOptions, HardyParams, Variant};
use crate::error::{Error, Result};
use crate::grid::{geometric, LogGrid};
use crate::young::decide::{classify, Bound};
use crate::young::{Decision, Diagnostics, YoungFunction};

/// `∫_{e_k}^{L} f(r) r^{α-1} dr` for every edge `e_k`.
fn tail_sums(f: &SampledFunction, alpha: f64) -> Vec<f64> {
    let e = f.edges();
    let v = f.values();
    let n = v.len();
    let mut t = vec![0.0; n + 1];
    for k in (0..n).rev() {
        t[k] = t[k + 1] + v[k] * (e[k + 1].powf(alpha) - e[k].powf(alpha)) / alpha;
    }
    t
}

fn apply(f: &SampledFunction, p: &HardyParams) -> Result<SampledFunction> {
    let (alpha, beta) = (p.alpha, p.beta);
    let e = f.edges();
    let v = f.values();
    let t = tail_sums(f, alpha);
    let sig: Vec<f64> = e.iter().map(|x| x.powf(1.0 / beta)).collect();
    let ab = alpha * beta;
    let mut out = Vec::with_capacity(v.len());
    for k in 0..v.len() {
        let (s0, s1) = (sig[k], sig[k + 1]);
        // mean of s^{αβ} over the cell
        let mean = (s1.powf(ab + 1.0) - s0.powf(ab + 1.0)) / ((ab + 1.0) * (s1 - s0));
        let val = t[k + 1] + v[k] * (e[k + 1].powf(alpha) - mean) / alpha;
        out.push(val.max(t[k + 1]));
    }
    SampledFunction::new(sig, out)
}

/// `H_{α,β} f` for `f` on `(0, 1)`. Cell `k` of the result is
/// `(e_k^{1/β}, e_{k+1}^{1/β})` and holds the exact cell average of `H f`.
pub fn hardy_apply(f: &SampledFunction, p: &HardyParams) -> Result<SampledFunction> {
    if (f.length() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("hardy_apply expects f on (0, 1), got length {}", f.length())));
    }
    apply(f, p)
}

/// `H^∞_{α,β} f` for `f` supported in `(0, L_max)`, `L_max = f.length()`; the
/// part of `f` beyond `L_max` is taken to be zero.
pub fn hardy_inf_apply(f: &SampledFunction, p: &HardyParams) -> Result<SampledFunction> {
    apply(f, p)
}

/// Exact `H f(s)` with upper limit `f.length()`.
pub fn hardy_at(f: &SampledFunction, p: &HardyParams, s: f64) -> f64 {
    let x = s.powf(p.beta);
    if x >= f.length() {
        return 0.0;
    }
    let e = f.edges();
    let t = tail_sums(f, p.alpha);
    let k = e.partition_point(|&v| v <= x) - 1;
    t[k + 1] + f.values()[k] * (e[k + 1].powf(p.alpha) - x.powf(p.alpha)) / p.alpha
}

#[derive(Debug, Clone, Copy)]
pub struct IntegralCheckOptions {
    pub grid: LogGrid,
    /// `C₂` ranges over `2^k`, `k = 0..=max_log2`.
    pub max_log2: u32,
}

impl Default for IntegralCheckOptions {
    fn default() -> Self {
        IntegralCheckOptions { grid: LogGrid::DEFAULT, max_log2: 40 }
    }
}

/// Condition for `H^∞_{α,β}: L^A(0,∞) -> M^B(0,∞)`:
/// `∫_0^t Ã(s) s^{-κ-1} ds <= conj(B^∞_{α,β})(C₂ t) / t^κ` with `κ = 1/(1-α)`.
///
/// Yes with the smallest `C₂ = 2^k` that works on the grid, provided the ratio
/// of the two sides shows no divergent trend at either end; no if the left
/// side diverges or the ratio grows without bound for the largest `C₂`.
pub fn integral_condition_check(a: &YoungFunction, b: &YoungFunction, p: &HardyParams, opts: &IntegralCheckOptions) -> Result<Decision> {
    let dom = build_b(b, p, Variant::Global, &ConstructOptions::with_grid(opts.grid))?;
    let rhs_fn = dom.b_ab.conjugate();
    let a_conj = a.conjugate();
    let kappa = 1.0 / (1.0 - p.alpha);
    let d = opts.grid.per_decade;
    let ts = geometric(opts.grid.min, opts.grid.max, d);
    let at: Vec<f64> = ts.iter().map(|&s| a_conj.eval(s)).collect();
    let g: Vec<f64> = ts.iter().zip(&at).map(|(&s, &v)| v * s.powf(-kappa)).collect();

    // part of the integral below the grid, from the local exponent of Ã
    let head = if at[0] == 0.0 {
        0.0
    } else if at[1].is_finite() {
        let e0 = (at[1] / at[0]).ln() / (ts[1] / ts[0]).ln();
        if e0 > kappa {
            g[0] / (e0 - kappa)
        } else {
            f64::INFINITY
        }
    } else {
        f64::INFINITY
    };
    let mut lhs = Vec::with_capacity(ts.len());
    lhs.push(head);
    for i in 0..ts.len() - 1 {
        let du = (ts[i + 1] / ts[i]).ln();
        let (x, y) = (g[i], g[i + 1]);
        let cell = if x > 0.0 && y > 0.0 && (x - y).abs() > 1e-12 * x {
            (y - x) / (y / x).ln() * du
        } else {
            0.5 * (x + y) * du
        };
        lhs.push(lhs[i] + cell);
    }

    let rhs = |k: u32| -> Vec<f64> {
        let c = 2f64.powi(k as i32);
        ts.iter().map(|&t| rhs_fn.eval(c * t) / t.powf(kappa)).collect()
    };
    if let Some(i) = lhs.iter().position(|v| !v.is_finite()) {
        let diag = Diagnostics {
            ratio_min: f64::INFINITY,
            ratio_max: f64::INFINITY,
            ratio_median: f64::INFINITY,
            note: format!("left integral diverges (first at t = {:e})", ts[i]),
        };
        return Ok(Decision::no(diag));
    }
    let top = rhs(opts.max_log2);
    let ratio: Vec<f64> = lhs.iter().zip(&top).map(|(l, r)| l / r).collect();
    let split = ts.partition_point(|&t| t < 1.0);
    let lo_t: Vec<f64> = ts[..split].iter().rev().copied().collect();
    let lo_r: Vec<f64> = ratio[..split].iter().rev().copied().collect();
    let trend = match (classify(&lo_t, &lo_r, d), classify(&ts[split..], &ratio[split..], d)) {
        (Bound::Unbounded(w), _) => Some(format!("ratio diverges as t -> 0: {w}")),
        (_, Bound::Unbounded(w)) => Some(format!("ratio diverges as t -> inf: {w}")),
        _ => None,
    };
    let finite: Vec<f64> = ratio.iter().copied().filter(|r| r.is_finite()).collect();
    let mut sorted = finite.clone();
    sorted.sort_by(f64::total_cmp);
    let diag = |note: String| Diagnostics {
        ratio_min: sorted.first().copied().unwrap_or(f64::NAN),
        ratio_max: sorted.last().copied().unwrap_or(f64::NAN),
        ratio_median: sorted.get(sorted.len() / 2).copied().unwrap_or(f64::NAN),
        note,
    };
    if let Some(w) = trend {
        return Ok(Decision::no(diag(format!("{w} (C2 = 2^{})", opts.max_log2))));
    }
    for k in 0..=opts.max_log2 {
        let r = rhs(k);
        if lhs.iter().zip(&r).all(|(l, r)| *l <= r * (1.0 + 1e-9)) {
            let c = 2f64.powi(k as i32);
            return Ok(Decision::yes(c, Some(opts.grid.min), diag(format!("holds on the grid with C2 = {c}"))));
        }
    }
    Ok(Decision::indeterminate(diag(format!("bounded ratio but no C2 <= 2^{} suffices", opts.max_log2))))
}
