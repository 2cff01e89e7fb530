//! The optimal-domain constructions `G_{α,β}` and `B_{α,β}`, their global
//! variants, the inf-removal shortcut and the whole-space gluing.
//!
//! With `φ(s) = B^{-1}(s^{1/β}) s^{α-1}`:
//!
//! * finite window: `G(t) = t B^{-1}(1)` on `[0, 1]`, `t inf_{1<=s<=t} φ(s)` beyond;
//! * global: `G(t) = t inf_{0<s<=t} φ(s)` for all `t > 0`;
//!
//! and `B_{α,β}(t) = ∫_0^t G^{-1}(s)/s ds`.

use serde::Serialize;

use crate::boyd::{lower_index, Scope};
use crate::error::{Error, Result};
use crate::grid::{geometric, LogGrid, Regime, RegimeKind};
use crate::young::decide::{classify, Bound};
use crate::young::{Asymptote, Decision, Diagnostics, Meta, Sampled, Tail, YoungFunction};

/// Parameters of the Hardy operator `H_{α,β}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyParams {
    pub alpha: f64,
    pub beta: f64,
}

impl HardyParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in (0, 1)")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
        }
        if alpha + 1.0 / beta < 1.0 - 1e-12 {
            return Err(Error::InvalidParameter(format!("alpha + 1/beta = {} must be >= 1", alpha + 1.0 / beta)));
        }
        Ok(HardyParams { alpha, beta })
    }

    /// `α = m/n`, `β = n/γ`.
    pub fn sobolev(n: u32, m: u32, gamma: f64) -> Result<Self> {
        Self::new(m as f64 / n as f64, n as f64 / gamma)
    }

    /// `1 / (β (1 - α))`, the critical lower index of `B` and the exponent in
    /// the near-zero condition.
    pub fn threshold(&self) -> f64 {
        1.0 / (self.beta * (1.0 - self.alpha))
    }

    /// Strictly above the threshold, ignoring rounding in `α = m/n`.
    pub fn above_threshold(&self, index: f64) -> bool {
        index > self.threshold() * (1.0 + 1e-12)
    }

    /// Index arithmetic `1/I_{B_{α,β}} = α + 1/(β I_B)`, with `1/inf = 0`.
    pub fn transformed_index(&self, index: f64) -> f64 {
        1.0 / (self.alpha + 1.0 / (self.beta * index))
    }

    fn phi(&self, b: &YoungFunction, s: f64) -> f64 {
        b.inverse(s.powf(1.0 / self.beta)) * s.powf(self.alpha - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    FiniteWindow,
    Global,
}

/// `G_{α,β}` on a geometric knot set, interpolated linearly in log-log
/// coordinates, with power-law continuations past both ends.
#[derive(Debug, Clone)]
pub struct GFunction {
    taus: Vec<f64>,
    gs: Vec<f64>,
    head: f64,
    tail: f64,
}

fn loglog_exponent(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    (y1 / y0).ln() / (x1 / x0).ln()
}

/// Log-log interpolation through increasing knots `(xs, ys)`.
fn interp(xs: &[f64], ys: &[f64], head: f64, tail: f64, x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0] * (x / xs[0]).powf(head);
    }
    if x >= xs[n - 1] {
        return ys[n - 1] * (x / xs[n - 1]).powf(tail);
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    if x == xs[i] {
        return ys[i];
    }
    let e = loglog_exponent(xs[i], xs[i + 1], ys[i], ys[i + 1]);
    ys[i] * (x / xs[i]).powf(e)
}

impl GFunction {
    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        interp(&self.taus, &self.gs, self.head, self.tail, t)
    }

    /// `G^{-1}`; `G` is continuous and strictly increasing, so this is an
    /// ordinary inverse.
    pub fn inverse(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        interp(&self.gs, &self.taus, 1.0 / self.head, 1.0 / self.tail, x)
    }

    /// Knots `(t_k, G(t_k))`.
    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.taus, &self.gs)
    }
}

/// Result of `build_B`.
#[derive(Debug, Clone)]
pub struct ConstructedDomain {
    pub b_ab: YoungFunction,
    pub g: GFunction,
    pub variant: Variant,
    pub params: HardyParams,
    /// The inf in `G` is removable (the lower-index condition holds exactly),
    /// so asymptotics and indices follow from `B^{-1}(t^{1/β}) t^α`.
    pub shortcut_used: bool,
    pub asymptote: Option<Asymptote>,
    pub notes: Vec<String>,
}

/// Numerical settings for the constructions.
#[derive(Debug, Clone, Copy)]
pub struct ConstructOptions {
    pub grid: LogGrid,
    /// Knots are generated until `G` exceeds `grid.max * headroom`.
    pub headroom: f64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions { grid: LogGrid::DEFAULT, headroom: 1e6 }
    }
}

impl ConstructOptions {
    pub fn with_grid(grid: LogGrid) -> Self {
        ConstructOptions { grid, ..Default::default() }
    }
}

const TAU_MAX: f64 = 1e300;
const TAU_MIN: f64 = 1e-300;

fn golden_min(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..60 {
        if f1 > f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Running infimum of `φ` over the knots `taus` (increasing), starting from
/// `m0`, with a golden-section refinement inside each cell pair that brackets
/// a discrete local minimum.
fn running_inf(p: &HardyParams, b: &YoungFunction, taus: &[f64], phis: &[f64], m0: f64) -> Vec<f64> {
    let n = taus.len();
    let mut refined: Vec<(f64, f64)> = Vec::new();
    for k in 1..n.saturating_sub(1) {
        let (l, c, r) = (phis[k - 1], phis[k], phis[k + 1]);
        if l >= c && c <= r && (c < l || c < r) {
            let f = |u: f64| p.phi(b, u.exp());
            let (u, v) = golden_min(&f, taus[k - 1].ln(), taus[k + 1].ln());
            if v < c {
                refined.push((u.exp(), v));
            }
        }
    }
    let mut ms = Vec::with_capacity(n);
    let mut m = m0;
    let mut j = 0;
    for k in 0..n {
        while j < refined.len() && refined[j].0 <= taus[k] {
            m = m.min(refined[j].1);
            j += 1;
        }
        m = m.min(phis[k]);
        ms.push(m);
    }
    ms
}

/// Ten significant digits, trailing zeros dropped.
fn short(x: f64) -> String {
    let s = format!("{x:.10}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Reversed near-zero condition on `B`: `inf_{0<t<1} t^{1/(β(1-α))} / B(t) > 0`,
/// i.e. `B(t) <= C t^{1/(β(1-α))}` near zero. This is what keeps the global
/// `G` positive.
pub fn near_zero_condition(b: &YoungFunction, p: &HardyParams, grid: &LogGrid) -> Decision {
    let thr = p.threshold();
    let shown = short(thr);
    let hi = 1e-2f64.min(grid.max);
    let reg = Regime { kind: RegimeKind::NearZero, lo: grid.min, hi, per_decade: grid.per_decade };
    let ts = reg.samples();
    let ratio: Vec<f64> = ts.iter().map(|&t| b.eval(t) / t.powf(thr)).collect();
    let rmax = ratio.iter().copied().fold(0.0, f64::max);
    let diag = Diagnostics {
        ratio_min: ratio.iter().copied().fold(f64::INFINITY, f64::min),
        ratio_max: rmax,
        ratio_median: ratio[ratio.len() / 2],
        note: format!("B(t) / t^{shown} on [{:e}, {hi:e}]", grid.min),
    };
    if rmax == 0.0 {
        return Decision::yes(0.0, Some(hi), Diagnostics { note: format!("{}: B vanishes near zero", diag.note), ..diag });
    }
    if !(1.0 / rmax > 1e-12) {
        return Decision::no(Diagnostics { note: format!("{}: t^{shown}/B(t) drops below 1e-12", diag.note), ..diag });
    }
    let rt: Vec<f64> = ts.iter().rev().copied().collect();
    let rv: Vec<f64> = ratio.iter().rev().copied().collect();
    match classify(&rt, &rv, reg.per_decade) {
        Bound::Unbounded(w) => Decision::no(Diagnostics { note: format!("{}: t^{shown}/B(t) vanishes as t -> 0 ({w})", diag.note), ..diag }),
        Bound::Bounded => Decision::yes(rmax * (1.0 + 1e-9), Some(hi), diag),
        Bound::Unclear(w) => Decision::indeterminate(Diagnostics { note: format!("{}: {w}", diag.note), ..diag }),
    }
}

/// `G_{α,β}` for `B`.
pub fn build_g(b: &YoungFunction, p: &HardyParams, variant: Variant, opts: &ConstructOptions) -> Result<GFunction> {
    let d = opts.grid.per_decade;
    let ratio = 10f64.powf(1.0 / d as f64);
    let x_hi = opts.grid.max * opts.headroom;
    let phi = |s: f64| p.phi(b, s);
    match variant {
        Variant::FiniteWindow => {
            let b1 = b.inverse(1.0);
            let mut taus = vec![1.0];
            let mut phis = vec![phi(1.0)];
            let mut lowest = phis[0];
            // one extra decade so the refined (smaller) G still reaches x_hi
            while taus.last().unwrap() * lowest < 10.0 * x_hi {
                let t = taus.last().unwrap() * ratio;
                if t > TAU_MAX {
                    return Err(Error::Degenerate(format!("G for {} does not reach {x_hi:e}", b.label())));
                }
                let v = phi(t);
                lowest = lowest.min(v);
                taus.push(t);
                phis.push(v);
            }
            let ms = running_inf(p, b, &taus, &phis, f64::INFINITY);
            let gs: Vec<f64> = taus.iter().zip(&ms).map(|(t, m)| t * m).collect();
            debug_assert!((gs[0] - b1).abs() <= 1e-12 * b1);
            let n = gs.len();
            let tail = loglog_exponent(taus[n - 2], taus[n - 1], gs[n - 2], gs[n - 1]);
            Ok(GFunction { taus, gs, head: 1.0, tail })
        }
        Variant::Global => {
            let bz = near_zero_condition(b, p, &opts.grid);
            if !bz.is_yes() {
                return Err(Error::ConditionFailed { condition: "Bzero", detail: bz.diagnostics.note });
            }
            let x_lo = opts.grid.min * 1e-2;
            // inf of φ below the sampled range, from a sparse scan down to TAU_MIN
            let mut lo = 1.0f64;
            let mut taus = vec![1.0];
            let mut phis = vec![phi(1.0)];
            // extend downward until G(t) <= x_lo (with G(t) <= t φ(t))
            while lo * phis[0] > x_lo * 0.1 {
                lo /= ratio;
                if lo < TAU_MIN {
                    return Err(Error::Degenerate(format!("global G for {} does not reach {x_lo:e}", b.label())));
                }
                taus.insert(0, lo);
                phis.insert(0, phi(lo));
            }
            let m0 = geometric(TAU_MIN, lo, 4)
                .into_iter()
                .filter(|&s| s < lo)
                .map(|s| phi(s))
                .fold(f64::INFINITY, f64::min);
            let mut lowest = phis.iter().copied().fold(m0, f64::min);
            while taus.last().unwrap() * lowest < 10.0 * x_hi {
                let t = taus.last().unwrap() * ratio;
                if t > TAU_MAX {
                    return Err(Error::Degenerate(format!("G for {} does not reach {x_hi:e}", b.label())));
                }
                let v = phi(t);
                lowest = lowest.min(v);
                taus.push(t);
                phis.push(v);
            }
            let ms = running_inf(p, b, &taus, &phis, m0);
            if !(ms[0] > 0.0) {
                return Err(Error::ConditionFailed {
                    condition: "Bzero",
                    detail: "the infimum defining the global G vanishes".into(),
                });
            }
            // drop leading knots that are still below the target range
            let gs: Vec<f64> = taus.iter().zip(&ms).map(|(t, m)| t * m).collect();
            let start = gs.partition_point(|&g| g < x_lo).saturating_sub(1);
            let taus = taus[start..].to_vec();
            let gs = gs[start..].to_vec();
            let n = gs.len();
            let head = loglog_exponent(taus[0], taus[1], gs[0], gs[1]);
            let tail = loglog_exponent(taus[n - 2], taus[n - 1], gs[n - 2], gs[n - 1]);
            Ok(GFunction { taus, gs, head, tail })
        }
    }
}

/// `B_{α,β}` (or its global variant) as a tabulated Young function.
pub fn build_b(b: &YoungFunction, p: &HardyParams, variant: Variant, opts: &ConstructOptions) -> Result<ConstructedDomain> {
    let g = build_g(b, p, variant, opts)?;
    let (taus, gs) = g.knots();
    let n = taus.len();
    // G^{-1} is log-log linear on each cell, so ∫ G^{-1}(s)/s ds over a cell is
    // (t_{k+1} - t_k) ln(G_{k+1}/G_k) / ln(t_{k+1}/t_k).
    let y0 = match variant {
        // G^{-1}(s) = s / B^{-1}(1) below G(1) = B^{-1}(1)
        Variant::FiniteWindow => 1.0,
        // power head G^{-1}(s) = t_0 (s/G_0)^{1/h}
        Variant::Global => taus[0] * g.head,
    };
    let mut ys = Vec::with_capacity(n);
    ys.push(y0);
    for k in 0..n - 1 {
        let dt = taus[k + 1] - taus[k];
        let cell = dt * (gs[k + 1] / gs[k]).ln() / (taus[k + 1] / taus[k]).ln();
        ys.push(ys[k] + cell);
    }
    let head = match variant {
        Variant::FiniteWindow => 1.0,
        Variant::Global => 1.0 / g.head,
    };
    // continue with matching slope: derivative at the last knot is t_L / G_L
    let tail_p = (taus[n - 1] / ys[n - 1]).max(1.0);
    let s = Sampled::new(gs.to_vec(), ys, Tail::Power(tail_p))?.with_power_head(head.max(1.0))?.convexified();

    let mut notes = Vec::new();
    let (meta, shortcut_used, asymptote) = exact_meta(b, p, variant, &mut notes);
    let label = match variant {
        Variant::FiniteWindow => format!("B_ab[{}; alpha={:?}, beta={:?}]", b.label(), p.alpha, p.beta),
        Variant::Global => format!("B_ab_inf[{}; alpha={:?}, beta={:?}]", b.label(), p.alpha, p.beta),
    };
    let b_ab = YoungFunction::from_sampled(s, label)?.with_meta(meta);
    Ok(ConstructedDomain { b_ab, g, variant, params: *p, shortcut_used, asymptote, notes })
}

/// Indices and asymptote of `B_{α,β}` from exact data on `B`, where the
/// lower-index condition makes the inf removable.
fn exact_meta(b: &YoungFunction, p: &HardyParams, variant: Variant, notes: &mut Vec<String>) -> (Meta, bool, Option<Asymptote>) {
    let thr = p.threshold();
    let bm = b.meta().indices;
    let mut meta = Meta::default();
    let mut shortcut = false;
    if let (Some(il), Some(iu)) = (bm.lower_local, bm.upper_local) {
        if p.above_threshold(il) {
            meta.indices.lower_local = Some(p.transformed_index(il));
            meta.indices.upper_local = Some(p.transformed_index(iu));
            shortcut = variant == Variant::FiniteWindow;
        }
    }
    if variant == Variant::Global {
        if let (Some(ig), Some(iig)) = (bm.lower_global, bm.upper_global) {
            if p.above_threshold(ig) {
                meta.indices.lower_global = Some(p.transformed_index(ig));
                meta.indices.upper_global = Some(p.transformed_index(iig));
                shortcut = true;
            }
        }
    }
    if shortcut {
        notes.push(format!("lower index of B exceeds {}: inf removable, indices from 1/I = alpha + 1/(beta I_B)", short(thr)));
    }
    let asym = match b.meta().near_infinity {
        Some(a) if bm.lower_local.is_some_and(|il| p.above_threshold(il)) => {
            // B^{-1}(t^{1/β}) t^α, inverted to leading order
            let q = a.power;
            let k = p.beta * q * p.alpha + 1.0;
            Some(Asymptote {
                power: p.beta * q / k,
                log_power: a.log_power * p.beta / k,
                sqrt_log_coef: a.sqrt_log_coef * p.beta * k.powf(-1.5),
            })
        }
        Some(a) if (a.power - thr).abs() <= 1e-12 * thr && a.sqrt_log_coef == 0.0 && a.log_power > 0.0 => {
            notes.push("critical exponent with positive log power: φ decreases like a log".into());
            Some(Asymptote { power: 1.0, log_power: a.log_power * p.beta * (1.0 - p.alpha), sqrt_log_coef: 0.0 })
        }
        Some(a) if a.power < thr || ((a.power - thr).abs() <= 1e-12 * thr && a.sqrt_log_coef == 0.0) => {
            notes.push("φ is eventually nondecreasing: B_ab is linear near infinity".into());
            Some(Asymptote::power(1.0))
        }
        _ if b.t_inf().is_finite() => Some(Asymptote::power(1.0 / p.alpha)),
        _ => None,
    };
    (meta, shortcut, asym)
}

/// Ratio `φ(t) / inf_{1<=s<=t} φ(s)` (or over `0 < s <= t`) on the window,
/// which measures how far the inf is from being removable.
pub fn inf_removal_band(b: &YoungFunction, p: &HardyParams, scope: Scope, opts: &ConstructOptions) -> Result<(Vec<f64>, Vec<f64>)> {
    let variant = match scope {
        Scope::Local => Variant::FiniteWindow,
        Scope::Global => Variant::Global,
    };
    let g = build_g(b, p, variant, opts)?;
    let reg = match scope {
        Scope::Local => Regime::from_grid(RegimeKind::NearInfinity, &opts.grid),
        Scope::Global => Regime::from_grid(RegimeKind::Global, &opts.grid),
    };
    let ts = reg.samples();
    let rs = ts.iter().map(|&t| t * p.phi(b, t) / g.eval(t)).collect();
    Ok((ts, rs))
}

/// The shortcut `t -> B^{-1}(t^{1/β}) t^α` for `B_{α,β}^{-1}`.
#[derive(Debug, Clone)]
pub struct Shortcut {
    pub b: YoungFunction,
    pub params: HardyParams,
    pub lower_index: f64,
    /// Extremes of `shortcut / G` over the window.
    pub band: (f64, f64),
}

impl Shortcut {
    pub fn eval(&self, t: f64) -> f64 {
        self.b.inverse(t.powf(1.0 / self.params.beta)) * t.powf(self.params.alpha)
    }
}

/// Present when the lower index of `B` exceeds `1/(β(1-α))` strictly (by the
/// margin for numeric indices) and the ratio to `G` stays bounded.
pub fn shortcut_inverse(b: &YoungFunction, p: &HardyParams, scope: Scope, margin: f64, opts: &ConstructOptions) -> Option<Shortcut> {
    let thr = p.threshold();
    let (il, unc, exact) = lower_index(b, scope, &opts.grid);
    let holds = if exact { p.above_threshold(il) } else { il - unc > thr * (1.0 + margin) };
    if !holds {
        return None;
    }
    let (ts, rs) = inf_removal_band(b, p, scope, opts).ok()?;
    let bound = classify(&ts, &rs, opts.grid.per_decade);
    if !matches!(bound, Bound::Bounded) {
        return None;
    }
    let lo = rs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rs.iter().copied().fold(0.0, f64::max);
    Some(Shortcut { b: b.clone(), params: *p, lower_index: il, band: (lo, hi) })
}

/// Whole-space Young function: `B` near zero, `inf_behavior` near infinity,
/// joined by an affine bridge.
pub fn glue_for_rn(b: &YoungFunction, inf_behavior: &YoungFunction) -> Result<YoungFunction> {
    YoungFunction::glue(b, inf_behavior, 1.0)
}

/// Extremes of `f/g` over a geometric window; `f` and `g` count as equivalent
/// there when `max/min <= 64`.
pub fn ratio_band(f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, per_decade: usize) -> (f64, f64) {
    let mut mn = f64::INFINITY;
    let mut mx = 0.0f64;
    for t in geometric(lo, hi, per_decade) {
        let r = f(t) / g(t);
        mn = mn.min(r);
        mx = mx.max(r);
    }
    (mn, mx)
}

pub const EQUIVALENCE_BAND: f64 = 64.0;
