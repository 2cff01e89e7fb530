//! Global and local Boyd indices, and the index characterisations of the
//! growth conditions that decide existence of optimal domains.

use serde::Serialize;

use crate::grid::{fit_inverse, geometric, linear_fit, LogGrid, Regime, RegimeKind};
use crate::serde_ext::ext_f64;
use crate::young::decide::{classify, Bound};
use crate::young::{Decision, Diagnostics, YoungFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Global,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexMethod {
    Exact,
    Numeric,
}

/// The four Boyd indices, each with a half-width uncertainty (0 when exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoydIndexReport {
    #[serde(rename = "i_global", serialize_with = "ext_f64")]
    pub lower_global: f64,
    #[serde(rename = "I_global", serialize_with = "ext_f64")]
    pub upper_global: f64,
    #[serde(rename = "i_local", serialize_with = "ext_f64")]
    pub lower_local: f64,
    #[serde(rename = "I_local", serialize_with = "ext_f64")]
    pub upper_local: f64,
    pub method: IndexMethod,
    pub uncertainty: Uncertainty,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Uncertainty {
    #[serde(rename = "i_global", serialize_with = "ext_f64")]
    pub lower_global: f64,
    #[serde(rename = "I_global", serialize_with = "ext_f64")]
    pub upper_global: f64,
    #[serde(rename = "i_local", serialize_with = "ext_f64")]
    pub lower_local: f64,
    #[serde(rename = "I_local", serialize_with = "ext_f64")]
    pub upper_local: f64,
}

impl BoydIndexReport {
    pub fn upper(&self, scope: Scope) -> (f64, f64) {
        match scope {
            Scope::Global => (self.upper_global, self.uncertainty.upper_global),
            Scope::Local => (self.upper_local, self.uncertainty.upper_local),
        }
    }

    pub fn lower(&self, scope: Scope) -> (f64, f64) {
        match scope {
            Scope::Global => (self.lower_global, self.uncertainty.lower_global),
            Scope::Local => (self.lower_local, self.uncertainty.lower_local),
        }
    }
}

/// Grid points plus a sparse extension out to `1e-100` and `1e100`, so that
/// suprema approached only in the limit `s -> 0` or `s -> inf` are captured.
fn sup_points(grid: &LogGrid) -> Vec<f64> {
    let mut pts = Vec::new();
    if grid.min > 1e-100 {
        pts.extend(geometric(1e-100, grid.min, 4).into_iter().filter(|&s| s < grid.min));
    }
    pts.extend(grid.points());
    if grid.max < 1e100 {
        pts.extend(geometric(grid.max, 1e100, 4).into_iter().filter(|&s| s > grid.max));
    }
    pts
}

fn h_over(a: &YoungFunction, t: f64, pts: &[f64], inv: &[f64]) -> f64 {
    if t == 1.0 {
        return 1.0;
    }
    let mut best = 0.0f64;
    for (&s, &d) in pts.iter().zip(inv) {
        let n = a.inverse(s * t);
        if d > 0.0 && d.is_finite() && n.is_finite() {
            best = best.max(n / d);
        }
    }
    best
}

/// `sup_s A^{-1}(s t) / A^{-1}(s)` over the grid points `s` (with a sparse
/// extension far beyond both ends).
pub fn h_global(a: &YoungFunction, t: f64, grid: &LogGrid) -> f64 {
    let pts = sup_points(grid);
    let inv: Vec<f64> = pts.iter().map(|&s| a.inverse(s)).collect();
    h_over(a, t, &pts, &inv)
}

/// Dilation function in the direct form: global sup of `A(st)/A(s)` over the
/// grid, or the local limsup as `s -> inf` over the top three decades,
/// extrapolated in `1 / ln s`.
pub fn hhat(a: &YoungFunction, t: f64, scope: Scope, grid: &LogGrid) -> f64 {
    if t == 1.0 {
        return 1.0;
    }
    match scope {
        Scope::Global => {
            let mut best = 0.0f64;
            for s in grid.points() {
                let d = a.eval(s);
                if d > 0.0 && d.is_finite() {
                    best = best.max(a.eval(s * t) / d);
                }
            }
            best
        }
        Scope::Local => {
            let top = grid.max;
            if a.t_inf() < top * t.max(1.0) {
                return f64::INFINITY;
            }
            let ss = geometric(top * 1e-3, top, grid.per_decade);
            let mut xs = Vec::with_capacity(ss.len());
            let mut ys = Vec::with_capacity(ss.len());
            let mut raw = 0.0f64;
            for &s in &ss {
                let d = a.eval(s);
                let n = a.eval(s * t);
                if !(d > 0.0) {
                    continue;
                }
                let r = n / d;
                if r.is_infinite() {
                    return f64::INFINITY;
                }
                raw = raw.max(r);
                xs.push(s.ln());
                ys.push(r);
            }
            if xs.len() < 4 {
                return raw;
            }
            let (lim, _) = fit_inverse(&xs, &ys);
            if t > 1.0 {
                lim.max(t)
            } else {
                lim.min(t).max(0.0)
            }
        }
    }
}

const GLOBAL_TS: [f64; 4] = [1e3, 1e6, 1e9, 1e12];
const LOCAL_DILATIONS: [f64; 3] = [10.0, 100.0, 1000.0];

/// Fit `y = a + b / ln t` at the given dilations; return `(a, half-width)`.
fn extrapolate(lts: &[f64], ys: &[f64]) -> (f64, f64) {
    if ys.iter().any(|y| y.is_infinite()) {
        return (f64::INFINITY, 0.0);
    }
    let (a, b) = fit_inverse(lts, ys);
    let resid = lts.iter().zip(ys).map(|(x, y)| (y - a - b / x).abs()).fold(0.0, f64::max);
    let last = *ys.last().unwrap();
    (a, (a - last).abs() + resid)
}

/// Local exponent estimates `y(u)` at `u = ln s` against dilation `e^l`. For
/// `t^p (ln t)^b` they equal `p + b ln(1 + l/u) / l` exactly, so that basis is
/// fitted; the half-width is the residual plus the disagreement with the plain
/// `1 / u` extrapolation.
fn extrapolate_log_power(l: f64, us: &[f64], ys: &[f64]) -> (f64, f64) {
    if ys.iter().any(|y| y.is_infinite()) {
        return (f64::INFINITY, 0.0);
    }
    let fs: Vec<f64> = us.iter().map(|u| (l / u).ln_1p() / l).collect();
    let (a, b) = linear_fit(&fs, ys);
    let resid = fs.iter().zip(ys).map(|(f, y)| (y - a - b * f).abs()).fold(0.0, f64::max);
    let (plain, _) = fit_inverse(us, ys);
    (a, resid + (a - plain).abs())
}

/// Global indices from `ln t / ln h(t)` at `t = 10^{±3k}`, extrapolated.
fn global_indices(a: &YoungFunction, grid: &LogGrid) -> ((f64, f64), (f64, f64)) {
    let pts = sup_points(grid);
    let inv: Vec<f64> = pts.iter().map(|&s| a.inverse(s)).collect();
    let h = |t: f64| h_over(a, t, &pts, &inv);
    let mut up = (Vec::new(), Vec::new());
    let mut lo = (Vec::new(), Vec::new());
    for &t in &GLOBAL_TS {
        let hp = h(t);
        let hm = h(1.0 / t);
        let lt = t.ln();
        up.0.push(lt);
        up.1.push(if hp > 1.0 { lt / hp.ln() } else { f64::INFINITY });
        lo.0.push(lt);
        lo.1.push(if hm < 1.0 && hm > 0.0 { -lt / hm.ln() } else { f64::INFINITY });
    }
    // i from t -> inf, I from t -> 0+
    (extrapolate(&up.0, &up.1), extrapolate(&lo.0, &lo.1))
}

/// Local indices from `A(st)/A(s)` with `s` in the top three decades of the
/// grid: per-decade suprema extrapolated in `1 / ln s`, then the inf (upper)
/// or sup (lower) over the dilations.
fn local_indices(a: &YoungFunction, grid: &LogGrid) -> ((f64, f64), (f64, f64)) {
    let top = grid.max;
    if a.t_inf() < top * 1e3 {
        return ((f64::INFINITY, 0.0), (f64::INFINITY, 0.0));
    }
    let pd = grid.per_decade;
    let decade = |k: usize| geometric(top * 10f64.powi(k as i32 - 3), top * 10f64.powi(k as i32 - 2), pd);
    let exponent = |t: f64| -> (f64, f64) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 0..3 {
            let ss = decade(k);
            let mut best: Option<f64> = None;
            for &s in &ss {
                let d = a.eval(s);
                let n = a.eval(s * t);
                if !(d > 0.0) {
                    continue;
                }
                let y = if n.is_infinite() { f64::INFINITY } else { (n / d).ln() / t.ln() };
                // limsup of the ratio: max of y for t > 1, min for t < 1
                best = Some(match best {
                    None => y,
                    Some(b) => {
                        if t > 1.0 {
                            b.max(y)
                        } else {
                            b.min(y)
                        }
                    }
                });
            }
            if let Some(b) = best {
                xs.push((ss[ss.len() / 2]).ln());
                ys.push(b);
            }
        }
        if xs.len() < 2 {
            return (f64::NAN, f64::INFINITY);
        }
        extrapolate_log_power(t.ln(), &xs, &ys)
    };
    let mut upper = (f64::INFINITY, 0.0f64);
    let mut lower = (f64::NEG_INFINITY, 0.0f64);
    let mut spread_u = (f64::INFINITY, f64::NEG_INFINITY);
    let mut spread_l = (f64::INFINITY, f64::NEG_INFINITY);
    for &t in &LOCAL_DILATIONS {
        let (iu, uu) = exponent(t);
        if iu < upper.0 {
            upper = (iu, uu);
        }
        spread_u = (spread_u.0.min(iu), spread_u.1.max(iu));
        let (il, ul) = exponent(1.0 / t);
        if il > lower.0 {
            lower = (il, ul);
        }
        spread_l = (spread_l.0.min(il), spread_l.1.max(il));
    }
    let su = if spread_u.1.is_finite() { spread_u.1 - spread_u.0 } else { 0.0 };
    let sl = if spread_l.1.is_finite() { spread_l.1 - spread_l.0 } else { 0.0 };
    ((lower.0, lower.1 + sl), (upper.0, upper.1 + su))
}

/// Numeric estimates of all four indices, ignoring exact metadata.
pub fn indices_numeric(a: &YoungFunction, grid: &LogGrid) -> BoydIndexReport {
    let ((ig, uig), (iig, uiig)) = global_indices(a, grid);
    let ((il, uil), (iil, uiil)) = local_indices(a, grid);
    let mut r = BoydIndexReport {
        lower_global: ig,
        upper_global: iig,
        lower_local: il,
        upper_local: iil,
        method: IndexMethod::Numeric,
        uncertainty: Uncertainty { lower_global: uig, upper_global: uiig, lower_local: uil, upper_local: uiil },
    };
    clamp_chain(&mut r);
    r
}

/// Enforce `1 <= i <= I` for both scopes and `i_global <= i_local`,
/// `I_local <= I_global`.
fn clamp_chain(r: &mut BoydIndexReport) {
    let fix = |v: f64| if v.is_nan() { 1.0 } else { v.max(1.0) };
    r.lower_global = fix(r.lower_global);
    r.upper_global = fix(r.upper_global);
    r.lower_local = fix(r.lower_local);
    r.upper_local = fix(r.upper_local);
    if r.lower_local > r.upper_local {
        let m = 0.5 * (r.lower_local + r.upper_local);
        let w = 0.5 * (r.lower_local - r.upper_local);
        r.lower_local = m;
        r.upper_local = m;
        r.uncertainty.lower_local += w;
        r.uncertainty.upper_local += w;
    }
    if r.lower_global > r.lower_local {
        r.uncertainty.lower_global += r.lower_global - r.lower_local;
        r.lower_global = r.lower_local;
    }
    if r.upper_global < r.upper_local {
        r.uncertainty.upper_global += r.upper_local - r.upper_global;
        r.upper_global = r.upper_local;
    }
    if r.lower_global > r.upper_global {
        r.lower_global = r.upper_global;
    }
}

/// Exact values where metadata provides them, numeric estimates elsewhere.
pub fn indices(a: &YoungFunction, grid: &LogGrid) -> BoydIndexReport {
    let m = a.meta().indices;
    if let (Some(ig), Some(iig), Some(il), Some(iil)) = (m.lower_global, m.upper_global, m.lower_local, m.upper_local) {
        return BoydIndexReport {
            lower_global: ig,
            upper_global: iig,
            lower_local: il,
            upper_local: iil,
            method: IndexMethod::Exact,
            uncertainty: Uncertainty::default(),
        };
    }
    let mut r = indices_numeric(a, grid);
    let pick = |exact: Option<f64>, v: &mut f64, u: &mut f64| {
        if let Some(e) = exact {
            *v = e;
            *u = 0.0;
        }
    };
    pick(m.lower_global, &mut r.lower_global, &mut r.uncertainty.lower_global);
    pick(m.upper_global, &mut r.upper_global, &mut r.uncertainty.upper_global);
    pick(m.lower_local, &mut r.lower_local, &mut r.uncertainty.lower_local);
    pick(m.upper_local, &mut r.upper_local, &mut r.uncertainty.upper_local);
    r
}

/// The upper index requested with an exactness flag.
pub fn upper_index(a: &YoungFunction, scope: Scope, grid: &LogGrid) -> (f64, f64, bool) {
    let m = a.meta().indices;
    let exact = match scope {
        Scope::Global => m.upper_global,
        Scope::Local => m.upper_local,
    };
    if let Some(v) = exact {
        return (v, 0.0, true);
    }
    let r = indices_numeric(a, grid);
    let (v, u) = r.upper(scope);
    (v, u, false)
}

pub fn lower_index(a: &YoungFunction, scope: Scope, grid: &LogGrid) -> (f64, f64, bool) {
    let m = a.meta().indices;
    let exact = match scope {
        Scope::Global => m.lower_global,
        Scope::Local => m.lower_local,
    };
    if let Some(v) = exact {
        return (v, 0.0, true);
    }
    let r = indices_numeric(a, grid);
    let (v, u) = r.lower(scope);
    (v, u, false)
}

fn window(scope: Scope, grid: &LogGrid) -> Regime {
    match scope {
        Scope::Global => Regime::from_grid(RegimeKind::Global, grid),
        Scope::Local => Regime::from_grid(RegimeKind::NearInfinity, grid),
    }
}

/// Condition: some `sigma > 1` and `c < 1` with `E(sigma t) <= c sigma^{1/alpha} E(t)`.
/// For each sigma in {2, 4, 8, 16} the sup over the window is combined with its
/// extrapolation in `1 / ln t`; the smallest such constant decides. Near
/// infinity the sup runs over the upper half of the window only.
pub fn dilation_condition(e: &YoungFunction, alpha: f64, scope: Scope, grid: &LogGrid) -> Decision {
    let mut reg = window(scope, grid);
    if scope == Scope::Local {
        reg.lo = (reg.lo * reg.hi).sqrt();
    }
    let ts = reg.samples();
    let inv_alpha = 1.0 / alpha;
    let mut best = (f64::INFINITY, 0.0);
    let mut all = Vec::new();
    for sigma in [2.0f64, 4.0, 8.0, 16.0] {
        let norm = sigma.powf(inv_alpha);
        let cs: Vec<f64> = ts.iter().map(|&t| e.eval(sigma * t) / (norm * e.eval(t))).collect();
        if cs.iter().any(|c| c.is_nan() || c.is_infinite()) {
            all.push(f64::INFINITY);
            continue;
        }
        let mut c = cs.iter().copied().fold(0.0, f64::max);
        let d = reg.per_decade;
        let n = ts.len();
        let tail_x: Vec<f64> = ts[n - 2 * d..].iter().map(|t| t.ln()).collect();
        let (lim, _) = fit_inverse(&tail_x, &cs[n - 2 * d..]);
        if lim.is_finite() {
            c = c.max(lim);
        }
        if scope == Scope::Global {
            let head_x: Vec<f64> = ts[..2 * d].iter().map(|t| t.ln().abs()).collect();
            let (lim0, _) = fit_inverse(&head_x, &cs[..2 * d]);
            if lim0.is_finite() {
                c = c.max(lim0);
            }
        }
        all.push(c);
        if c < best.0 {
            best = (c, sigma);
        }
    }
    let diag = Diagnostics {
        ratio_min: all.iter().copied().fold(f64::INFINITY, f64::min),
        ratio_max: all.iter().copied().fold(0.0, f64::max),
        ratio_median: all[all.len() / 2],
        note: format!("sup_t E(s t)/(s^(1/alpha) E(t)) for s = 2,4,8,16: {all:?}"),
    };
    if best.0 < 0.98 {
        Decision::yes(best.0, Some(reg.lo), diag)
    } else if all.iter().all(|c| *c >= 1.02) {
        Decision::no(diag)
    } else {
        Decision::indeterminate(diag)
    }
}

/// Tail-integral condition: some `k > 1` with
/// `int_t^inf E(s) s^{-1/alpha - 1} ds <= E(k t) / t^{1/alpha}`.
/// The required `k(t) = E^{-1}(t^{1/alpha} I(t)) / t` is classified for
/// boundedness on the window.
pub fn tail_integral_condition(e: &YoungFunction, alpha: f64, scope: Scope, grid: &LogGrid) -> Decision {
    let reg = window(scope, grid);
    let ts = reg.samples();
    let inv_alpha = 1.0 / alpha;
    let pd = reg.per_decade;
    let top = reg.hi * 1e6;
    let us = geometric(reg.lo, top, pd);
    let g: Vec<f64> = us.iter().map(|&s| e.eval(s) * s.powf(-inv_alpha)).collect();
    let n = us.len();
    // integral of g d(ln s) from us[i] to the top, plus a power-law tail
    let kappa = ((e.eval(us[n - 1]) / e.eval(us[n - 2])).ln() / (us[n - 1] / us[n - 2]).ln()).max(0.0);
    let tail = if g[n - 1].is_finite() && kappa < inv_alpha {
        g[n - 1] / (inv_alpha - kappa)
    } else {
        f64::INFINITY
    };
    let mut cum = vec![0.0; n];
    cum[n - 1] = tail;
    for i in (0..n - 1).rev() {
        let du = (us[i + 1] / us[i]).ln();
        let (a, b) = (g[i], g[i + 1]);
        let cell = if a > 0.0 && b > 0.0 && (a - b).abs() > 1e-12 * a {
            (b - a) / (b / a).ln() * du
        } else {
            0.5 * (a + b) * du
        };
        cum[i] = cum[i + 1] + cell;
    }
    let ks: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let i = us.partition_point(|&u| u < t * (1.0 - 1e-12)).min(n - 1);
            let lhs = cum[i];
            if lhs.is_infinite() {
                f64::INFINITY
            } else {
                e.inverse(lhs * t.powf(inv_alpha)) / t
            }
        })
        .collect();
    let bound = match scope {
        Scope::Local => classify(&ts, &ks, pd),
        Scope::Global => {
            let split = ts.partition_point(|&t| t < 1.0);
            let lt: Vec<f64> = ts[..split].iter().rev().copied().collect();
            let lk: Vec<f64> = ks[..split].iter().rev().copied().collect();
            match (classify(&lt, &lk, pd), classify(&ts[split..], &ks[split..], pd)) {
                (Bound::Unbounded(w), _) | (_, Bound::Unbounded(w)) => Bound::Unbounded(w),
                (Bound::Bounded, Bound::Bounded) => Bound::Bounded,
                (Bound::Unclear(w), _) | (_, Bound::Unclear(w)) => Bound::Unclear(w),
            }
        }
    };
    let kmax = ks.iter().copied().filter(|k| k.is_finite()).fold(0.0, f64::max);
    let diag = Diagnostics {
        ratio_min: ks.iter().copied().fold(f64::INFINITY, f64::min),
        ratio_max: ks.iter().copied().fold(0.0, f64::max),
        ratio_median: ks[ks.len() / 2],
        note: "required dilation k(t) for the tail integral".into(),
    };
    match bound {
        Bound::Bounded => Decision::yes((kmax * (1.0 + 1e-9)).max(1.0 + 1e-9), Some(reg.lo), diag),
        Bound::Unbounded(w) => Decision::no(Diagnostics { note: format!("{}: {w}", diag.note), ..diag }),
        Bound::Unclear(w) => Decision::indeterminate(Diagnostics { note: format!("{}: {w}", diag.note), ..diag }),
    }
}

/// `I_E < 1/alpha` (strict). Off the margin the index decides; inside it the
/// dilation and tail-integral conditions are tried and must agree.
pub fn upper_index_condition(e: &YoungFunction, alpha: f64, scope: Scope, margin: f64, grid: &LogGrid) -> Decision {
    let target = 1.0 / alpha;
    let eps = margin * target;
    let (idx, unc, exact) = upper_index(e, scope, grid);
    let reg = window(scope, grid);
    let diag = |note: String| Diagnostics { ratio_min: idx, ratio_max: idx, ratio_median: idx, note };
    let witness = || {
        if e.is_finite_valued() {
            let d = dilation_condition(e, alpha, scope, grid);
            d.witness.map(|w| w.c).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        }
    };
    if exact {
        return if idx < target {
            Decision::yes(witness(), Some(reg.lo), diag(format!("exact index {idx} < {target}")))
        } else {
            Decision::no(diag(format!("exact index {idx} >= {target} (strict condition)")))
        };
    }
    if idx + unc < target - eps || (idx < target - eps && unc < eps) {
        return Decision::yes(witness(), Some(reg.lo), diag(format!("numeric index {idx} ± {unc} < {target}")));
    }
    if idx - unc > target + eps || (idx > target + eps && unc < eps) {
        return Decision::no(diag(format!("numeric index {idx} ± {unc} > {target}")));
    }
    if !e.is_finite_valued() {
        return Decision::indeterminate(diag(format!("numeric index {idx} within margin of {target}")));
    }
    let iii = dilation_condition(e, alpha, scope, grid);
    let i = tail_integral_condition(e, alpha, scope, grid);
    let note = format!(
        "numeric index {idx} within margin of {target}; dilation test {:?}, tail-integral test {:?}",
        iii.verdict, i.verdict
    );
    match (iii.is_yes(), i.is_yes(), iii.is_no(), i.is_no()) {
        (true, true, _, _) => Decision::yes(iii.witness.unwrap().c, Some(reg.lo), diag(note)),
        (_, _, true, true) => Decision::no(diag(note)),
        _ => Decision::indeterminate(diag(note)),
    }
}

/// Self-test: `I_E < 1/alpha` must agree with `i_{conj E} > 1/(1 - alpha)`,
/// the latter computed numerically from the conjugate.
pub fn conjugate_index_consistency(e: &YoungFunction, alpha: f64, margin: f64, grid: &LogGrid) -> Decision {
    let v = upper_index_condition(e, alpha, Scope::Local, margin, grid);
    let conj = e.conjugate();
    let conj = if conj.is_lazy() {
        conj.tabulate(grid.min, grid.max * 1e4, grid.per_decade).unwrap_or(conj)
    } else {
        conj
    };
    let (il, unc) = indices_numeric(&conj, grid).lower(Scope::Local);
    let target = 1.0 / (1.0 - alpha);
    let eps = margin * target;
    let vi = if il - unc > target + eps || (il > target + eps && unc < eps) {
        Some(true)
    } else if il + unc < target - eps || (il < target - eps && unc < eps) {
        Some(false)
    } else {
        None
    };
    let note = format!(
        "upper-index test {:?}; numeric i of conjugate = {il} ± {unc} vs {target}",
        v.verdict
    );
    let diag = Diagnostics { ratio_min: il, ratio_max: il, ratio_median: il, note };
    match (v.verdict, vi) {
        (crate::young::Verdict::Yes, Some(true)) | (crate::young::Verdict::No, Some(false)) => Decision::yes(1.0, None, diag),
        (crate::young::Verdict::Indeterminate, _) | (_, None) => Decision::indeterminate(diag),
        _ => Decision::no(diag),
    }
}
