//! Young functions: representation, evaluation, generalized inverse, Fenchel
//! conjugation and the domination / Δ₂ decisions.

pub(crate) mod decide;
mod sampled;
mod spec;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::geometric;

pub use decide::{delta2, dominates, equivalent, Decision, Diagnostics, Verdict, Witness};
pub use sampled::{Sampled, Tail};
pub use spec::{make_young, CustomFn, YoungFunctionSpec};

/// Exact Boyd-index values, when a closed form is known.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct IndexMeta {
    pub lower_global: Option<f64>,
    pub upper_global: Option<f64>,
    pub lower_local: Option<f64>,
    pub upper_local: Option<f64>,
}

impl IndexMeta {
    pub fn all(v: f64) -> Self {
        IndexMeta { lower_global: Some(v), upper_global: Some(v), lower_local: Some(v), upper_local: Some(v) }
    }

    pub fn local(lower: f64, upper: f64) -> Self {
        IndexMeta { lower_local: Some(lower), upper_local: Some(upper), ..Default::default() }
    }

    /// Indices of the conjugate: `i` and `I` swap and pass to Hölder conjugates.
    pub fn conjugate(&self) -> Self {
        let c = |v: Option<f64>| v.map(holder_conjugate);
        IndexMeta {
            lower_global: c(self.upper_global),
            upper_global: c(self.lower_global),
            lower_local: c(self.upper_local),
            upper_local: c(self.lower_local),
        }
    }
}

/// `p' = p / (p - 1)`, with `1' = inf` and `inf' = 1`.
pub fn holder_conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Shape `t^power (ln t)^log_power e^(sqrt_coef sqrt(ln t))`, meaningful up to
/// multiplicative constants near infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptote {
    pub power: f64,
    pub log_power: f64,
    pub sqrt_log_coef: f64,
}

impl Asymptote {
    pub fn power(p: f64) -> Self {
        Asymptote { power: p, log_power: 0.0, sqrt_log_coef: 0.0 }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let l = t.ln();
        let mut ln_v = self.power * l;
        if self.log_power != 0.0 {
            ln_v += self.log_power * l.ln();
        }
        if self.sqrt_log_coef != 0.0 {
            ln_v += self.sqrt_log_coef * l.sqrt();
        }
        ln_v.exp()
    }

    pub fn describe(&self) -> String {
        let mut s = format!("t^{}", fmt_num(self.power));
        if self.log_power != 0.0 {
            s.push_str(&format!(" (log t)^{}", fmt_num(self.log_power)));
        }
        if self.sqrt_log_coef != 0.0 {
            s.push_str(&format!(" exp({} sqrt(log t))", fmt_num(self.sqrt_log_coef)));
        }
        s
    }
}

fn fmt_num(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    format!("{r}")
}

#[derive(Debug, Clone, Default)]
pub struct Meta {
    pub indices: IndexMeta,
    pub near_infinity: Option<Asymptote>,
}

pub(crate) enum Repr {
    Power { p: f64 },
    Zygmund { q: f64, a: f64, k: f64 },
    ExpPower { beta: f64, depth: u32, knee: Option<(f64, f64)> },
    ExpSqrtLog { q: f64 },
    Linf,
    Sampled(Sampled),
    Glue(Glue),
    Scaled { inner: YoungFunction, b: f64, c: f64 },
    Conjugate { inner: YoungFunction },
    Custom(CustomFn),
}

pub(crate) struct Glue {
    zero: YoungFunction,
    inf: YoungFunction,
    x1: f64,
    x2: f64,
    slope: f64,
    shift: f64,
    depth: u32,
}

/// An immutable Young function. Cloning is cheap.
#[derive(Clone)]
pub struct YoungFunction {
    repr: Arc<Repr>,
    t_inf: f64,
    origin_flat: f64,
    meta: Meta,
    label: String,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFunction")
            .field("label", &self.label)
            .field("t_inf", &self.t_inf)
            .field("origin_flat", &self.origin_flat)
            .field("indices", &self.meta.indices)
            .finish()
    }
}

/// Root of `1 - e^{-x} = beta x` on `x > 0`, for `0 < beta < 1`.
fn exp_knee(beta: f64) -> f64 {
    let g = |x: f64| -(-x).exp_m1() - beta * x;
    let (mut lo, mut hi) = (1e-12, 1.0 / beta);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
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

/// Bisection for `sup{t : f(t) <= tau}` with geometric bracket expansion.
pub(crate) fn sup_inverse(f: &dyn Fn(f64) -> f64, tau: f64, guess: f64, t_inf: f64, origin_flat: f64) -> f64 {
    if tau.is_nan() {
        return f64::NAN;
    }
    if tau == f64::INFINITY {
        return f64::INFINITY;
    }
    if tau <= 0.0 {
        return origin_flat;
    }
    if t_inf.is_finite() && f(t_inf) <= tau {
        return t_inf;
    }
    let mut g = if guess.is_finite() && guess > 0.0 { guess } else { 1.0 };
    if t_inf.is_finite() && g >= t_inf {
        g = 0.5 * (t_inf + origin_flat.min(t_inf));
        if g <= 0.0 {
            g = 0.5 * t_inf;
        }
    }
    let (mut lo, mut hi);
    if f(g) <= tau {
        lo = g;
        hi = g;
        loop {
            let next = hi * 2.0;
            if t_inf.is_finite() && next >= t_inf {
                hi = t_inf;
                break;
            }
            if !next.is_finite() {
                return f64::INFINITY;
            }
            hi = next;
            if f(hi) > tau {
                break;
            }
            lo = hi;
        }
    } else {
        hi = g;
        lo = g * 0.5;
        while f(lo) > tau {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-300 {
                return origin_flat;
            }
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = if lo > 0.0 && hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if f(mid) <= tau {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.max(origin_flat)
}

const S_MIN: f64 = 1e-300;
const S_MAX: f64 = 1e300;

/// Golden-section maximisation of `s t - A(s)` over `u = ln s`.
fn conjugate_eval(a: &YoungFunction, t: f64) -> f64 {
    if !(t > 0.0) {
        return 0.0;
    }
    if t == f64::INFINITY {
        return f64::INFINITY;
    }
    let s_hi = a.t_inf.min(S_MAX);
    let phi = |u: f64| {
        let s = u.exp();
        let v = a.eval(s);
        if v.is_infinite() {
            f64::NEG_INFINITY
        } else {
            s * t - v
        }
    };
    let (mut lo, mut hi) = (S_MIN.ln(), s_hi.ln());
    // coarse scan to land inside the right basin before golden refinement
    let n = 64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=n {
        let u = lo + (hi - lo) * i as f64 / n as f64;
        let v = phi(u);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let h = (hi - lo) / n as f64;
    let center = lo + h * best_i as f64;
    let (a0, b0) = ((center - h).max(lo), (center + h).min(hi));
    lo = a0;
    hi = b0;
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = phi(x1);
    let mut f2 = phi(x2);
    for _ in 0..200 {
        if hi - lo < 1e-13 * (1.0 + hi.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = phi(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = phi(x1);
        }
    }
    let mut best = best_v.max(f1).max(f2).max(phi(a0)).max(phi(b0)).max(0.0);
    if a.t_inf.is_infinite() && b0 >= s_hi.ln() - 1e-9 {
        let top = phi(S_MAX.ln());
        let below = phi((S_MAX / 2.0).ln());
        if top > below && top > 0.0 {
            best = f64::INFINITY;
        }
    }
    best
}

impl YoungFunction {
    fn build(repr: Repr, t_inf: f64, origin_flat: f64, meta: Meta, label: String) -> Self {
        YoungFunction { repr: Arc::new(repr), t_inf, origin_flat, meta, label }
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("power: p = {p} must satisfy p >= 1")));
        }
        let meta = Meta { indices: IndexMeta::all(p), near_infinity: Some(Asymptote::power(p)) };
        Ok(Self::build(Repr::Power { p }, f64::INFINITY, 0.0, meta, format!("power(p={p:?})")))
    }

    /// `t^q (k + ln(1 + t e^{-k}))^a`; with `k = 1` this is `t^q log(e + t)^a`.
    /// For `a < 0` the shift `k` is enlarged so that convexity holds everywhere.
    pub fn zygmund(q: f64, a: f64) -> Result<Self> {
        let ok = q.is_finite() && a.is_finite() && (q > 1.0 || (q == 1.0 && a >= 0.0));
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "zygmund: need q > 1, or q = 1 with a >= 0 (got q = {q}, a = {a})"
            )));
        }
        let k = if a >= 0.0 { 1.0 } else { (a.abs() * (2.0 * q + 2.0) / (q * q - q)).max(1.0) };
        let meta = Meta {
            indices: IndexMeta::all(q),
            near_infinity: Some(Asymptote { power: q, log_power: a, sqrt_log_coef: 0.0 }),
        };
        Ok(Self::build(Repr::Zygmund { q, a, k }, f64::INFINITY, 0.0, meta, format!("zygmund(q={q:?}, a={a:?})")))
    }

    /// `exp(t^beta) - 1` iterated `depth` times; for `beta < 1` the inner layer is
    /// replaced by its tangent line from the origin below the inflection zone.
    pub fn exp_power(beta: f64, depth: u32) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("exp_power: beta = {beta} must be positive")));
        }
        if !(1..=4).contains(&depth) {
            return Err(Error::InvalidParameter(format!("exp_power: depth = {depth} must lie in 1..=4")));
        }
        let knee = if beta < 1.0 {
            let x = exp_knee(beta);
            let t0 = x.powf(1.0 / beta);
            Some((t0, x.exp_m1() / t0))
        } else {
            None
        };
        let inf = f64::INFINITY;
        let meta = Meta {
            indices: IndexMeta {
                lower_global: Some(beta.max(1.0)),
                upper_global: Some(inf),
                lower_local: Some(inf),
                upper_local: Some(inf),
            },
            near_infinity: None,
        };
        let label = if depth == 1 {
            format!("exp_power(beta={beta:?})")
        } else {
            format!("exp_power(beta={beta:?}, depth={depth})")
        };
        Ok(Self::build(Repr::ExpPower { beta, depth, knee }, inf, 0.0, meta, label))
    }

    /// `t^q exp(sqrt(log(e + t)))`.
    pub fn exp_sqrt_log(q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!("exp_sqrt_log: q = {q} must satisfy q >= 1")));
        }
        let meta = Meta {
            indices: IndexMeta::all(q),
            near_infinity: Some(Asymptote { power: q, log_power: 0.0, sqrt_log_coef: 1.0 }),
        };
        Ok(Self::build(Repr::ExpSqrtLog { q }, f64::INFINITY, 0.0, meta, format!("exp_sqrt_log(q={q:?})")))
    }

    /// `0` on `[0, 1]`, `+inf` beyond.
    pub fn linf() -> Self {
        let inf = f64::INFINITY;
        let meta = Meta {
            // the inverse is identically 1, so every dilation ratio is 1
            indices: IndexMeta::all(inf),
            near_infinity: None,
        };
        Self::build(Repr::Linf, 1.0, 1.0, meta, "linf()".into())
    }

    pub fn linear() -> Self {
        Self::power(1.0).expect("p = 1 is valid")
    }

    pub fn from_sampled(s: Sampled, label: impl Into<String>) -> Result<Self> {
        let t_inf = s.t_inf();
        let flat = s.origin_flat();
        if flat.is_infinite() {
            return Err(Error::Degenerate("table is identically zero".into()));
        }
        if let Tail::Linear(m) = s.tail() {
            if m == 0.0 {
                return Err(Error::Degenerate("table is bounded".into()));
            }
        }
        Ok(Self::build(Repr::Sampled(s), t_inf, flat, Meta::default(), label.into()))
    }

    pub(crate) fn from_custom(f: CustomFn, t_inf: f64, origin_flat: f64, label: String) -> Self {
        Self::build(Repr::Custom(f), t_inf, origin_flat, Meta::default(), label)
    }

    pub(crate) fn with_meta(mut self, meta: Meta) -> Self {
        self.meta = meta;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    pub fn t_inf(&self) -> f64 {
        self.t_inf
    }

    pub fn origin_flat(&self) -> f64 {
        self.origin_flat
    }

    pub fn is_finite_valued(&self) -> bool {
        self.t_inf.is_infinite()
    }

    pub fn as_sampled(&self) -> Option<&Sampled> {
        match &*self.repr {
            Repr::Sampled(s) => Some(s),
            _ => None,
        }
    }

    /// True when evaluation runs an inner optimisation or an opaque closure.
    pub fn is_lazy(&self) -> bool {
        match &*self.repr {
            Repr::Conjugate { .. } | Repr::Custom(_) => true,
            Repr::Scaled { inner, .. } => inner.is_lazy(),
            Repr::Glue(g) => g.zero.is_lazy() || g.inf.is_lazy(),
            _ => false,
        }
    }

    /// Pieces and joint of a glued function: `(x1, x2, slope)`.
    pub fn glue_joint(&self) -> Option<(f64, f64, f64)> {
        match &*self.repr {
            Repr::Glue(g) => Some((g.x1, g.x2, g.slope)),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        if t > self.t_inf {
            return f64::INFINITY;
        }
        match &*self.repr {
            Repr::Power { p } => {
                if *p == 1.0 {
                    t
                } else if *p == 2.0 {
                    t * t
                } else {
                    t.powf(*p)
                }
            }
            Repr::Zygmund { q, a, k } => {
                let l = k + (t * (-k).exp()).ln_1p();
                t.powf(*q) * l.powf(*a)
            }
            Repr::ExpPower { beta, depth, knee } => {
                let mut v = match knee {
                    Some((t0, slope)) if t <= *t0 => slope * t,
                    _ => t.powf(*beta).exp_m1(),
                };
                for _ in 1..*depth {
                    v = v.exp_m1();
                }
                v
            }
            Repr::ExpSqrtLog { q } => {
                let l = (t / std::f64::consts::E).ln_1p() + 1.0;
                t.powf(*q) * l.sqrt().exp()
            }
            Repr::Linf => 0.0,
            Repr::Sampled(s) => s.eval(t),
            Repr::Glue(g) => {
                if t <= g.x1 {
                    g.zero.eval(t)
                } else if t <= g.x2 {
                    g.zero.eval(g.x1) + g.slope * (t - g.x1)
                } else {
                    g.inf.eval(t) + g.shift
                }
            }
            Repr::Scaled { inner, b, c } => c * inner.eval(b * t),
            Repr::Conjugate { inner } => conjugate_eval(inner, t),
            Repr::Custom(f) => f.call(t),
        }
    }

    /// `sup{t : A(t) <= tau}`; `t_inf` when `tau` exceeds every finite value.
    pub fn inverse(&self, tau: f64) -> f64 {
        if tau.is_nan() {
            return f64::NAN;
        }
        if tau == f64::INFINITY {
            return f64::INFINITY;
        }
        if tau <= 0.0 {
            return self.origin_flat;
        }
        match &*self.repr {
            Repr::Power { p } => {
                if *p == 1.0 {
                    tau
                } else if *p == 2.0 {
                    tau.sqrt()
                } else {
                    tau.powf(1.0 / p)
                }
            }
            Repr::ExpPower { beta, depth, knee } => {
                let mut y = tau;
                for _ in 1..*depth {
                    y = y.ln_1p();
                }
                match knee {
                    Some((t0, slope)) if y <= slope * t0 => y / slope,
                    _ => y.ln_1p().powf(1.0 / beta),
                }
            }
            Repr::Linf => 1.0,
            Repr::Sampled(s) => s.inverse(tau),
            Repr::Glue(g) => {
                let z1 = g.zero.eval(g.x1);
                let l2 = z1 + g.slope * (g.x2 - g.x1);
                if tau < z1 {
                    g.zero.inverse(tau).min(g.x1)
                } else if tau < l2 && g.slope > 0.0 {
                    g.x1 + (tau - z1) / g.slope
                } else {
                    g.inf.inverse(tau - g.shift).max(g.x2)
                }
            }
            Repr::Scaled { inner, b, c } => inner.inverse(tau / c) / b,
            Repr::Zygmund { q, .. } => self.numeric_inverse(tau, tau.powf(1.0 / q)),
            Repr::ExpSqrtLog { q } => self.numeric_inverse(tau, tau.powf(1.0 / q)),
            Repr::Conjugate { .. } | Repr::Custom(_) => self.numeric_inverse(tau, 1.0),
        }
    }

    fn numeric_inverse(&self, tau: f64, guess: f64) -> f64 {
        let f = |t: f64| self.eval(t);
        sup_inverse(&f, tau, guess, self.t_inf, self.origin_flat)
    }

    /// `phi_A(s) = 1 / A^{-1}(1/s)`, the Luxemburg norm of a set of measure `s`.
    pub fn fundamental(&self, s: f64) -> f64 {
        let inv = self.inverse(1.0 / s);
        if inv.is_infinite() {
            0.0
        } else {
            1.0 / inv
        }
    }

    /// `t -> c A(b t)`.
    pub fn scale(&self, b: f64, c: f64) -> Result<Self> {
        if !(b > 0.0 && c > 0.0 && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factors b = {b}, c = {c} must be positive")));
        }
        if b == 1.0 && c == 1.0 {
            return Ok(self.clone());
        }
        let (inner, b0, c0) = match &*self.repr {
            Repr::Scaled { inner, b: b1, c: c1 } => (inner.clone(), b * b1, c * c1),
            _ => (self.clone(), b, c),
        };
        let label = format!("scale({}, b={b:?}, c={c:?})", self.label);
        Ok(Self::build(
            Repr::Scaled { inner: inner.clone(), b: b0, c: c0 },
            inner.t_inf / b0,
            inner.origin_flat / b0,
            self.meta.clone(),
            label,
        ))
    }

    /// Young conjugate, in closed form where the family allows it.
    pub fn conjugate(&self) -> YoungFunction {
        let meta = Meta { indices: self.meta.indices.conjugate(), near_infinity: None };
        let label = format!("conjugate({})", self.label);
        match &*self.repr {
            Repr::Power { p } if *p == 1.0 => YoungFunction::linf().with_label(label),
            Repr::Power { p } => {
                let pc = holder_conjugate(*p);
                let base = YoungFunction::power(pc).expect("conjugate exponent >= 1");
                base.scale(1.0 / p, p - 1.0).expect("positive").with_label(label).with_meta(Meta {
                    indices: IndexMeta::all(pc),
                    near_infinity: Some(Asymptote::power(pc)),
                })
            }
            Repr::Linf => YoungFunction::linear().with_label(label),
            Repr::Scaled { inner, b, c } => {
                let ci = inner.conjugate();
                ci.scale(1.0 / (b * c), *c).expect("positive").with_label(label).with_meta(meta)
            }
            Repr::Conjugate { inner } => inner.clone(),
            Repr::Sampled(s) => {
                let c = s.conjugate();
                let t_inf = c.t_inf();
                let flat = c.origin_flat();
                Self::build(Repr::Sampled(c), t_inf, flat, meta, label)
            }
            _ => self.conjugate_numeric(),
        }
    }

    /// Conjugate evaluated pointwise by maximisation, never short-circuited.
    pub fn conjugate_numeric(&self) -> YoungFunction {
        let meta = Meta { indices: self.meta.indices.conjugate(), near_infinity: None };
        let label = format!("conjugate({})", self.label);
        let t_inf = if self.t_inf.is_finite() {
            f64::INFINITY
        } else {
            let top = self.eval(S_MAX);
            if top.is_finite() {
                top / S_MAX
            } else {
                f64::INFINITY
            }
        };
        let flat = {
            let s = 1e-200;
            let v = self.eval(s) / s;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        Self::build(Repr::Conjugate { inner: self.clone() }, t_inf, flat, meta, label)
    }

    /// Piecewise-linear copy on a geometric grid over `[lo, hi]`, with a power
    /// tail fitted to the last cell (or an infinite tail at `t_inf`).
    pub fn tabulate(&self, lo: f64, hi: f64, per_decade: usize) -> Result<YoungFunction> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut tail = None;
        let flat = self.origin_flat;
        if flat > 0.0 && flat < lo {
            xs.push(flat);
            ys.push(0.0);
        }
        for t in geometric(lo, hi, per_decade) {
            if t <= *xs.last().unwrap_or(&0.0) {
                continue;
            }
            if t > self.t_inf {
                let ti = self.t_inf;
                if ti > *xs.last().unwrap_or(&0.0) {
                    xs.push(ti);
                    ys.push(self.eval(ti));
                }
                tail = Some(Tail::Infinite);
                break;
            }
            let v = self.eval(t);
            if !v.is_finite() {
                tail = Some(Tail::Infinite);
                break;
            }
            xs.push(t);
            ys.push(v.max(*ys.last().unwrap_or(&0.0)));
        }
        if xs.len() < 2 {
            return Err(Error::Degenerate(format!("{} has no finite range on [{lo}, {hi}]", self.label)));
        }
        let tail = tail.unwrap_or_else(|| {
            let n = xs.len();
            let (x0, x1, y0, y1) = (xs[n - 2], xs[n - 1], ys[n - 2], ys[n - 1]);
            let p = if y0 > 0.0 && y1 > y0 { (y1 / y0).ln() / (x1 / x0).ln() } else { 1.0 };
            Tail::Power(p.max(1.0))
        });
        let s = Sampled::new(xs, ys, tail)?.convexified();
        let t_inf = s.t_inf();
        let fl = s.origin_flat();
        Ok(Self::build(Repr::Sampled(s), t_inf, fl, self.meta.clone(), format!("table[{}]", self.label)))
    }

    /// Join `zero` near the origin to `inf` near infinity at the switch value
    /// `t_s`, bridging with an affine segment so the result stays convex.
    pub fn glue(zero: &YoungFunction, inf: &YoungFunction, t_s: f64) -> Result<YoungFunction> {
        if !(t_s > 0.0 && t_s.is_finite()) {
            return Err(Error::InvalidParameter(format!("glue: t_s = {t_s} must be positive")));
        }
        let depth = 1 + zero.glue_depth().max(inf.glue_depth());
        if depth > 2 {
            return Err(Error::InvalidParameter("glue specs nest at most depth 2".into()));
        }
        let ratio = 10f64.powf(1.0 / 64.0);
        let h = 1e-7;
        let x1_start = if zero.t_inf.is_finite() { t_s.min(zero.t_inf * (1.0 - 1e-9)) } else { t_s };
        let mut x2s: Vec<f64> = Vec::new();
        let mut x = t_s;
        for _ in 0..(24 * 64) {
            if inf.t_inf.is_finite() && x >= inf.t_inf {
                break;
            }
            x2s.push(x);
            x *= ratio;
        }
        if inf.t_inf.is_finite() {
            x2s.push(inf.t_inf);
        }
        let lower_slope = |x2: f64| -> f64 {
            if inf.t_inf.is_finite() && x2 >= inf.t_inf {
                return f64::INFINITY;
            }
            (inf.eval(x2) - inf.eval(x2 * (1.0 - h))) / (x2 * h)
        };
        let mut x1 = x1_start;
        for _ in 0..(24 * 64) {
            let z1 = zero.eval(x1);
            let s_up = (zero.eval(x1 * (1.0 + h)) - z1) / (x1 * h);
            if s_up.is_finite() {
                for &x2 in &x2s {
                    let x2 = x2.max(x1);
                    if lower_slope(x2) >= s_up {
                        let l2 = z1 + s_up * (x2 - x1);
                        let shift = l2 - inf.eval(x2);
                        let flat = if zero.origin_flat < x1 { zero.origin_flat } else { x1 };
                        let label = format!("glue(zero={}, inf={}, t_s={t_s:?})", zero.label, inf.label);
                        let meta = Meta {
                            indices: IndexMeta {
                                lower_local: inf.meta.indices.lower_local,
                                upper_local: inf.meta.indices.upper_local,
                                ..Default::default()
                            },
                            near_infinity: inf.meta.near_infinity,
                        };
                        let g = Glue { zero: zero.clone(), inf: inf.clone(), x1, x2, slope: s_up, shift, depth };
                        return Ok(Self::build(Repr::Glue(g), inf.t_inf.max(x2), flat, meta, label));
                    }
                }
            }
            x1 /= ratio;
        }
        Err(Error::GlueFailed(format!(
            "no convex affine bridge between {} and {} within 24 decades of t_s = {t_s}",
            zero.label, inf.label
        )))
    }

    fn glue_depth(&self) -> u32 {
        match &*self.repr {
            Repr::Glue(g) => g.depth,
            Repr::Scaled { inner, .. } | Repr::Conjugate { inner } => inner.glue_depth(),
            _ => 0,
        }
    }
}
