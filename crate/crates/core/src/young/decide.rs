//! Domination, equivalence and Δ₂ decisions from sampled ratios.

use serde::Serialize;

use crate::grid::{linear_fit, Regime, RegimeKind};

use super::YoungFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub c: f64,
    pub t0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub ratio_median: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub diagnostics: Diagnostics,
}

impl Decision {
    pub fn yes(c: f64, t0: Option<f64>, diagnostics: Diagnostics) -> Self {
        Decision { verdict: Verdict::Yes, witness: Some(Witness { c, t0 }), diagnostics }
    }

    pub fn no(diagnostics: Diagnostics) -> Self {
        Decision { verdict: Verdict::No, witness: None, diagnostics }
    }

    pub fn indeterminate(diagnostics: Diagnostics) -> Self {
        Decision { verdict: Verdict::Indeterminate, witness: None, diagnostics }
    }

    pub fn note(note: impl Into<String>) -> Diagnostics {
        Diagnostics { ratio_min: f64::NAN, ratio_max: f64::NAN, ratio_median: f64::NAN, note: note.into() }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }

    pub fn is_no(&self) -> bool {
        self.verdict == Verdict::No
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Bound {
    Bounded,
    Unbounded(String),
    Unclear(String),
}

/// Boundedness of a sampled ratio as the window is traversed from its near end
/// to its far end (`values` already in that order).
pub(crate) fn classify(ts: &[f64], values: &[f64], per_decade: usize) -> Bound {
    if values.iter().any(|v| v.is_nan()) {
        let (t, v): (Vec<f64>, Vec<f64>) = ts.iter().zip(values).filter(|(_, v)| !v.is_nan()).map(|(a, b)| (*a, *b)).unzip();
        return classify(&t, &v, per_decade);
    }
    let n = values.len();
    let d = per_decade.max(1);
    if values.last().is_some_and(|v| v.is_infinite()) {
        return Bound::Unbounded("ratio infinite at the far end of the window".into());
    }
    if n < 2 * d + 1 {
        return Bound::Unclear("window shorter than two decades".into());
    }
    let far = &values[n - 2 * d..];
    if far.iter().any(|v| v.is_infinite()) {
        return Bound::Unbounded("ratio infinite in the final two decades".into());
    }
    let mut im = 0;
    let mut vmax = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v.is_finite() && v > vmax {
            vmax = v;
            im = i;
        }
    }
    if im < n - d {
        return Bound::Bounded;
    }
    let last = values[n - 1];
    let earlier = values[n - 1 - 2 * d];
    if earlier > 0.0 && last / earlier >= 2.0 {
        return Bound::Unbounded(format!("ratio grew by {:.3}x over the final two decades", last / earlier));
    }
    if earlier > 0.0 {
        let xs: Vec<f64> = ts[n - 2 * d..].iter().map(|t| t.ln().abs().ln()).collect();
        let ys: Vec<f64> = far.iter().map(|v| v.ln()).collect();
        if ys.iter().all(|y| y.is_finite()) && xs.iter().all(|x| x.is_finite()) {
            let (_, kappa) = linear_fit(&xs, &ys);
            if kappa >= 0.25 {
                return Bound::Unbounded(format!("ratio grows like a power {kappa:.3} of log t"));
            }
        }
    }
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    let last_decade_max = values[n - d..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if last_decade_max <= 1.05 * median {
        return Bound::Bounded;
    }
    Bound::Unclear(format!(
        "maximum in the final decade ({last_decade_max:.6e}) exceeds 1.05x median ({median:.6e}) without a firm growth trend"
    ))
}

fn summarize(values: &[f64], note: String) -> Diagnostics {
    let mut finite: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    finite.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if finite.is_empty() {
        return Decision::note(note);
    }
    Diagnostics {
        ratio_min: finite[0],
        ratio_max: *finite.last().unwrap(),
        ratio_median: finite[finite.len() / 2],
        note,
    }
}

/// Classify over the regime: one far end for near-zero / near-infinity, both
/// ends for global windows.
fn regime_bound(regime: &Regime, ts: &[f64], rs: &[f64]) -> Bound {
    let d = regime.per_decade;
    match regime.kind {
        RegimeKind::NearInfinity => classify(ts, rs, d),
        RegimeKind::NearZero => {
            let t: Vec<f64> = ts.iter().rev().copied().collect();
            let r: Vec<f64> = rs.iter().rev().copied().collect();
            classify(&t, &r, d)
        }
        RegimeKind::Global => {
            let split = ts.partition_point(|&t| t < 1.0);
            let mut parts = Vec::new();
            if split > 0 {
                let t: Vec<f64> = ts[..split.min(ts.len())].iter().rev().copied().collect();
                let r: Vec<f64> = rs[..split.min(ts.len())].iter().rev().copied().collect();
                if t.len() > 2 * d {
                    parts.push(classify(&t, &r, d));
                }
            }
            if split < ts.len() && ts.len() - split > 2 * d {
                parts.push(classify(&ts[split..], &rs[split..], d));
            }
            if parts.is_empty() {
                return classify(ts, rs, d);
            }
            let mut unclear = None;
            for p in parts {
                match p {
                    Bound::Unbounded(_) => return p,
                    Bound::Unclear(_) => unclear = Some(p),
                    Bound::Bounded => {}
                }
            }
            unclear.unwrap_or(Bound::Bounded)
        }
    }
}

fn witness_t0(regime: &Regime) -> Option<f64> {
    match regime.kind {
        RegimeKind::NearInfinity => Some(regime.lo),
        RegimeKind::NearZero => Some(regime.hi),
        RegimeKind::Global => None,
    }
}

/// Does `a` dominate `b` on the regime, i.e. `b(t) <= a(c t)`? Decided from the
/// ratio `r(t) = a^{-1}(b(t)) / t`.
pub fn dominates(a: &YoungFunction, b: &YoungFunction, regime: &Regime) -> Decision {
    let ts = regime.samples();
    let rs: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let bt = b.eval(t);
            if bt.is_infinite() && t <= b.t_inf() {
                // floating-point overflow, not a genuine infinite value
                f64::NAN
            } else if bt.is_infinite() {
                a.t_inf() / t
            } else {
                a.inverse(bt) / t
            }
        })
        .collect();
    let bound = regime_bound(regime, &ts, &rs);
    decision_from(bound, regime, &rs, "r(t) = A^{-1}(B(t))/t", true)
}

fn decision_from(bound: Bound, regime: &Regime, rs: &[f64], what: &str, slack: bool) -> Decision {
    match bound {
        Bound::Bounded => {
            let m = rs.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
            let c = if m > 0.0 {
                if slack {
                    m * (1.0 + 1e-9)
                } else {
                    m
                }
            } else {
                1.0
            };
            Decision::yes(c, witness_t0(regime), summarize(rs, format!("{what} bounded on the window")))
        }
        Bound::Unbounded(why) => Decision::no(summarize(rs, format!("{what}: {why}"))),
        Bound::Unclear(why) => Decision::indeterminate(summarize(rs, format!("{what}: {why}"))),
    }
}

/// Mutual domination. A firm `no` in either direction wins; otherwise any
/// indeterminate sub-verdict makes the result indeterminate.
pub fn equivalent(a: &YoungFunction, b: &YoungFunction, regime: &Regime) -> Decision {
    let ab = dominates(a, b, regime);
    let ba = dominates(b, a, regime);
    let note = format!("A over B: {}; B over A: {}", ab.diagnostics.note, ba.diagnostics.note);
    let diag = Diagnostics {
        ratio_min: ab.diagnostics.ratio_min.min(ba.diagnostics.ratio_min),
        ratio_max: ab.diagnostics.ratio_max.max(ba.diagnostics.ratio_max),
        ratio_median: ab.diagnostics.ratio_median,
        note,
    };
    if ab.is_no() || ba.is_no() {
        return Decision::no(diag);
    }
    match (ab.witness, ba.witness) {
        (Some(w1), Some(w2)) if ab.is_yes() && ba.is_yes() => {
            Decision { verdict: Verdict::Yes, witness: Some(Witness { c: w1.c.max(w2.c), t0: w1.t0 }), diagnostics: diag }
        }
        _ => Decision::indeterminate(diag),
    }
}

/// Δ₂ on the regime: `A(2t) <= c A(t)`.
pub fn delta2(a: &YoungFunction, regime: &Regime) -> Decision {
    if a.t_inf() < 2.0 * regime.hi {
        return Decision::no(Decision::note(format!(
            "A is infinite beyond t = {} inside the window",
            a.t_inf()
        )));
    }
    let ts = regime.samples();
    let rs: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let v = a.eval(t);
            let w = a.eval(2.0 * t);
            if v.is_infinite() {
                f64::NAN
            } else if v == 0.0 {
                if w == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                w / v
            }
        })
        .collect();
    let bound = regime_bound(regime, &ts, &rs);
    decision_from(bound, regime, &rs, "A(2t)/A(t)", false)
}
