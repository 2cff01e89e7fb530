//! Theorem-level questions: given `n`, `m`, a setting and a target `B`, does
//! an optimal Orlicz–Sobolev domain exist, and what is it?

use serde::Serialize;

use crate::boyd::{upper_index, IndexMethod, Scope};
use crate::construct::{build_b, glue_for_rn, near_zero_condition, ratio_band, ConstructOptions, ConstructedDomain, HardyParams, Variant, EQUIVALENCE_BAND};
use crate::error::{Error, Result};
use crate::grid::Regime;
use crate::serde_ext::ext_opt_f64;
use crate::young::{dominates, make_young, Asymptote, Verdict, YoungFunction, YoungFunctionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    ZeroBoundary,
    JohnDomain,
    WholeSpace,
    Measure,
    BoundaryTrace,
    Submanifold,
}

impl Setting {
    pub const ALL: [Setting; 6] = [
        Setting::ZeroBoundary,
        Setting::JohnDomain,
        Setting::WholeSpace,
        Setting::Measure,
        Setting::BoundaryTrace,
        Setting::Submanifold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Setting::ZeroBoundary => "zero_boundary",
            Setting::JohnDomain => "john_domain",
            Setting::WholeSpace => "whole_space",
            Setting::Measure => "measure",
            Setting::BoundaryTrace => "boundary_trace",
            Setting::Submanifold => "submanifold",
        }
    }

    pub fn from_name(s: &str) -> Option<Setting> {
        Setting::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingProblem {
    pub n: u32,
    pub m: u32,
    pub setting: Setting,
    /// Dimension of the measure; resolved by [`EmbeddingProblem::gamma`].
    pub gamma: Option<f64>,
    pub target: YoungFunctionSpec,
}

impl EmbeddingProblem {
    pub fn new(n: u32, m: u32, setting: Setting, gamma: Option<f64>, target: YoungFunctionSpec) -> Result<Self> {
        let p = EmbeddingProblem { n, m, setting, gamma, target };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidProblem(format!("n = {} must be at least 2", self.n)));
        }
        if self.m < 1 {
            return Err(Error::InvalidProblem("m must be at least 1".into()));
        }
        self.gamma().map(|_| ())
    }

    /// `γ` per setting: `n` for the Lebesgue settings, `n - 1` for traces on the
    /// boundary, the given value otherwise.
    pub fn gamma(&self) -> Result<f64> {
        let n = self.n as f64;
        let lo = (self.n as f64 - self.m as f64).max(0.0);
        let fixed = |want: f64| match self.gamma {
            Some(g) if g != want => Err(Error::InvalidProblem(format!("{} forces gamma = {want}, got {g}", self.setting.name()))),
            _ => Ok(want),
        };
        match self.setting {
            Setting::ZeroBoundary | Setting::JohnDomain | Setting::WholeSpace => fixed(n),
            Setting::BoundaryTrace => {
                let g = fixed(n - 1.0)?;
                if g < lo {
                    return Err(Error::InvalidProblem(format!("gamma = {g} is below n - m = {lo}")));
                }
                Ok(g)
            }
            Setting::Measure | Setting::Submanifold => {
                let g = self
                    .gamma
                    .ok_or_else(|| Error::InvalidProblem(format!("{} needs gamma", self.setting.name())))?;
                if !(g >= lo && g <= n) {
                    return Err(Error::InvalidProblem(format!("gamma = {g} must lie in [{lo}, {n}]")));
                }
                if self.setting == Setting::Submanifold && g.fract() != 0.0 {
                    return Err(Error::InvalidProblem(format!("submanifold dimension {g} must be an integer")));
                }
                Ok(g)
            }
        }
    }

    /// `α = m/n`, `β = n/γ`; only meaningful for `m < n`.
    pub fn params(&self) -> Result<HardyParams> {
        HardyParams::sobolev(self.n, self.m, self.gamma()?)
    }

    /// `n / m`, the bound on the upper index of the constructed domain.
    pub fn threshold(&self) -> f64 {
        self.n as f64 / self.m as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Exists,
    NoOptimal,
    #[serde(rename = "trivial_L1")]
    TrivialL1,
    Indeterminate,
}

impl VerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::Exists => "exists",
            VerdictKind::NoOptimal => "no_optimal",
            VerdictKind::TrivialL1 => "trivial_L1",
            VerdictKind::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainVerdict {
    pub kind: VerdictKind,
    pub threshold: f64,
    /// Upper index of the constructed `B_{α,β}`; absent when `m >= n`.
    #[serde(serialize_with = "ext_opt_f64")]
    pub index_value: Option<f64>,
    pub index_method: Option<IndexMethod>,
    pub index_uncertainty: f64,
    pub domain_asymptote: Option<Asymptote>,
    pub shortcut_used: bool,
    pub notes: Vec<String>,
    /// The domain Young function when `kind` is `exists` or `trivial_L1`.
    #[serde(skip)]
    pub domain: Option<YoungFunction>,
    #[serde(skip)]
    pub construction: Option<ConstructedDomain>,
}

#[derive(Debug, Clone, Copy)]
pub struct DecideOptions {
    pub construct: ConstructOptions,
    /// Relative margin around `n/m` inside which numeric indices are inconclusive.
    pub margin: f64,
    /// Relative tolerance when comparing asymptote descriptors in fixtures.
    pub tol: f64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { construct: ConstructOptions::default(), margin: 0.02, tol: 1e-9 }
    }
}

/// Compare an upper index with `thr`: exact values decide strictly, numeric
/// ones only outside `thr (1 ± margin)` widened by their uncertainty.
fn compare(v: f64, unc: f64, exact: bool, thr: f64, margin: f64) -> VerdictKind {
    if exact {
        if v < thr {
            VerdictKind::Exists
        } else {
            VerdictKind::NoOptimal
        }
    } else if v + unc < thr * (1.0 - margin) {
        VerdictKind::Exists
    } else if v - unc > thr * (1.0 + margin) {
        VerdictKind::NoOptimal
    } else {
        VerdictKind::Indeterminate
    }
}

pub fn decide(problem: &EmbeddingProblem, opts: &DecideOptions) -> Result<DomainVerdict> {
    problem.validate()?;
    let b = make_young(&problem.target)?;
    let thr = problem.threshold();
    let mut notes = Vec::new();

    if problem.m >= problem.n {
        let linear = YoungFunction::linear();
        let (kind, domain) = if problem.setting == Setting::WholeSpace {
            notes.push("domain is linear near infinity and B near zero".into());
            (VerdictKind::Exists, glue_for_rn(&b, &linear)?)
        } else {
            notes.push("m >= n: W^{m,1} is optimal".into());
            (VerdictKind::TrivialL1, linear)
        };
        return Ok(DomainVerdict {
            kind,
            threshold: thr,
            index_value: None,
            index_method: None,
            index_uncertainty: 0.0,
            domain_asymptote: Some(Asymptote::power(1.0)),
            shortcut_used: false,
            notes,
            domain: Some(domain),
            construction: None,
        });
    }

    let p = problem.params()?;
    let dom = build_b(&b, &p, Variant::FiniteWindow, &opts.construct)?;
    let (v, unc, exact) = upper_index(&dom.b_ab, Scope::Local, &opts.construct.grid);
    let kind = compare(v, unc, exact, thr, opts.margin);
    notes.extend(dom.notes.iter().cloned());
    match kind {
        VerdictKind::Exists => notes.push(format!(
            "upper index {v} < n/m = {thr}; any admissible domain A must dominate the returned one near infinity"
        )),
        VerdictKind::NoOptimal => notes.push(format!("upper index {v} >= n/m = {thr}: every admissible domain can be enlarged")),
        _ => notes.push(format!("upper index {v} ± {unc} too close to n/m = {thr} to decide")),
    }
    let domain = match (kind, problem.setting) {
        (VerdictKind::Exists, Setting::WholeSpace) => {
            let glued = glue_for_rn(&b, &dom.b_ab)?;
            let d = dominates(&glued, &b, &Regime::near_zero());
            notes.push(format!("domain dominates B near zero: {:?}", d.verdict));
            Some(glued)
        }
        (VerdictKind::Exists, _) => Some(dom.b_ab.clone()),
        _ => None,
    };
    Ok(DomainVerdict {
        kind,
        threshold: thr,
        index_value: Some(v),
        index_method: Some(if exact { IndexMethod::Exact } else { IndexMethod::Numeric }),
        index_uncertainty: unc,
        domain_asymptote: if kind == VerdictKind::Exists { dom.asymptote } else { None },
        shortcut_used: dom.shortcut_used,
        notes,
        domain,
        construction: Some(dom),
    })
}

#[derive(Debug, Clone)]
pub enum IntegralForm {
    Present(Box<ConstructedDomain>),
    Absent { condition: &'static str, detail: String },
}

/// Hypotheses of the global integral form: the near-zero condition on `B` and
/// `I^∞ < n/m` for the global construction.
pub fn integral_form(problem: &EmbeddingProblem, opts: &DecideOptions) -> Result<IntegralForm> {
    problem.validate()?;
    if problem.setting == Setting::WholeSpace {
        return Err(Error::InvalidProblem("integral form is not defined for whole_space".into()));
    }
    if problem.m >= problem.n {
        return Err(Error::InvalidProblem("integral form needs m < n".into()));
    }
    let b = make_young(&problem.target)?;
    let p = problem.params()?;
    let lebesgue = matches!(problem.setting, Setting::ZeroBoundary | Setting::JohnDomain);
    let cond = if lebesgue { "Bz" } else { "Bzt" };
    let nz = near_zero_condition(&b, &p, &opts.construct.grid);
    if nz.verdict != Verdict::Yes {
        return Ok(IntegralForm::Absent { condition: cond, detail: nz.diagnostics.note });
    }
    let dom = build_b(&b, &p, Variant::Global, &opts.construct)?;
    let thr = problem.threshold();
    let (v, unc, exact) = upper_index(&dom.b_ab, Scope::Global, &opts.construct.grid);
    match compare(v, unc, exact, thr, opts.margin) {
        VerdictKind::Exists => Ok(IntegralForm::Present(Box::new(dom))),
        _ => Ok(IntegralForm::Absent {
            condition: "global index",
            detail: format!("global upper index {v} ± {unc} is not below n/m = {thr}"),
        }),
    }
}

/// A worked example with its expected verdict and, for existing domains, the
/// expected shape near infinity.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    /// Target in the spec mini-language.
    pub target: &'static str,
    pub problem: EmbeddingProblem,
    pub expected_kind: VerdictKind,
    pub expected_asymptote: Option<Asymptote>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub kind: VerdictKind,
    pub expected_kind: VerdictKind,
    pub detail: String,
}

fn fixture(
    name: &'static str,
    (n, m, setting, gamma): (u32, u32, Setting, Option<f64>),
    target: &'static str,
    spec: YoungFunctionSpec,
    kind: VerdictKind,
    asym: Option<Asymptote>,
) -> Fixture {
    let problem = EmbeddingProblem { n, m, setting, gamma, target: spec };
    Fixture { name, target, problem, expected_kind: kind, expected_asymptote: asym }
}

fn asym(power: f64, log_power: f64, sqrt_log_coef: f64) -> Option<Asymptote> {
    Some(Asymptote { power, log_power, sqrt_log_coef })
}

pub fn paper_examples() -> Vec<Fixture> {
    use Setting::*;
    use VerdictKind::*;
    use YoungFunctionSpec as S;
    let zb31 = (3, 1, ZeroBoundary, None);
    vec![
        fixture("higher order: W^{m,1}", (3, 4, ZeroBoundary, None), "power(p=5)", S::Power { p: 5.0 }, TrivialL1, asym(1.0, 0.0, 0.0)),
        fixture("classical power q = 6", zb31, "power(p=6)", S::Power { p: 6.0 }, Exists, asym(2.0, 0.0, 0.0)),
        fixture(
            "zygmund above critical",
            zb31,
            "zygmund(q=2, a=1)",
            S::Zygmund { q: 2.0, a: 1.0 },
            Exists,
            asym(1.2, 0.6, 0.0),
        ),
        fixture(
            "zygmund critical, a > 0",
            zb31,
            "zygmund(q=1.5, a=1)",
            S::Zygmund { q: 1.5, a: 1.0 },
            Exists,
            asym(1.0, 2.0 / 3.0, 0.0),
        ),
        fixture(
            "zygmund critical, a < 0",
            zb31,
            "zygmund(q=1.5, a=-1)",
            S::Zygmund { q: 1.5, a: -1.0 },
            Exists,
            asym(1.0, 0.0, 0.0),
        ),
        fixture(
            "zygmund below critical",
            zb31,
            "zygmund(q=1.2, a=1)",
            S::Zygmund { q: 1.2, a: 1.0 },
            Exists,
            asym(1.0, 0.0, 0.0),
        ),
        fixture("power below critical", zb31, "power(p=1.2)", S::Power { p: 1.2 }, Exists, asym(1.0, 0.0, 0.0)),
        fixture(
            "exp sqrt log",
            zb31,
            "exp_sqrt_log(q=2)",
            S::ExpSqrtLog { q: 2.0 },
            Exists,
            asym(1.2, 0.0, 0.6f64.powf(1.5)),
        ),
        fixture("exp power beta = n/(n-m)", zb31, "exp_power(beta=1.5)", S::ExpPower { beta: 1.5, depth: 1 }, NoOptimal, None),
        fixture("L^inf", zb31, "linf()", S::Linf, NoOptimal, None),
        fixture(
            "exp power (4, 2)",
            (4, 2, ZeroBoundary, None),
            "exp_power(beta=2)",
            S::ExpPower { beta: 2.0, depth: 1 },
            NoOptimal,
            None,
        ),
        fixture("L^inf (4, 2)", (4, 2, ZeroBoundary, None), "linf()", S::Linf, NoOptimal, None),
        fixture(
            "exp tower depth 2",
            zb31,
            "exp_power(beta=1, depth=2)",
            S::ExpPower { beta: 1.0, depth: 2 },
            NoOptimal,
            None,
        ),
        fixture(
            "exp tower depth 3",
            (4, 2, JohnDomain, None),
            "exp_power(beta=0.5, depth=3)",
            S::ExpPower { beta: 0.5, depth: 3 },
            NoOptimal,
            None,
        ),
        fixture(
            "boundary trace zygmund",
            (3, 1, BoundaryTrace, None),
            "zygmund(q=4, a=1)",
            S::Zygmund { q: 4.0, a: 1.0 },
            Exists,
            asym(2.0, 0.5, 0.0),
        ),
        fixture(
            "measure gamma = 2.5",
            (3, 1, Measure, Some(2.5)),
            "zygmund(q=4, a=1)",
            S::Zygmund { q: 4.0, a: 1.0 },
            Exists,
            asym(12.0 / 6.5, 3.0 / 6.5, 0.0),
        ),
        fixture(
            "submanifold d = 2",
            (3, 1, Submanifold, Some(2.0)),
            "power(p=4)",
            S::Power { p: 4.0 },
            Exists,
            asym(2.0, 0.0, 0.0),
        ),
        fixture("whole space m >= n", (2, 3, WholeSpace, None), "power(p=3)", S::Power { p: 3.0 }, Exists, asym(1.0, 0.0, 0.0)),
        fixture("whole space power", (3, 1, WholeSpace, None), "power(p=6)", S::Power { p: 6.0 }, Exists, asym(2.0, 0.0, 0.0)),
    ]
}

/// Verdict kind, asymptote descriptor and (for existing domains) equivalence
/// of the domain with the expected shape over `[1e2, 1e12]`.
pub fn check_fixture(f: &Fixture, opts: &DecideOptions) -> FixtureOutcome {
    let out = |passed, kind, detail| FixtureOutcome { name: f.name, passed, kind, expected_kind: f.expected_kind, detail };
    let v = match decide(&f.problem, opts) {
        Ok(v) => v,
        Err(e) => return out(false, VerdictKind::Indeterminate, format!("error: {e}")),
    };
    if v.kind != f.expected_kind {
        return out(false, v.kind, format!("expected {}, got {}", f.expected_kind.name(), v.kind.name()));
    }
    let Some(want) = f.expected_asymptote else {
        return out(true, v.kind, "verdict matches".into());
    };
    let Some(got) = v.domain_asymptote else {
        return out(false, v.kind, "no asymptote reported".into());
    };
    let close = |a: f64, b: f64| (a - b).abs() <= opts.tol * b.abs().max(1.0);
    if !(close(got.power, want.power) && close(got.log_power, want.log_power) && close(got.sqrt_log_coef, want.sqrt_log_coef)) {
        return out(false, v.kind, format!("asymptote {} differs from {}", got.describe(), want.describe()));
    }
    let Some(domain) = v.domain.as_ref() else {
        return out(false, v.kind, "no domain".into());
    };
    let (lo, hi) = ratio_band(&|t| domain.eval(t), &|t| want.eval(t), 1e2, 1e12, 16);
    let spread = hi / lo;
    out(spread <= EQUIVALENCE_BAND, v.kind, format!("{}; ratio spread {spread:.3} over [1e2, 1e12]", want.describe()))
}

#[cfg(test)]
mod tests;
