//! Empirical norm ratios `‖H f‖ / ‖f‖_{L^A}` over a fixed trial family at
//! three truncation depths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{geometric_edges, hardy_apply, luxemburg_norm, marcinkiewicz_norm, SampledFunction};
use crate::construct::HardyParams;
use crate::error::Result;
use crate::serde_ext::ext_f64;
use crate::young::YoungFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    Bounded,
    UnboundedTrend,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetNorm {
    Luxemburg,
    Marcinkiewicz,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialResult {
    pub id: usize,
    pub name: String,
    /// One ratio per depth, shallowest first.
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub target_norm: TargetNorm,
    pub depths: Vec<f64>,
    pub trials: Vec<TrialResult>,
    /// Sup over trials at the deepest level.
    #[serde(serialize_with = "ext_f64")]
    pub sup_ratio: f64,
    pub sups: Vec<f64>,
    /// Relative change of the sup between consecutive depths.
    pub deltas: Vec<f64>,
    pub verdict: ProbeVerdict,
}

#[derive(Debug, Clone, Copy)]
pub struct ProbeOptions {
    pub per_decade: usize,
    /// Decades below 1 covered by the grid at each level.
    pub depths: [f64; 3],
    /// Seeded random nonincreasing step functions added to the structured family.
    pub trials: usize,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { per_decade: 64, depths: [24.0, 48.0, 96.0], trials: 8, seed: 0 }
    }
}

pub const STRUCTURED_TRIALS: usize = 12;

type Trial = (String, Box<dyn Fn(f64, f64) -> f64>);

/// The structured family followed by `opts.trials` random step functions.
/// Each trial maps `(r, depth)` to a value; `r ∈ (0, 1)`.
pub fn trial_family(domain: &YoungFunction, opts: &ProbeOptions) -> Vec<(String, Box<dyn Fn(f64, f64) -> f64>)> {
    let mut v: Vec<Trial> = Vec::new();
    let a = domain.clone();
    v.push(("power: A^-1(1/r)".into(), Box::new(move |r, _| a.inverse(1.0 / r))));
    for th in [0.2, 0.4, 0.6] {
        v.push((format!("r^-{th}"), Box::new(move |r: f64, _| r.powf(-th))));
    }
    for frac in [0.9, 0.5, 0.1] {
        v.push((
            format!("chi(0, 10^(-{frac} depth))"),
            Box::new(move |r: f64, d: f64| if r < 10f64.powf(-frac * d) { 1.0 } else { 0.0 }),
        ));
    }
    for k in [1.0, 2.0] {
        let a = domain.clone();
        v.push((
            format!("A^-1(1/r) / (1 + ln(1/r))^{k}"),
            Box::new(move |r: f64, _| a.inverse(1.0 / r) / (1.0 - r.ln()).powf(k)),
        ));
    }
    v.push(("r^-1/2 / (1 + ln(1/r))".into(), Box::new(|r: f64, _| r.powf(-0.5) / (1.0 - r.ln()))));
    v.push(("1".into(), Box::new(|_, _| 1.0)));
    v.push(("chi(0, 1/2)".into(), Box::new(|r: f64, _| if r < 0.5 { 1.0 } else { 0.0 })));
    debug_assert_eq!(v.len(), STRUCTURED_TRIALS);
    for j in 0..opts.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(j as u64));
        let steps = rng.gen_range(1..=6);
        let shallowest = opts.depths[0];
        let mut parts: Vec<(f64, f64)> = (0..steps)
            .map(|_| (10f64.powf(-rng.gen_range(0.0..shallowest)), 10f64.powf(rng.gen_range(-2.0..2.0))))
            .collect();
        parts.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.push((
            format!("random[{j}]"),
            Box::new(move |r: f64, _| parts.iter().filter(|(x, _)| r < *x).map(|(_, c)| c).sum()),
        ));
    }
    v
}

fn ratios_for(
    trials: &[Trial],
    domain: &YoungFunction,
    target: &YoungFunction,
    p: &HardyParams,
    opts: &ProbeOptions,
) -> Result<Vec<[Vec<f64>; 2]>> {
    let mut out: Vec<[Vec<f64>; 2]> = trials.iter().map(|_| [Vec::new(), Vec::new()]).collect();
    for &depth in &opts.depths {
        let edges = geometric_edges(10f64.powf(-depth), 1.0, opts.per_decade);
        for (i, (_, f)) in trials.iter().enumerate() {
            let sf = SampledFunction::from_fn(edges.clone(), |r| f(r, depth))?;
            let nf = luxemburg_norm(&sf, domain);
            let hf = hardy_apply(&sf, p)?;
            let (l, m) = if nf > 0.0 {
                (luxemburg_norm(&hf, target) / nf, marcinkiewicz_norm(&hf, target) / nf)
            } else {
                (0.0, 0.0)
            };
            out[i][0].push(l);
            out[i][1].push(m);
        }
    }
    Ok(out)
}

fn report(trials: &[Trial], ratios: Vec<Vec<f64>>, norm: TargetNorm, opts: &ProbeOptions) -> ProbeReport {
    let levels = opts.depths.len();
    let sups: Vec<f64> = (0..levels).map(|l| ratios.iter().map(|r| r[l]).fold(0.0, f64::max)).collect();
    let deltas: Vec<f64> = sups.windows(2).map(|w| (w[1] - w[0]) / w[0]).collect();
    let growing = ratios.iter().any(|r| r.windows(2).all(|w| w[0] > 0.0 && w[1] >= 2.0 * w[0]));
    let verdict = if growing {
        ProbeVerdict::UnboundedTrend
    } else if deltas.iter().all(|d| *d < 0.05) {
        ProbeVerdict::Bounded
    } else {
        ProbeVerdict::Inconclusive
    };
    let trials = trials
        .iter()
        .zip(ratios)
        .enumerate()
        .map(|(id, ((name, _), ratios))| TrialResult { id, name: name.clone(), ratios })
        .collect();
    ProbeReport {
        target_norm: norm,
        depths: opts.depths.to_vec(),
        trials,
        sup_ratio: *sups.last().unwrap(),
        sups,
        deltas,
        verdict,
    }
}

/// `‖H_{α,β} f‖_{L^B} / ‖f‖_{L^A}` over the trial family on `(0, 1)`.
///
/// The verdict is `unbounded_trend` when some trial's ratio at least doubles
/// at each deeper level, `bounded` when the sup over trials grows by less
/// than 5% at each deeper level, and `inconclusive` otherwise.
pub fn norm_probe(domain: &YoungFunction, target: &YoungFunction, p: &HardyParams, opts: &ProbeOptions) -> Result<ProbeReport> {
    let trials = trial_family(domain, opts);
    let r = ratios_for(&trials, domain, target, p, opts)?;
    let lux = r.into_iter().map(|[l, _]| l).collect();
    Ok(report(&trials, lux, TargetNorm::Luxemburg, opts))
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakStrongReport {
    pub strong: ProbeReport,
    pub weak: ProbeReport,
    /// Per trial at the deepest level: `‖Hf‖_{M^B} / ‖Hf‖_{L^B}`.
    pub weak_over_strong: Vec<f64>,
    pub verdicts_agree: bool,
}

/// Both `‖Hf‖_{M^B}` and `‖Hf‖_{L^B}` against `‖f‖_{L^A}` on the same trials.
pub fn weak_vs_strong_probe(domain: &YoungFunction, target: &YoungFunction, p: &HardyParams, opts: &ProbeOptions) -> Result<WeakStrongReport> {
    let trials = trial_family(domain, opts);
    let r = ratios_for(&trials, domain, target, p, opts)?;
    let (lux, mar): (Vec<Vec<f64>>, Vec<Vec<f64>>) = r.into_iter().map(|[l, m]| (l, m)).unzip();
    let weak_over_strong = lux
        .iter()
        .zip(&mar)
        .map(|(l, m)| {
            let (l, m) = (*l.last().unwrap(), *m.last().unwrap());
            if l > 0.0 {
                m / l
            } else {
                0.0
            }
        })
        .collect();
    let strong = report(&trials, lux, TargetNorm::Luxemburg, opts);
    let weak = report(&trials, mar, TargetNorm::Marcinkiewicz, opts);
    let verdicts_agree = strong.verdict == weak.verdict;
    Ok(WeakStrongReport { strong, weak, weak_over_strong, verdicts_agree })
}
