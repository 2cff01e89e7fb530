//! Declarative specs for the catalog families and their construction.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::LogGrid;

use super::{Sampled, Tail, YoungFunction};

/// A user-supplied evaluator, checked for the Young-function axioms on the
/// default grid when wrapped by [`make_young`].
#[derive(Clone)]
pub struct CustomFn(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl CustomFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CustomFn(Arc::new(f))
    }

    pub fn call(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomFn(..)")
    }
}

impl PartialEq for CustomFn {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum YoungFunctionSpec {
    Power { p: f64 },
    Zygmund { q: f64, a: f64 },
    ExpPower { beta: f64, depth: u32 },
    ExpSqrtLog { q: f64 },
    Linf,
    Table { path: PathBuf },
    Glue { zero: Box<YoungFunctionSpec>, inf: Box<YoungFunctionSpec>, t_s: f64 },
    Custom { label: String, f: CustomFn },
}

impl YoungFunctionSpec {
    pub fn family(&self) -> &'static str {
        match self {
            YoungFunctionSpec::Power { .. } => "power",
            YoungFunctionSpec::Zygmund { .. } => "zygmund",
            YoungFunctionSpec::ExpPower { .. } => "exp_power",
            YoungFunctionSpec::ExpSqrtLog { .. } => "exp_sqrt_log",
            YoungFunctionSpec::Linf => "linf",
            YoungFunctionSpec::Table { .. } => "table",
            YoungFunctionSpec::Glue { .. } => "glue",
            YoungFunctionSpec::Custom { .. } => "custom",
        }
    }

    pub fn glue_depth(&self) -> u32 {
        match self {
            YoungFunctionSpec::Glue { zero, inf, .. } => 1 + zero.glue_depth().max(inf.glue_depth()),
            _ => 0,
        }
    }
}

impl fmt::Display for YoungFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YoungFunctionSpec::Power { p } => write!(f, "power(p={p:?})"),
            YoungFunctionSpec::Zygmund { q, a } => write!(f, "zygmund(q={q:?}, a={a:?})"),
            YoungFunctionSpec::ExpPower { beta, depth } => {
                if *depth == 1 {
                    write!(f, "exp_power(beta={beta:?})")
                } else {
                    write!(f, "exp_power(beta={beta:?}, depth={depth})")
                }
            }
            YoungFunctionSpec::ExpSqrtLog { q } => write!(f, "exp_sqrt_log(q={q:?})"),
            YoungFunctionSpec::Linf => write!(f, "linf()"),
            YoungFunctionSpec::Table { path } => write!(f, "table(path={:?})", path.display().to_string()),
            YoungFunctionSpec::Glue { zero, inf, t_s } => write!(f, "glue(zero={zero}, inf={inf}, t_s={t_s:?})"),
            YoungFunctionSpec::Custom { label, .. } => write!(f, "custom(label={label:?})"),
        }
    }
}

pub fn make_young(spec: &YoungFunctionSpec) -> Result<YoungFunction> {
    if spec.glue_depth() > 2 {
        return Err(Error::InvalidParameter("glue specs nest at most depth 2".into()));
    }
    match spec {
        YoungFunctionSpec::Power { p } => YoungFunction::power(*p),
        YoungFunctionSpec::Zygmund { q, a } => YoungFunction::zygmund(*q, *a),
        YoungFunctionSpec::ExpPower { beta, depth } => YoungFunction::exp_power(*beta, *depth),
        YoungFunctionSpec::ExpSqrtLog { q } => YoungFunction::exp_sqrt_log(*q),
        YoungFunctionSpec::Linf => Ok(YoungFunction::linf()),
        YoungFunctionSpec::Table { path } => load_table(path),
        YoungFunctionSpec::Glue { zero, inf, t_s } => {
            let z = make_young(zero)?;
            let i = make_young(inf)?;
            YoungFunction::glue(&z, &i, *t_s)
        }
        YoungFunctionSpec::Custom { label, f } => make_custom(label, f.clone()),
    }
}

/// Read a `t,value[,origin_flat]` table. `inf` is accepted in the final rows and
/// makes the function infinite past the last finite row.
pub fn load_table(path: &Path) -> Result<YoungFunction> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (ti, vi) = match (col("t"), col("value")) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Table("header must contain `t,value`".into())),
    };
    let fi = col("origin_flat");
    let mut rows = Vec::new();
    let mut flat: Option<f64> = None;
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |s: &str| -> Result<f64> {
            if s.eq_ignore_ascii_case("inf") {
                Ok(f64::INFINITY)
            } else {
                s.parse::<f64>().map_err(|_| Error::Table(format!("row {}: bad number {s:?}", line + 2)))
            }
        };
        let t = parse(rec.get(ti).unwrap_or(""))?;
        let v = parse(rec.get(vi).unwrap_or(""))?;
        if let Some(fi) = fi {
            if let Some(s) = rec.get(fi) {
                if !s.is_empty() && flat.is_none() {
                    flat = Some(parse(s)?);
                }
            }
        }
        rows.push((t, v));
    }
    table_from_rows(&rows, flat, &path.display().to_string())
}

pub fn table_from_rows(rows: &[(f64, f64)], origin_flat: Option<f64>, name: &str) -> Result<YoungFunction> {
    if rows.is_empty() {
        return Err(Error::Table("table has no rows".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut infinite = false;
    for (i, &(t, v)) in rows.iter().enumerate() {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Table(format!("row {}: t must be finite and nonnegative", i + 1)));
        }
        if let Some(&last) = xs.last() {
            if t <= last {
                return Err(Error::NonMonotoneTable(format!("t not strictly increasing at t = {t}")));
            }
        }
        if v.is_infinite() && v > 0.0 {
            infinite = true;
            continue;
        }
        if infinite {
            return Err(Error::Table("`inf` may only appear in the final rows".into()));
        }
        if !(v >= 0.0) {
            return Err(Error::Table(format!("row {}: value must be nonnegative", i + 1)));
        }
        xs.push(t);
        ys.push(v);
    }
    if xs.is_empty() {
        return Err(Error::Degenerate("table has no finite values".into()));
    }
    match origin_flat {
        Some(f) => {
            if !(f >= 0.0 && f <= xs[0]) {
                return Err(Error::Table(format!("origin_flat = {f} must lie in [0, first t]")));
            }
            if f > 0.0 && f < xs[0] {
                xs.insert(0, f);
                ys.insert(0, 0.0);
            } else if f == xs[0] && ys[0] != 0.0 {
                return Err(Error::Table("value at origin_flat must be 0".into()));
            }
        }
        None => {
            if xs[0] > 1e-9 {
                return Err(Error::Table("first t must be <= 1e-9 unless an origin_flat column is given".into()));
            }
        }
    }
    if xs[0] == 0.0 && ys[0] != 0.0 {
        return Err(Error::Table("A(0) must be 0".into()));
    }
    let tail = if infinite {
        Tail::Infinite
    } else {
        let n = xs.len();
        if n >= 2 && ys[n - 1] > ys[n - 2] && ys[n - 2] > 0.0 && xs[n - 2] > 0.0 {
            let p = (ys[n - 1] / ys[n - 2]).ln() / (xs[n - 1] / xs[n - 2]).ln();
            Tail::Power(p.max(1.0))
        } else if n >= 2 && ys[n - 1] > ys[n - 2] {
            Tail::Linear((ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]))
        } else {
            return Err(Error::Degenerate("table is bounded: final values do not increase".into()));
        }
    };
    let s = Sampled::new(xs, ys, tail)?;
    YoungFunction::from_sampled(s, format!("table({name})"))
}

/// Wrap a closure after checking monotonicity, convexity and non-degeneracy on
/// the default grid.
pub fn make_custom(label: &str, f: CustomFn) -> Result<YoungFunction> {
    let pts = LogGrid::DEFAULT.points();
    let v0 = f.call(0.0);
    if v0 != 0.0 {
        return Err(Error::InvalidParameter(format!("custom {label}: A(0) = {v0}, expected 0")));
    }
    let vals: Vec<f64> = pts.iter().map(|&t| f.call(t)).collect();
    if vals.iter().any(|v| v.is_nan() || *v < 0.0) {
        return Err(Error::InvalidParameter(format!("custom {label}: negative or NaN values")));
    }
    for i in 1..vals.len() {
        if vals[i] < vals[i - 1] && vals[i - 1].is_finite() {
            return Err(Error::NonMonotoneTable(format!("custom {label}: decreases near t = {}", pts[i])));
        }
    }
    // chord slopes of a convex function are nondecreasing
    let mut prev = 0.0f64;
    let mut last_finite = 0;
    for i in 0..pts.len() {
        if !vals[i].is_finite() {
            break;
        }
        last_finite = i;
        let (x0, y0) = if i == 0 { (0.0, 0.0) } else { (pts[i - 1], vals[i - 1]) };
        let m = (vals[i] - y0) / (pts[i] - x0);
        if m < prev * (1.0 - 1e-7) - 1e-300 {
            return Err(Error::InvalidParameter(format!("custom {label}: not convex near t = {}", pts[i])));
        }
        prev = m;
    }
    if vals.iter().all(|v| *v == 0.0) {
        return Err(Error::Degenerate(format!("custom {label}: identically zero on the grid")));
    }
    let t_inf = if last_finite + 1 < pts.len() {
        let (mut lo, mut hi) = (pts[last_finite], pts[last_finite + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f.call(mid).is_finite() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        lo
    } else {
        let n = pts.len() - 1;
        if vals[n] <= vals[n - 64] * (1.0 + 1e-12) {
            return Err(Error::Degenerate(format!("custom {label}: bounded on the grid")));
        }
        f64::INFINITY
    };
    let zeros = vals.iter().take_while(|v| **v == 0.0).count();
    let origin_flat = if zeros == 0 {
        0.0
    } else {
        let (mut lo, mut hi) = (pts[zeros - 1], pts[zeros.min(pts.len() - 1)]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f.call(mid) == 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        lo
    };
    Ok(YoungFunction::from_custom(f, t_inf, origin_flat, format!("custom({label})")))
}
