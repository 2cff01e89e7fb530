//! Front end for `orlicz-core`: the spec mini-language, run configuration and
//! the subcommands of the `orlicz` binary.

pub mod config;
pub mod lang;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use orlicz_core::boyd::indices;
use orlicz_core::construct::{build_b, ConstructOptions, HardyParams, Variant};
use orlicz_core::embeddings::{check_fixture, decide, integral_form, paper_examples, DecideOptions, EmbeddingProblem, IntegralForm, Setting};
use orlicz_core::norms_hardy::{norm_probe, weak_vs_strong_probe, ProbeOptions};
use orlicz_core::{make_young, Error as CoreError, LogGrid, YoungFunction};

use config::{ConfigFile, Format, RunConfig, CONFIG_ENV};
use lang::{parse_young_spec, ParseError};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "orlicz", version, about = "Optimal Orlicz-Sobolev domains and Young-function calculus")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML config file; defaults to the file named by ORLICZ_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub grid_min: Option<f64>,
    #[arg(long, global = true)]
    pub grid_max: Option<f64>,
    #[arg(long, global = true)]
    pub per_decade: Option<usize>,
    /// Relative margin around strict thresholds [default: 0.02]
    #[arg(long, global = true)]
    pub margin: Option<f64>,
    /// Relative tolerance for fixture comparisons [default: 1e-9]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Eval,
    Inverse,
    Fundamental,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide existence of the optimal domain and describe it.
    Analyze {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long)]
        setting: String,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        target: String,
        /// Also check the hypotheses of the global integral form.
        #[arg(long)]
        integral_form: bool,
    },
    /// Boyd indices of a Young function.
    Indices { spec: String },
    /// Young conjugate sampled on the grid.
    Conjugate { spec: String },
    /// The domain function B_{alpha,beta} sampled on the grid.
    Construct {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        spec: String,
        /// Build the variant on all of (0, inf).
        #[arg(long)]
        global: bool,
    },
    /// Empirical norm ratios of the Hardy operator.
    HardyProbe {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        domain: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        /// Report Marcinkiewicz and Luxemburg ratios side by side.
        #[arg(long)]
        weak: bool,
    },
    /// Check every worked example; nonzero exit on any failure.
    VerifyExamples,
    /// CSV `t,value` of a Young function, its inverse or its fundamental function.
    EmitCurve {
        spec: String,
        #[arg(long, value_enum, default_value = "eval")]
        what: What,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("spec: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{0}")]
    Tolerance(String),
}

impl CliError {
    /// 1 for parse and validation errors, 2 for failed mathematical
    /// conditions, 3 for tolerance failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::ConditionFailed { .. }) => 2,
            CliError::Tolerance(_) => 3,
            _ => 1,
        }
    }
}

/// Text to print and the process exit status.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let path = g.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    if let Some(p) = path {
        cfg.apply(&ConfigFile::load(&p).map_err(CliError::Usage)?);
    }
    cfg.apply(&ConfigFile {
        grid_min: g.grid_min,
        grid_max: g.grid_max,
        per_decade: g.per_decade,
        margin: g.margin,
        tol: g.tol,
        format: g.format,
        seed: g.seed,
    });
    cfg.validate().map_err(CliError::Usage)?;
    Ok(cfg)
}

fn young(text: &str) -> Result<YoungFunction, CliError> {
    Ok(make_young(&parse_young_spec(text)?)?)
}

fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// 17 significant digits, enough to read the value back exactly.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn csv_curve(ts: &[f64], vs: &[f64]) -> String {
    let mut out = String::from("t,value\n");
    for (t, v) in ts.iter().zip(vs) {
        let _ = writeln!(out, "{},{}", fmt17(*t), fmt17(*v));
    }
    out
}

fn curve_doc(cfg: &RunConfig, mut head: serde_json::Map<String, Value>, ts: &[f64], vs: &[f64]) -> String {
    match cfg.format {
        Format::Csv => csv_curve(ts, vs),
        Format::Json => {
            head.insert("t".into(), Value::Array(ts.iter().map(|t| num(*t)).collect()));
            head.insert("value".into(), Value::Array(vs.iter().map(|v| num(*v)).collect()));
            json_doc(Value::Object(head))
        }
    }
}

fn json_doc(mut v: Value) -> String {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn decide_options(cfg: &RunConfig) -> DecideOptions {
    DecideOptions { construct: ConstructOptions::with_grid(cfg.grid()), margin: cfg.margin, tol: cfg.tol }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = resolve_config(&cli.global)?;
    let grid: LogGrid = cfg.grid();
    let ok = |stdout: String| Ok(Outcome { stdout, code: 0 });
    match &cli.command {
        Command::Analyze { n, m, setting, gamma, target, integral_form: want_integral } => {
            let setting = Setting::from_name(setting).ok_or_else(|| {
                let names: Vec<&str> = Setting::ALL.iter().map(|s| s.name()).collect();
                CliError::Usage(format!("unknown setting `{setting}` (expected one of {})", names.join(", ")))
            })?;
            let spec = parse_young_spec(target)?;
            let problem = EmbeddingProblem::new(*n, *m, setting, *gamma, spec)?;
            let opts = decide_options(&cfg);
            let v = decide(&problem, &opts)?;
            let mut doc = to_value(&v);
            let obj = doc.as_object_mut().expect("struct");
            obj.insert(
                "problem".into(),
                json!({"n": n, "m": m, "setting": setting.name(), "gamma": problem.gamma()?, "target": target}),
            );
            obj.insert("domain_asymptote_text".into(), json!(v.domain_asymptote.map(|a| a.describe())));
            obj.insert("domain_label".into(), json!(v.domain.as_ref().map(|d| d.label().to_string())));
            if *want_integral {
                let f = match integral_form(&problem, &opts)? {
                    IntegralForm::Present(d) => json!({"present": true, "label": d.b_ab.label()}),
                    IntegralForm::Absent { condition, detail } => json!({"present": false, "condition": condition, "detail": detail}),
                };
                obj.insert("integral_form".into(), f);
            }
            ok(json_doc(doc))
        }
        Command::Indices { spec } => {
            let a = young(spec)?;
            let mut doc = to_value(&indices(&a, &grid));
            doc.as_object_mut().expect("struct").insert("spec".into(), json!(spec));
            ok(json_doc(doc))
        }
        Command::Conjugate { spec } => {
            let a = young(spec)?;
            let c = a.conjugate();
            let ts = grid.points();
            let vs: Vec<f64> = ts.iter().map(|&t| c.eval(t)).collect();
            let mut head = serde_json::Map::new();
            head.insert("spec".into(), json!(spec));
            head.insert("label".into(), json!(c.label()));
            ok(curve_doc(&cfg, head, &ts, &vs))
        }
        Command::Construct { alpha, beta, spec, global } => {
            let b = young(spec)?;
            let p = HardyParams::new(*alpha, *beta)?;
            let variant = if *global { Variant::Global } else { Variant::FiniteWindow };
            let dom = build_b(&b, &p, variant, &ConstructOptions::with_grid(grid))?;
            let ts = grid.points();
            let vs: Vec<f64> = ts.iter().map(|&t| dom.b_ab.eval(t)).collect();
            let mut head = serde_json::Map::new();
            head.insert("spec".into(), json!(spec));
            head.insert("label".into(), json!(dom.b_ab.label()));
            head.insert("variant".into(), to_value(&variant));
            head.insert("alpha".into(), json!(alpha));
            head.insert("beta".into(), json!(beta));
            head.insert("shortcut_used".into(), json!(dom.shortcut_used));
            head.insert("asymptote".into(), to_value(&dom.asymptote));
            head.insert("asymptote_text".into(), json!(dom.asymptote.map(|a| a.describe())));
            head.insert("notes".into(), json!(dom.notes));
            ok(curve_doc(&cfg, head, &ts, &vs))
        }
        Command::HardyProbe { alpha, beta, domain, target, trials, weak } => {
            if *trials < 1 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let a = young(domain)?;
            let b = young(target)?;
            let p = HardyParams::new(*alpha, *beta)?;
            let opts = ProbeOptions { per_decade: cfg.per_decade, trials: *trials, seed: cfg.seed, ..ProbeOptions::default() };
            let doc = if *weak { to_value(&weak_vs_strong_probe(&a, &b, &p, &opts)?) } else { to_value(&norm_probe(&a, &b, &p, &opts)?) };
            ok(json_doc(doc))
        }
        Command::VerifyExamples => {
            let opts = decide_options(&cfg);
            let fixtures = paper_examples();
            let rows: Vec<_> = fixtures.iter().map(|f| (f, check_fixture(f, &opts))).collect();
            let passed = rows.iter().all(|(_, o)| o.passed);
            let stdout = match cfg.format {
                Format::Json => {
                    let fixtures: Vec<Value> = rows
                        .iter()
                        .map(|(f, o)| {
                            let mut v = to_value(o);
                            let m = v.as_object_mut().expect("struct");
                            m.insert("n".into(), json!(f.problem.n));
                            m.insert("m".into(), json!(f.problem.m));
                            m.insert("setting".into(), json!(f.problem.setting.name()));
                            m.insert("target".into(), json!(f.target));
                            v
                        })
                        .collect();
                    json_doc(json!({"passed": passed, "fixtures": fixtures}))
                }
                Format::Csv => {
                    let mut s = String::from("name,n,m,setting,target,expected,kind,passed\n");
                    for (f, o) in &rows {
                        let _ = writeln!(
                            s,
                            "\"{}\",{},{},{},\"{}\",{},{},{}",
                            f.name,
                            f.problem.n,
                            f.problem.m,
                            f.problem.setting.name(),
                            f.target,
                            o.expected_kind.name(),
                            o.kind.name(),
                            o.passed
                        );
                    }
                    s
                }
            };
            Ok(Outcome { stdout, code: if passed { 0 } else { 3 } })
        }
        Command::EmitCurve { spec, what } => {
            let a = young(spec)?;
            let ts = grid.points();
            let vs: Vec<f64> = ts
                .iter()
                .map(|&t| match what {
                    What::Eval => a.eval(t),
                    What::Inverse => a.inverse(t),
                    What::Fundamental => a.fundamental(t),
                })
                .collect();
            ok(csv_curve(&ts, &vs))
        }
    }
}
