use super::*;
use crate::young::equivalent;

fn opts() -> DecideOptions {
    DecideOptions::default()
}

fn zb(n: u32, m: u32, target: YoungFunctionSpec) -> EmbeddingProblem {
    EmbeddingProblem::new(n, m, Setting::ZeroBoundary, None, target).unwrap()
}

#[test]
fn problem_validation() {
    let p = YoungFunctionSpec::Power { p: 2.0 };
    assert!(EmbeddingProblem::new(1, 1, Setting::ZeroBoundary, None, p.clone()).is_err());
    assert!(EmbeddingProblem::new(3, 0, Setting::ZeroBoundary, None, p.clone()).is_err());
    assert!(EmbeddingProblem::new(3, 1, Setting::Measure, None, p.clone()).is_err());
    assert!(EmbeddingProblem::new(3, 1, Setting::Measure, Some(1.5), p.clone()).is_err());
    assert!(EmbeddingProblem::new(3, 1, Setting::Submanifold, Some(2.5), p.clone()).is_err());
    assert!(EmbeddingProblem::new(3, 1, Setting::BoundaryTrace, Some(2.5), p.clone()).is_err());
    assert!(EmbeddingProblem::new(3, 1, Setting::ZeroBoundary, Some(2.0), p.clone()).is_err());
    let t = EmbeddingProblem::new(3, 1, Setting::BoundaryTrace, None, p.clone()).unwrap();
    assert_eq!(t.gamma().unwrap(), 2.0);
    let s = EmbeddingProblem::new(3, 2, Setting::Submanifold, Some(1.0), p).unwrap();
    assert_eq!(s.params().unwrap().beta, 3.0);
    for s in Setting::ALL {
        assert_eq!(Setting::from_name(s.name()), Some(s));
    }
}

#[test]
fn trivial_and_whole_space_for_high_order() {
    let v = decide(&zb(3, 4, YoungFunctionSpec::Power { p: 5.0 }), &opts()).unwrap();
    assert_eq!(v.kind, VerdictKind::TrivialL1);
    assert_eq!(v.domain.unwrap().eval(7.0), 7.0);
    let w = EmbeddingProblem::new(3, 3, Setting::WholeSpace, None, YoungFunctionSpec::Power { p: 2.0 }).unwrap();
    let v = decide(&w, &opts()).unwrap();
    assert_eq!(v.kind, VerdictKind::Exists);
    let d = v.domain.unwrap();
    let sq = YoungFunction::power(2.0).unwrap();
    assert!(equivalent(&d, &YoungFunction::linear(), &Regime::near_infinity()).is_yes());
    assert!(equivalent(&d, &sq, &Regime::near_zero()).is_yes());
}

#[test]
fn classical_power_exists() {
    let v = decide(&zb(3, 1, YoungFunctionSpec::Power { p: 6.0 }), &opts()).unwrap();
    assert_eq!(v.kind, VerdictKind::Exists);
    assert_eq!(v.index_method, Some(IndexMethod::Exact));
    assert!((v.index_value.unwrap() - 2.0).abs() < 1e-12);
    assert!(v.shortcut_used);
    assert_eq!(v.domain_asymptote.unwrap().power, 2.0);
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["kind"], "exists");
    assert!(json.get("domain").is_none());
}

#[test]
fn boundary_cases_are_no_optimal() {
    for (n, m) in [(3, 1), (4, 2)] {
        let nm = n as f64 / (n - m) as f64;
        for t in [YoungFunctionSpec::Linf, YoungFunctionSpec::ExpPower { beta: nm, depth: 1 }] {
            let v = decide(&zb(n, m, t), &opts()).unwrap();
            assert_eq!(v.kind, VerdictKind::NoOptimal);
            assert_eq!(v.index_method, Some(IndexMethod::Exact));
            assert!(v.domain.is_none());
        }
    }
}

#[test]
fn numeric_boundary_is_indeterminate() {
    assert_eq!(compare(3.01, 0.0, false, 3.0, 0.02), VerdictKind::Indeterminate);
    assert_eq!(compare(2.9, 0.05, false, 3.0, 0.02), VerdictKind::Indeterminate);
    assert_eq!(compare(2.5, 0.05, false, 3.0, 0.02), VerdictKind::Exists);
    assert_eq!(compare(3.5, 0.05, false, 3.0, 0.02), VerdictKind::NoOptimal);
    assert_eq!(compare(3.0, 0.0, true, 3.0, 0.02), VerdictKind::NoOptimal);
}

#[test]
fn john_domain_matches_zero_boundary() {
    for f in paper_examples().into_iter().filter(|f| f.problem.setting == Setting::ZeroBoundary) {
        let a = decide(&f.problem, &opts()).unwrap();
        let mut j = f.problem.clone();
        j.setting = Setting::JohnDomain;
        let b = decide(&j, &opts()).unwrap();
        assert_eq!(a.kind, b.kind, "{}", f.name);
        assert_eq!(a.index_value, b.index_value);
        if let (Some(x), Some(y)) = (a.domain, b.domain) {
            for t in [1e-3, 1.0, 1e5, 1e11] {
                assert_eq!(x.eval(t).to_bits(), y.eval(t).to_bits(), "{}", f.name);
            }
        }
    }
}

#[test]
fn measure_with_full_dimension_is_zero_boundary() {
    let target = YoungFunctionSpec::Zygmund { q: 4.0, a: 1.0 };
    let a = decide(&zb(3, 1, target.clone()), &opts()).unwrap();
    let mp = EmbeddingProblem::new(3, 1, Setting::Measure, Some(3.0), target).unwrap();
    let b = decide(&mp, &opts()).unwrap();
    let (x, y) = (a.domain.unwrap(), b.domain.unwrap());
    for t in crate::grid::geometric(1e-6, 1e12, 4) {
        assert_eq!(x.eval(t).to_bits(), y.eval(t).to_bits());
    }
}

#[test]
fn all_fixtures_pass() {
    let failed: Vec<String> = paper_examples()
        .iter()
        .map(|f| check_fixture(f, &opts()))
        .filter(|o| !o.passed)
        .map(|o| format!("{}: {}", o.name, o.detail))
        .collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn integral_form_examples() {
    let present = integral_form(&zb(3, 1, YoungFunctionSpec::Power { p: 6.0 }), &opts()).unwrap();
    match present {
        IntegralForm::Present(d) => {
            let (v, _, exact) = upper_index(&d.b_ab, Scope::Global, &opts().construct.grid);
            assert!(exact && (v - 2.0).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
    match integral_form(&zb(3, 1, YoungFunctionSpec::Power { p: 1.2 }), &opts()).unwrap() {
        IntegralForm::Absent { condition, .. } => assert_eq!(condition, "Bz"),
        other => panic!("{other:?}"),
    }
    match integral_form(&zb(3, 1, YoungFunctionSpec::Linf), &opts()).unwrap() {
        IntegralForm::Absent { condition, .. } => assert_eq!(condition, "global index"),
        other => panic!("{other:?}"),
    }
    let trace = EmbeddingProblem::new(3, 1, Setting::Measure, Some(2.5), YoungFunctionSpec::Power { p: 1.1 }).unwrap();
    match integral_form(&trace, &opts()).unwrap() {
        IntegralForm::Absent { condition, .. } => assert_eq!(condition, "Bzt"),
        other => panic!("{other:?}"),
    }
    let ws = EmbeddingProblem::new(3, 1, Setting::WholeSpace, None, YoungFunctionSpec::Power { p: 6.0 }).unwrap();
    assert!(integral_form(&ws, &opts()).is_err());
}

#[test]
fn equivalent_targets_give_equivalent_domains() {
    let a = decide(&zb(3, 1, YoungFunctionSpec::Power { p: 4.0 }), &opts()).unwrap();
    let scaled = YoungFunctionSpec::Glue {
        zero: Box::new(YoungFunctionSpec::Power { p: 2.0 }),
        inf: Box::new(YoungFunctionSpec::Power { p: 4.0 }),
        t_s: 1.0,
    };
    let b = decide(&zb(3, 1, scaled), &opts()).unwrap();
    assert_eq!(a.kind, b.kind);
    let d = equivalent(a.domain.as_ref().unwrap(), b.domain.as_ref().unwrap(), &Regime::near_infinity());
    assert!(d.is_yes(), "{d:?}");
}
