use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::construct::{build_b, ConstructOptions, HardyParams, Variant};
use crate::young::tests::catalog;
use crate::young::Verdict;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn p31() -> HardyParams {
    HardyParams::sobolev(3, 1, 3.0).unwrap()
}

fn random_step(rng: &mut ChaCha8Rng, cells: usize) -> SampledFunction {
    let mut edges = vec![0.0];
    let mut x = 0.0;
    for _ in 0..cells {
        x += rng.gen_range(0.01..1.0);
        edges.push(x);
    }
    let values = (0..cells).map(|_| rng.gen_range(0.0..10.0)).collect();
    SampledFunction::new(edges, values).unwrap()
}

/// Cell values equal to exact cell averages of `r^{-θ}` on `(0, 1)`.
fn averaged_power(theta: f64, edges: Vec<f64>) -> SampledFunction {
    let values = edges
        .windows(2)
        .map(|w| (w[1].powf(1.0 - theta) - w[0].powf(1.0 - theta)) / ((1.0 - theta) * (w[1] - w[0])))
        .collect();
    SampledFunction::new(edges, values).unwrap()
}

#[test]
fn rejects_bad_samples() {
    assert!(SampledFunction::new(vec![0.0, 1.0], vec![]).is_err());
    assert!(SampledFunction::new(vec![0.1, 1.0], vec![1.0]).is_err());
    assert!(SampledFunction::new(vec![0.0, 1.0, 1.0], vec![1.0, 2.0]).is_err());
    assert!(SampledFunction::new(vec![0.0, 1.0], vec![-1.0]).is_err());
    assert!(SampledFunction::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
}

#[test]
fn rearrange_identity_and_swap() {
    let f = SampledFunction::new(vec![0.0, 0.5, 2.0], vec![3.0, 1.0]).unwrap();
    assert_eq!(rearrange(&f), f);
    let g = SampledFunction::new(vec![0.0, 1.5, 2.0], vec![1.0, 3.0]).unwrap();
    let gs = rearrange(&g);
    assert_eq!(gs.edges(), &[0.0, 0.5, 2.0]);
    assert_eq!(gs.values(), &[3.0, 1.0]);
}

#[test]
fn rearrange_is_equimeasurable() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_step(&mut rng, 10_000);
    let fs = rearrange(&f);
    assert!(fs.is_nonincreasing());
    for k in 0..100 {
        let y = 10.0 * k as f64 / 100.0;
        let (a, b) = (f.distribution(y), fs.distribution(y));
        assert!((a - b).abs() <= 1e-9 * f.length(), "y = {y}: {a} vs {b}");
    }
}

#[test]
fn doublestar_examples() {
    let c = SampledFunction::new(geometric_edges(1e-3, 1.0, 8), vec![2.5; 25]).unwrap();
    for v in doublestar(&c).unwrap().values() {
        assert!(rel(*v, 2.5) < 1e-14);
    }
    let chi = SampledFunction::indicator(0.25, 1.0, 1.0).unwrap();
    for s in [0.01, 0.1, 0.25] {
        assert!(rel(doublestar_at(&chi, s), 1.0) < 1e-15);
    }
    for s in [0.3, 0.5, 1.0] {
        assert!(rel(doublestar_at(&chi, s), 0.25 / s) < 1e-14);
    }
    let up = SampledFunction::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0]).unwrap();
    assert!(doublestar(&up).is_err());
}

#[test]
fn doublestar_dominates_fstar() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fs = rearrange(&random_step(&mut rng, 2000));
    let fss = doublestar(&fs).unwrap();
    assert!(fss.is_nonincreasing());
    // oracle: cumulative sums on the doubled partition
    let mut acc = 0.0;
    for i in 0..fs.len() {
        let (a, b) = (fs.edges()[i], fs.edges()[i + 1]);
        let mid = 0.5 * (a + b);
        let at_mid = (acc + fs.values()[i] * (mid - a)) / mid;
        acc += fs.values()[i] * (b - a);
        let at_right = acc / b;
        assert!(at_mid >= fs.values()[i] * (1.0 - 1e-12));
        assert!(at_right >= fs.values()[i] * (1.0 - 1e-12));
        assert!(rel(fss.values()[i], at_right) < 1e-10);
        assert!(rel(doublestar_at(&fs, mid), at_mid) < 1e-10);
    }
}

#[test]
fn luxemburg_of_indicator_is_fundamental() {
    for a in catalog() {
        for s in [1e-6, 1e-3, 0.2, 0.7] {
            let f = SampledFunction::indicator(s, 1.0, 1.0).unwrap();
            let want = a.fundamental(s);
            let got = luxemburg_norm(&f, &a);
            assert!(rel(got, want) < 1e-8, "{}: s = {s}: {got} vs {want}", a.label());
        }
    }
}

#[test]
fn luxemburg_examples() {
    let sq = YoungFunction::power(2.0).unwrap();
    let c = SampledFunction::new(geometric_edges(1e-4, 1.0, 16), vec![3.0; 65]).unwrap();
    for p in [1.0, 2.0, 5.0] {
        let a = YoungFunction::power(p).unwrap();
        assert!(rel(luxemburg_norm(&c, &a), 3.0) < 1e-10);
    }
    // cell values chosen so that Σ v² Δ = ∫ r^{-1/2} dr = 2 exactly
    let edges = geometric_edges(1e-12, 1.0, 32);
    let values = edges.windows(2).map(|w| (2.0 * (w[1].sqrt() - w[0].sqrt()) / (w[1] - w[0])).sqrt()).collect();
    let f = SampledFunction::new(edges, values).unwrap();
    assert!(rel(luxemburg_norm(&f, &sq), 2f64.sqrt()) < 1e-8);
    let zero = SampledFunction::new(vec![0.0, 1.0], vec![0.0]).unwrap();
    assert_eq!(luxemburg_norm(&zero, &sq), 0.0);
}

#[test]
fn luxemburg_for_linf_is_max() {
    let f = averaged_power(0.5, geometric_edges(1e-12, 1.0, 8));
    let n = luxemburg_norm(&f, &YoungFunction::linf());
    assert!(rel(n, f.values()[0]) < 1e-10, "L^inf norm is the max: {n}");
}

#[test]
fn marcinkiewicz_examples() {
    let sq = YoungFunction::power(2.0).unwrap();
    let f = averaged_power(0.5, geometric_edges(1e-12, 1.0, 32));
    assert!(rel(marcinkiewicz_norm(&f, &sq), 2.0) < 1e-10);
    let zero = SampledFunction::new(vec![0.0, 1.0], vec![0.0]).unwrap();
    assert_eq!(marcinkiewicz_norm(&zero, &sq), 0.0);
    for a in catalog() {
        for r in [1e-4, 0.3] {
            let chi = SampledFunction::indicator(r, 1.0, 1.0).unwrap();
            let m = marcinkiewicz_norm(&chi, &a);
            let phi = a.fundamental(r);
            assert!(m >= phi * (1.0 - 1e-12) && m <= 2.0 * phi, "{}: {m} vs {phi}", a.label());
        }
    }
}

#[test]
fn weak_type_below_marcinkiewicz_below_luxemburg() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in catalog() {
        for _ in 0..5 {
            let mut f = random_step(&mut rng, 200);
            let l = f.length();
            let edges = f.edges().iter().map(|e| e / l).collect();
            f = SampledFunction::new(edges, f.values().to_vec()).unwrap();
            let w = weak_type_sup(&f, &a);
            let m = marcinkiewicz_norm(&f, &a);
            let n = luxemburg_norm(&f, &a);
            assert!(w <= m * (1.0 + 1e-12), "{}", a.label());
            assert!(m <= n * (1.0 + 1e-9), "{}: {m} > {n}", a.label());
        }
    }
}

#[test]
fn holder_sanity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for a in catalog().into_iter().filter(|a| a.is_finite_valued()) {
        let ac = a.conjugate();
        for _ in 0..4 {
            let edges = geometric_edges(1e-6, 1.0, 8);
            let n = edges.len() - 1;
            let f = SampledFunction::new(edges.clone(), (0..n).map(|_| rng.gen_range(0.0..5.0)).collect()).unwrap();
            let g = SampledFunction::new(edges, (0..n).map(|_| rng.gen_range(0.0..5.0)).collect()).unwrap();
            let fg: f64 = (0..n).map(|i| f.values()[i] * g.values()[i] * f.measure(i)).sum();
            let bound = 2.0 * luxemburg_norm(&f, &a) * luxemburg_norm(&g, &ac);
            assert!(fg <= bound * (1.0 + 1e-9), "{}: {fg} > {bound}", a.label());
        }
    }
}

#[test]
fn hardy_of_constant() {
    let p = HardyParams::new(0.4, 1.5).unwrap();
    let f = SampledFunction::new(geometric_edges(1e-9, 1.0, 16), vec![1.0; 145]).unwrap();
    let exact = |s: f64| (1.0 - s.powf(p.alpha * p.beta)) / p.alpha;
    for s in [1e-5, 0.01, 0.37, 0.9] {
        assert!(rel(hardy_at(&f, &p, s), exact(s)) < 1e-12);
    }
    // cell averages against Simpson on each cell
    let hf = hardy_apply(&f, &p).unwrap();
    assert!(hf.is_nonincreasing());
    for i in (10..hf.len()).step_by(13) {
        let (a, b) = (hf.edges()[i], hf.edges()[i + 1]);
        let k = 64;
        let h = (b - a) / k as f64;
        let mut acc = exact(a) + exact(b);
        for j in 1..k {
            acc += if j % 2 == 1 { 4.0 } else { 2.0 } * exact(a + j as f64 * h);
        }
        let avg = acc * h / 3.0 / (b - a);
        assert!(rel(hf.values()[i], avg) < 1e-9, "cell {i}");
    }
}

#[test]
fn hardy_of_indicator() {
    let p = p31();
    let r = 0.2f64;
    let f = SampledFunction::indicator(r, 1.0, 1.0).unwrap();
    for s in [1e-4f64, 0.05, 0.19] {
        let want = (r.powf(p.alpha) - s.powf(p.alpha)) / p.alpha;
        assert!(rel(hardy_at(&f, &p, s), want) < 1e-12);
    }
    assert_eq!(hardy_at(&f, &p, 0.3), 0.0);
}

#[test]
fn hardy_of_power_at_edges() {
    let p = HardyParams::new(0.5, 1.0).unwrap();
    let edges = geometric_edges(1e-10, 1.0, 8);
    // cells integrate r^{-α/2} r^{α-1} exactly
    let values: Vec<f64> = edges
        .windows(2)
        .map(|w| {
            let h = p.alpha / 2.0;
            ((w[1].powf(h) - w[0].powf(h)) / h) / ((w[1].powf(p.alpha) - w[0].powf(p.alpha)) / p.alpha)
        })
        .collect();
    let f = SampledFunction::new(edges.clone(), values).unwrap();
    let exact = |s: f64| (1.0 - s.powf(p.alpha / 2.0)) / (p.alpha / 2.0);
    for e in edges.iter().skip(1).step_by(4).take(20) {
        assert!(rel(hardy_at(&f, &p, *e), exact(*e)) < 1e-10, "s = {e}");
    }
}

#[test]
fn hardy_inf_uses_support_length() {
    let p = p31();
    let l = 1e6;
    let f = SampledFunction::new(geometric_edges(1e-3, l, 8), vec![1.0; 73]).unwrap();
    assert!(hardy_apply(&f, &p).is_err());
    let hf = hardy_inf_apply(&f, &p).unwrap();
    assert!(rel(hf.length(), l) < 1e-12);
    let exact = |s: f64| (l.powf(p.alpha) - s.powf(p.alpha)) / p.alpha;
    for s in [1e-2, 1.0, 1e3] {
        assert!(rel(hardy_at(&f, &p, s), exact(s)) < 1e-12);
    }
    let chi = SampledFunction::indicator(10.0, l, 1.0).unwrap();
    assert!(rel(hardy_at(&chi, &p, 2.0), (10f64.powf(p.alpha) - 2f64.powf(p.alpha)) / p.alpha) < 1e-12);
}

#[test]
fn integral_condition_examples() {
    let p = p31();
    let opts = IntegralCheckOptions::default();
    let b = YoungFunction::power(6.0).unwrap();
    let own = build_b(&b, &p, Variant::Global, &ConstructOptions::default()).unwrap().b_ab;
    let d = integral_condition_check(&own, &b, &p, &opts).unwrap();
    assert_eq!(d.verdict, Verdict::Yes, "{:?}", d.diagnostics);
    let bigger = own.scale(2.0, 1.0).unwrap();
    assert_eq!(integral_condition_check(&bigger, &b, &p, &opts).unwrap().verdict, Verdict::Yes);
    let l1 = YoungFunction::power(1.0).unwrap();
    assert_eq!(integral_condition_check(&l1, &b, &p, &opts).unwrap().verdict, Verdict::No);
    // not globally dominating: fails as t -> 0
    let p25 = YoungFunction::power(2.5).unwrap();
    assert_eq!(integral_condition_check(&p25, &b, &p, &opts).unwrap().verdict, Verdict::No);
    let low = YoungFunction::power(2.0).unwrap();
    assert!(integral_condition_check(&low, &YoungFunction::power(1.2).unwrap(), &p, &opts).is_err());
}

fn quick() -> ProbeOptions {
    ProbeOptions { trials: 4, ..ProbeOptions::default() }
}

#[test]
fn probe_l1_pair_bounded() {
    let p = p31();
    let a = YoungFunction::power(1.0).unwrap();
    let b = YoungFunction::power(p.threshold()).unwrap();
    let r = norm_probe(&a, &b, &p, &quick()).unwrap();
    assert_eq!(r.verdict, ProbeVerdict::Bounded, "{:?} {:?}", r.sups, r.deltas);
    assert_eq!(r.trials.len(), STRUCTURED_TRIALS + 4);
    assert!(r.trials.iter().all(|t| t.ratios.iter().all(|x| *x >= 0.0)));
}

#[test]
fn probe_sharpness_for_power_target() {
    let p = p31();
    let b = YoungFunction::power(6.0).unwrap();
    let opt = YoungFunction::power(2.0).unwrap();
    let r = norm_probe(&opt, &b, &p, &quick()).unwrap();
    assert_eq!(r.verdict, ProbeVerdict::Bounded, "{:?} {:?}", r.sups, r.deltas);
    let below = YoungFunction::power(1.9).unwrap();
    let r = norm_probe(&below, &b, &p, &quick()).unwrap();
    assert_eq!(r.verdict, ProbeVerdict::UnboundedTrend);
    let power_trial = &r.trials[0].ratios;
    assert!(power_trial[1] >= 2.0 * power_trial[0] && power_trial[2] >= 2.0 * power_trial[1], "{power_trial:?}");
}

#[test]
fn probe_constructed_domain_bounded() {
    let p = p31();
    let b = YoungFunction::zygmund(6.0, 0.0).unwrap();
    let dom = build_b(&b, &p, Variant::FiniteWindow, &ConstructOptions::default()).unwrap();
    let r = norm_probe(&dom.b_ab, &b, &p, &quick()).unwrap();
    assert_eq!(r.verdict, ProbeVerdict::Bounded, "{:?} {:?}", r.sups, r.deltas);
}

#[test]
fn weak_and_strong_agree() {
    let p = p31();
    let b = YoungFunction::power(6.0).unwrap();
    for (a, want) in [(2.0, ProbeVerdict::Bounded), (1.9, ProbeVerdict::UnboundedTrend)] {
        let r = weak_vs_strong_probe(&YoungFunction::power(a).unwrap(), &b, &p, &quick()).unwrap();
        assert!(r.verdicts_agree, "{a}: {:?} vs {:?}", r.strong.verdict, r.weak.verdict);
        assert_eq!(r.strong.verdict, want);
        assert!(r.weak_over_strong.iter().all(|x| *x <= 1.0 + 1e-9), "{:?}", r.weak_over_strong);
    }
}

#[test]
fn probe_is_deterministic_and_serializes() {
    let p = p31();
    let a = YoungFunction::power(2.0).unwrap();
    let b = YoungFunction::power(6.0).unwrap();
    let o = ProbeOptions { depths: [6.0, 12.0, 24.0], trials: 3, seed: 42, ..ProbeOptions::default() };
    let x = serde_json::to_string(&norm_probe(&a, &b, &p, &o).unwrap()).unwrap();
    let y = serde_json::to_string(&norm_probe(&a, &b, &p, &o).unwrap()).unwrap();
    assert_eq!(x, y);
    for key in ["\"trials\"", "\"sup_ratio\"", "\"deltas\"", "\"verdict\""] {
        assert!(x.contains(key));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hardy_is_linear_and_monotone(
        vals in prop::collection::vec(0.0f64..10.0, 25),
        extra in prop::collection::vec(0.0f64..3.0, 25),
        a in 0.1f64..4.0,
        b in 0.1f64..4.0,
        alpha in 0.1f64..0.9,
    ) {
        let p = HardyParams::new(alpha, 1.0 / (1.0 - alpha)).unwrap();
        let edges = geometric_edges(1e-6, 1.0, 4);
        let f = SampledFunction::new(edges.clone(), vals.clone()).unwrap();
        let g = SampledFunction::new(edges.clone(), extra.clone()).unwrap();
        let comb: Vec<f64> = vals.iter().zip(&extra).map(|(x, y)| a * x + b * y).collect();
        let h = SampledFunction::new(edges.clone(), comb).unwrap();
        let (hf, hg, hh) = (hardy_apply(&f, &p).unwrap(), hardy_apply(&g, &p).unwrap(), hardy_apply(&h, &p).unwrap());
        for i in 0..hh.len() {
            let want = a * hf.values()[i] + b * hg.values()[i];
            prop_assert!((hh.values()[i] - want).abs() <= 1e-12 * want.max(1.0));
        }
        let bigger: Vec<f64> = vals.iter().zip(&extra).map(|(x, y)| x + y).collect();
        let fb = hardy_apply(&SampledFunction::new(edges, bigger).unwrap(), &p).unwrap();
        for i in 0..fb.len() {
            prop_assert!(fb.values()[i] >= hf.values()[i] * (1.0 - 1e-12));
        }
        prop_assert!(hf.is_nonincreasing() || hf.values().windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }

    #[test]
    fn fstar_below_fss_and_norm_bounds(vals in prop::collection::vec(0.0f64..100.0, 1..40), q in 1.0f64..5.0) {
        let n = vals.len();
        let edges: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let f = SampledFunction::new(edges, vals).unwrap();
        let fs = rearrange(&f);
        let fss = doublestar(&fs).unwrap();
        for i in 0..fs.len() {
            prop_assert!(fss.values()[i] >= fs.values()[i] * (1.0 - 1e-12));
        }
        let a = YoungFunction::power(q).unwrap();
        prop_assert!(weak_type_sup(&f, &a) <= marcinkiewicz_norm(&f, &a) * (1.0 + 1e-12));
        prop_assert!((f.integral() - fs.integral()).abs() <= 1e-9 * f.integral().max(1.0));
    }

    #[test]
    fn luxemburg_is_homogeneous(vals in prop::collection::vec(0.01f64..50.0, 1..30), c in 0.01f64..100.0, q in 1.0f64..4.0) {
        let n = vals.len();
        let edges: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let f = SampledFunction::new(edges, vals).unwrap();
        let a = YoungFunction::power(q).unwrap();
        let n1 = luxemburg_norm(&f, &a);
        let n2 = luxemburg_norm(&f.scaled(c).unwrap(), &a);
        prop_assert!(((n2 / (c * n1)) - 1.0).abs() < 1e-10);
    }
}
