use sirasym::channel::{FadingModel, LinkConfig, PathLossModel};
use sirasym::geom_proc::MacProcess;
use sirasym::outage_sim::*;
use sirasym::Error;
use std::f64::consts::PI;

fn link() -> LinkConfig {
    LinkConfig::new(1.0, 1.0, PathLossModel::unbounded(4.0).unwrap()).unwrap()
}

fn run(process: MacProcess, link: LinkConfig, radius: f64, samples: u64, seed: u64) -> OutageEstimate {
    estimate_ps(&Scenario::new(process, link, radius, samples, seed).unwrap()).unwrap()
}

#[test]
fn poisson_rayleigh_matches_closed_form() {
    let eta = 0.05;
    let p = MacProcess::ppp_aloha(eta).unwrap();
    let r = truncation_radius(&p, &link(), 1e-4).unwrap();
    let e = run(p, link(), r, 20_000, 1);
    let exact = (-eta * PI * PI / 2.0).exp();
    assert!(e.truncation_bias_bound <= 1e-4);
    assert!((e.p_success - exact).abs() < 3.0 * e.std_error + e.truncation_bias_bound, "{e:?} vs {exact}");
}

#[test]
fn rayleigh_noise_factorizes_pathwise() {
    let p = MacProcess::ppp_aloha(0.05).unwrap();
    let base = run(p, link(), 20.0, 5_000, 4);
    for &n in &[0.1, 0.5] {
        let e = run(p, link().with_noise(n).unwrap(), 20.0, 5_000, 4);
        assert!((e.p_success / base.p_success - (-n as f64).exp()).abs() < 1e-12);
    }
}

#[test]
fn success_decreases_with_access_probability() {
    let mut last = 1.0;
    for &p in &[0.01, 0.02, 0.05, 0.1] {
        let e = run(MacProcess::ppp_aloha(p).unwrap(), link(), 30.0, 4_000, 8);
        assert!(e.p_success <= last, "p={p}");
        last = e.p_success;
    }
}

#[test]
fn success_increases_with_hard_core_radius() {
    let small = run(MacProcess::matern_csma(1.5).unwrap(), link(), 25.0, 10_000, 2);
    let large = run(MacProcess::matern_csma(3.0).unwrap(), link(), 25.0, 10_000, 3);
    let se = small.std_error.hypot(large.std_error);
    assert!(large.p_success - small.p_success > 3.0 * se, "{small:?} {large:?}");
    assert!(small.mean_attempts > 1.0);
}

#[test]
fn truncation_radius_scales_like_inverse_square_root() {
    // the Poisson bound is ∝ r^{2−α} = r^{−2} for α = 4
    let p = MacProcess::ppp_aloha(0.1).unwrap();
    let r1 = truncation_radius(&p, &link(), 1e-4).unwrap();
    let r2 = truncation_radius(&p, &link(), 0.5e-4).unwrap();
    assert!((r2 / r1 - 2f64.sqrt()).abs() < 1e-6, "{r1} {r2}");
    assert!(truncation_bias_bound(&p, &link(), r1).unwrap() <= 1e-4 * (1.0 + 1e-9));
    assert!(matches!(
        truncation_radius(&p, &link(), 1e-14),
        Err(Error::ToleranceUnreachable { .. })
    ));
    // floor of 10R
    assert_eq!(truncation_radius(&p, &link(), 1.0).unwrap(), 10.0);
}

#[test]
fn estimates_are_reproducible_across_thread_counts() {
    let s = Scenario::new(MacProcess::matern_csma(1.0).unwrap(), link(), 15.0, 3_000, 42).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| estimate_ps(&s).unwrap());
    let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap().install(|| estimate_ps(&s).unwrap());
    assert_eq!(one, three);
    let other = estimate_ps(&Scenario { seed: 43, ..s }).unwrap();
    assert_ne!(one.p_success, other.p_success);
}

#[test]
fn scenario_validation_and_serde() {
    let s: Scenario = serde_json::from_str(
        r#"{"process":"matern_csma","a":1.5,"link":{"theta":1,"R":1,"pathloss":{"kind":"unbounded","alpha":4}},"truncation_radius":20}"#,
    )
    .unwrap();
    assert_eq!(s.samples, DEFAULT_SAMPLES);
    assert_eq!(s.process, MacProcess::matern_csma(1.5).unwrap());
    let back: Scenario = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    assert!(Scenario::new(s.process, s.link, 5.0, 10, 0).is_err());
    assert!(Scenario::new(s.process, s.link, 20.0, 0, 0).is_err());
}

#[test]
fn confidence_interval_is_clamped() {
    let e = run(MacProcess::ppp_aloha(0.001).unwrap(), link(), 10.0, 2_000, 1);
    let (lo, hi) = e.confidence_interval(100.0);
    assert!(lo >= 0.0 && hi <= 1.0 && lo <= e.p_success && e.p_success <= hi);
}

#[test]
fn bounded_pathloss_moments_match_simulation() {
    let l = LinkConfig::new(1.0, 1.0, PathLossModel::bounded(4.0).unwrap())
        .unwrap()
        .with_interferer_fading(FadingModel::Nakagami { m: 2.0 })
        .unwrap();
    let p = MacProcess::ppp_aloha(0.2).unwrap();
    let radius = 30.0;
    let s = Scenario::new(p, l, radius, 40_000, 6).unwrap();
    for n in 1..=2 {
        let mc = interference_moment_mc(&s, n).unwrap();
        let an = interference_moment_analytic(&p, &l, n, Some(radius), 0, 0).unwrap();
        assert!((mc.value - an.value).abs() < 4.0 * mc.std_error, "n={n}: {mc:?} vs {an:?}");
    }
}

#[test]
fn matern_moments_match_simulation() {
    let p = MacProcess::matern_csma(2.0).unwrap();
    let radius = 25.0;
    let s = Scenario::new(p, link(), radius, 20_000, 12).unwrap();
    for n in 1..=2 {
        let mc = interference_moment_mc(&s, n).unwrap();
        let an = interference_moment_analytic(&p, &link(), n, Some(radius), 200_000, 3).unwrap();
        let se = mc.std_error.hypot(an.std_error);
        assert!((mc.value - an.value).abs() < 4.0 * se, "n={n}: {mc:?} vs {an:?}");
    }
}

#[test]
fn unbounded_poisson_moments_diverge() {
    let p = MacProcess::ppp_aloha(0.1).unwrap();
    assert!(matches!(
        interference_moment_analytic(&p, &link(), 1, None, 0, 0),
        Err(Error::Divergent(_))
    ));
    let s = Scenario::new(p, link(), 20.0, 10, 0).unwrap();
    assert!(interference_moment_mc(&s, 4).is_err());
}
