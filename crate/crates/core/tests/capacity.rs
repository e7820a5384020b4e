use proptest::prelude::*;
use sirasym::capacity::*;
use sirasym::channel::{LinkConfig, PathLossModel};
use sirasym::geom_proc::{ClusterSpec, MacProcess, MaternSpec, ProductDensityModel};
use sirasym::outage_sim::palm_mc;
use std::f64::consts::PI;

const RAYLEIGH_INTEGRAL: f64 = PI * PI / 2.0;

fn link() -> LinkConfig {
    LinkConfig::new(1.0, 1.0, PathLossModel::unbounded(4.0).unwrap()).unwrap()
}

/// Δ(x) = 1 − 1/(1 + θ(R/d)⁴) for exponential interferer gains.
fn delta(d2: f64) -> f64 {
    let s = 1.0 / (d2 * d2);
    s / (1.0 + s)
}

fn exact_ppp_tc(eps: f64) -> f64 {
    -(1.0 - eps).ln() / RAYLEIGH_INTEGRAL * (1.0 - eps)
}

#[test]
fn asymptotic_tc_examples() {
    for &e in &[0.01_f64, 0.3, 0.7] {
        assert!((tc_asymptotic(1.0, 1.0, e).unwrap() - e * (1.0 - e)).abs() < 1e-15);
    }
    let tc = tc_asymptotic(RAYLEIGH_INTEGRAL, 1.0, 0.05).unwrap();
    assert!((tc - 9.625e-3).abs() < 1e-6, "{tc}");
    let ratio = tc_asymptotic(3.0_f64, 2.0, 0.04).unwrap() / tc_asymptotic(3.0, 2.0, 0.01).unwrap();
    assert!((ratio - 2.0 * 0.96 / 0.99).abs() < 1e-12);
    assert!(tc_asymptotic(1.0, 1.0, 1.0).is_err());
    assert!(tc_asymptotic(-1.0, 1.0, 0.1).is_err());
}

#[test]
fn poisson_functionals() {
    for &eta in &[0.01, 0.05, 0.2] {
        let ms = mu_sigma(&MacProcess::ppp_aloha(eta).unwrap(), &link(), 100, 0).unwrap();
        assert_eq!(ms.sigma_method, SigmaMethod::Factorized);
        assert!((ms.mu_eta / (eta * RAYLEIGH_INTEGRAL) - 1.0).abs() < 1e-8);
        assert!((ms.sigma_eta / ms.mu_eta.powi(2) - 1.0).abs() < 1e-12);
    }
    let m = |d| mu_eta(&ProductDensityModel::PppConstant { density: d }, &link()).unwrap();
    assert!((m(0.3) / m(0.1) - 3.0).abs() < 1e-9);
}

#[test]
fn simulated_mean_delta_matches_mu() {
    let cases = [
        (MacProcess::ppp_aloha(0.05).unwrap(), 40.0),
        (MacProcess::matern_csma(2.0).unwrap(), 40.0),
    ];
    for (p, radius) in cases {
        let rx = link().receiver();
        let out = palm_mc(&p, &link(), radius, 20_000, 3, |pts, _| {
            pts.iter().map(|x| delta(x.dist_sq(&rx))).sum()
        })
        .unwrap();
        let mu = mu_eta(&p.product_density(), &link()).unwrap();
        // dropped tail ≤ η π / r² with ρ⁽²⁾ ≤ η² beyond the hard core
        let tail = p.density() * PI / (radius * radius);
        let est = out.stats.estimate();
        assert!((est.value - mu).abs() < 4.0 * est.std_error + tail, "{}: {est:?} vs {mu}", p.label());
    }
}

#[test]
fn matern_sigma_matches_palm_double_sum() {
    let p = MacProcess::matern_csma(2.5).unwrap();
    let ms = mu_sigma(&p, &link(), 200_000, 5).unwrap();
    assert_eq!(ms.sigma_method, SigmaMethod::ImportanceSampling);
    let rx = link().receiver();
    let out = palm_mc(&p, &link(), 30.0, 20_000, 9, |pts, _| {
        let (s, s2) = pts.iter().fold((0.0, 0.0), |(s, s2), x| {
            let d = delta(x.dist_sq(&rx));
            (s + d, s2 + d * d)
        });
        s * s - s2
    })
    .unwrap()
    .stats
    .estimate();
    let se = out.std_error.hypot(ms.sigma_std_error);
    assert!((out.value - ms.sigma_eta).abs() < 4.0 * se, "{out:?} vs {ms:?}");
}

#[test]
fn poisson_bounds_sandwich_exact() {
    for &eta in &[0.01, 0.05, 0.1] {
        let b = success_prob_bounds(&MacProcess::ppp_aloha(eta).unwrap(), &link(), 100, 0).unwrap();
        let exact = (-eta * RAYLEIGH_INTEGRAL).exp();
        assert!(b.lower <= exact && exact <= b.upper, "{b:?} vs {exact}");
        assert!(b.lower <= b.upper);
        let g = b.upper_pgfl.unwrap();
        assert_eq!(g.std_error, 0.0);
        assert!(b.upper <= b.upper_sigma);
    }
}

#[test]
fn bounds_tend_to_one() {
    for p in [MacProcess::ppp_aloha(1e-4).unwrap(), MacProcess::matern_csma(1.0).unwrap().with_density(1e-3).unwrap()] {
        let b = success_prob_bounds(&p, &link(), 20_000, 1).unwrap();
        assert!(b.lower > 0.99 && b.upper <= 1.0 + 1e-9 && b.lower <= b.upper, "{b:?}");
    }
}

#[test]
fn noise_scales_bounds() {
    let p = MacProcess::ppp_aloha(0.05).unwrap();
    let quiet = success_prob_bounds(&p, &link(), 100, 0).unwrap();
    let noisy = success_prob_bounds(&p, &link().with_noise(0.2).unwrap(), 100, 0).unwrap();
    let f = (-0.2f64).exp();
    assert!((noisy.lower - f * quiet.lower).abs() < 1e-14);
    assert!((noisy.upper - f * quiet.upper).abs() < 1e-14);
    assert!(tc_bounds(0.1, &p, &link().with_noise(0.2).unwrap(), 100, 0, 1e-4).is_err());
}

#[test]
fn non_rayleigh_signal_is_rejected() {
    let l = link().with_sd_fading(sirasym::channel::FadingModel::Nakagami { m: 2.0 }).unwrap();
    assert!(mu_sigma(&MacProcess::ppp_aloha(0.1).unwrap(), &l, 10, 0).is_err());
}

#[test]
fn poisson_tc_bounds() {
    let fam = MacProcess::ppp_aloha(0.5).unwrap();
    let mut last_gap = f64::INFINITY;
    for &eps in &[0.1, 0.05, 0.01] {
        let b = tc_bounds(eps, &fam, &link(), 100, 0, 1e-6).unwrap();
        let tcl = eps * (1.0 - eps) / RAYLEIGH_INTEGRAL;
        assert!((b.tcl / tcl - 1.0).abs() < 1e-9, "{b:?}");
        let exact = exact_ppp_tc(eps);
        assert!(b.tcl <= exact && exact <= b.tcu * (1.0 + 1e-5), "{b:?} vs {exact}");
        let gap = b.tcu / b.tcl - 1.0;
        assert!(gap < last_gap);
        last_gap = gap;
    }
    assert!(last_gap < 0.01);
}

#[test]
fn csma_tc_bounds_are_ordered() {
    let fam = MacProcess::matern_csma(1.0).unwrap();
    let b = tc_bounds(0.05, &fam, &link(), 20_000, 1, 1e-3).unwrap();
    assert!(0.0 < b.tcl && b.tcl <= b.tcu, "{b:?}");
    assert!(b.eta_lower < 0.99);
}

#[test]
fn poisson_tc_simulation_matches_exact() {
    let fam = MacProcess::ppp_aloha(0.5).unwrap();
    let opts = TcSimOptions { samples: 40_000, seed: 3, ..Default::default() };
    let s = tc_simulated(0.05, &fam, &link(), &opts).unwrap();
    let exact = exact_ppp_tc(0.05);
    assert!(s.ci_low <= exact && exact <= s.ci_high, "{s:?} vs {exact}");
    assert!(s.slope < 0.0);
    let tiny = tc_simulated(1e-3, &fam, &link(), &opts).unwrap();
    assert!(tiny.tc < s.tc / 10.0);
    assert!(tc_simulated(0.0, &fam, &link(), &opts).is_err());
}

#[test]
fn curve_ordering() {
    let eps = [0.01, 0.05];
    let fam = MacProcess::ppp_aloha(0.5).unwrap();
    let bounds: Vec<_> = eps.iter().map(|&e| tc_bounds(e, &fam, &link(), 100, 0, 1e-6).unwrap()).collect();
    let curve = TcCurve::asymptotic(&eps, RAYLEIGH_INTEGRAL, 1.0).unwrap().with_bounds(&bounds);
    assert!(curve.ordering_holds());
    let mut broken = curve.clone();
    broken.tcu = Some(vec![0.0, 0.0]);
    let sim = tc_simulated(0.05, &fam, &link(), &TcSimOptions { samples: 5_000, ..Default::default() }).unwrap();
    let broken = broken.with_simulated(vec![sim, sim]);
    assert!(!broken.ordering_holds());
    assert!(TcCurve::asymptotic(&[], 1.0, 1.0).is_err());
}

#[test]
fn mean_functional_is_convex_in_density() {
    // local convexity of η ↦ μ_η on the evaluated grids
    let etas: Vec<f64> = (1..=12).map(|k| 0.01 * k as f64).collect();
    for fam in [MacProcess::ppp_aloha(1.0).unwrap(), MacProcess::matern_csma(1.0).unwrap()] {
        let mu: Vec<f64> = etas
            .iter()
            .map(|&e| mu_eta(&fam.with_density(e).unwrap().product_density(), &link()).unwrap())
            .collect();
        for w in mu.windows(3) {
            assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-9 * w[1], "{}: {w:?}", fam.label());
        }
    }
}

#[test]
fn poisson_diagnostics_pass() {
    let r = condition_diagnostics(
        &MacProcess::ppp_aloha(0.5).unwrap(),
        &[0.04, 0.02, 0.01, 0.005],
        &link(),
        &DiagnosticOptions::default(),
    )
    .unwrap();
    let t = &r.trends;
    assert!(t.b1_bounded && t.b2_positive && t.c1_above_two && t.c2_vanishing, "{t:?}");
    assert!((t.c2_slope - 1.0).abs() < 1e-6);
    for row in &r.rows {
        assert!((row.b1 - 1.0).abs() < 1e-6);
        assert!((row.b2[1] - PI).abs() < 1e-6);
    }
}

#[test]
fn whole_cluster_access_breaks_b1() {
    let fam = MacProcess::ClusterMac { cluster: ClusterSpec::new(1.0, 15.0, 0.1).unwrap(), q: 1.0 };
    let opts = DiagnosticOptions { samples: 2_000, translate_grid: 9, square_nodes: 12, ..Default::default() };
    let r = condition_diagnostics(&fam, &[0.8, 0.4, 0.2, 0.1], &link(), &opts).unwrap();
    assert!(!r.trends.b1_bounded, "{:?}", r.trends);
    assert!((r.trends.b1_slope + 1.0).abs() < 0.1);
    assert!(!r.trends.c2_vanishing);
}

#[test]
fn diagnostics_validate_grid() {
    let fam = MacProcess::ppp_aloha(0.5).unwrap();
    assert!(condition_diagnostics(&fam, &[0.01], &link(), &DiagnosticOptions::default()).is_err());
}

#[test]
fn matern_nearest_interferer_scales_like_inverse_root_density() {
    let base = MacProcess::MaternCsma(MaternSpec::new(1.0).unwrap());
    let rx = link().receiver();
    let scaled: Vec<f64> = [0.08, 0.02]
        .iter()
        .map(|&eta| {
            let p = base.with_density(eta).unwrap();
            let b2 = b2_statistic(&p.product_density(), 1.0).unwrap();
            assert!(b2 > 0.1, "{b2}");
            let radius = 8.0 / eta.sqrt();
            let out = palm_mc(&p, &link(), radius, 4_000, 2, |pts, _| {
                pts.iter().map(|x| x.dist_sq(&rx)).fold(f64::INFINITY, f64::min).sqrt()
            })
            .unwrap();
            out.stats.mean() * eta.sqrt()
        })
        .collect();
    assert!((scaled[0] / scaled[1] - 1.0).abs() < 0.15, "{scaled:?}");
}

proptest! {
    #[test]
    fn asymptotic_tc_peaks_at_inverse_kappa_plus_one(gamma in 0.1f64..20.0, kappa in 1.0f64..4.0, u in 0.01f64..0.98) {
        let tc = |e| tc_asymptotic(gamma, kappa, e).unwrap();
        let peak = 1.0 / (kappa + 1.0);
        let below = u * peak;
        prop_assert!(tc(below + 0.01 * (peak - below)) > tc(below));
        let above = peak + u * (1.0 - peak);
        prop_assert!(tc(above + 0.01 * (1.0 - above)) < tc(above));
    }

    #[test]
    fn bounds_are_ordered(eta in 0.001f64..0.5, theta in 0.2f64..5.0) {
        let l = LinkConfig::new(theta, 1.0, PathLossModel::unbounded(4.0).unwrap()).unwrap();
        let b = success_prob_bounds(&MacProcess::ppp_aloha(eta).unwrap(), &l, 10, 0).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.functionals.mu_eta >= 0.0 && b.functionals.sigma_eta >= 0.0);
    }
}
