use proptest::prelude::*;
use sirasym::geom_proc::*;
use sirasym::numeric::RunningStats;
use sirasym::rng::stream_rng;
use std::f64::consts::PI;

fn square(half: f64) -> Window {
    Window::square(Point::origin(), half).unwrap()
}

fn count_stats(reps: u64, mut f: impl FnMut(u64) -> PointPattern) -> RunningStats {
    (0..reps).map(|s| f(s).len() as f64).collect()
}

#[test]
fn ppp_counts_are_poisson() {
    let w = square(5.0);
    let s = count_stats(400, |seed| sample_ppp(0.5, &w, seed).unwrap());
    let mean = 0.5 * w.area();
    assert!((s.mean() - mean).abs() < 4.0 * s.std_error(), "{} vs {mean}", s.mean());
    assert!((s.variance() / mean - 1.0).abs() < 0.25);
}

#[test]
fn matern_density_and_hard_core() {
    for &a in &[1.0_f64, 2.0] {
        let spec = MaternSpec::new(a).unwrap();
        let w = square(12.0);
        let mut min_gap = f64::INFINITY;
        let s = count_stats(200, |seed| {
            let p = sample_matern_hardcore(&spec, &w, seed).unwrap();
            min_gap = min_gap.min(p.min_pair_distance().unwrap_or(f64::INFINITY));
            p
        });
        let expect = matern_density(a) * w.area();
        assert!((s.mean() - expect).abs() < 4.0 * s.std_error(), "a={a}: {} vs {expect}", s.mean());
        assert!(min_gap > a, "a={a}: gap {min_gap}");
    }
}

#[test]
fn thomas_density() {
    let spec = ClusterSpec::new(0.2, 6.0, 0.5).unwrap();
    let w = square(8.0);
    let s = count_stats(300, |seed| sample_thomas_cluster(&spec, &w, seed).unwrap());
    let expect = spec.density() * w.area();
    assert!((s.mean() - expect).abs() < 4.0 * s.std_error(), "{} vs {expect}", s.mean());
}

#[test]
fn palm_matern_acceptance_rate() {
    // acceptance per attempt equals the retention probability (1 − e^{−π})/π
    let process = MacProcess::matern_csma(1.0).unwrap();
    let mut sampler = PalmSampler::new(process, Window::disc(Point::origin(), 4.0).unwrap()).unwrap();
    let mut rng = stream_rng(5, 0);
    let mut buf = Vec::new();
    let n = 20_000;
    let attempts: u64 = (0..n).map(|_| sampler.sample_into(&mut rng, &mut buf).unwrap()).sum();
    let rate = n as f64 / attempts as f64;
    let expect = matern_density(1.0_f64);
    assert!((expect - 0.30459).abs() < 1e-4);
    // geometric attempts: sd of the rate estimate ≈ √((1 − q) q² / n)
    let se = ((1.0 - expect) * expect * expect / n as f64).sqrt();
    assert!((rate - expect).abs() < 4.0 * se, "{rate} vs {expect}");
}

#[test]
fn palm_fields_respect_window_and_hard_core() {
    let w = Window::disc(Point::new(1.0, 0.0), 15.0).unwrap();
    let mut buf = Vec::new();
    for process in [
        MacProcess::ppp_aloha(0.3).unwrap(),
        MacProcess::matern_csma(1.5).unwrap(),
        MacProcess::ThomasAloha { cluster: ClusterSpec::new(0.1, 5.0, 0.4).unwrap(), p: 0.5 },
    ] {
        let mut s = PalmSampler::new(process, w).unwrap();
        for seed in 0..20 {
            s.sample_into(&mut stream_rng(seed, 0), &mut buf).unwrap();
            assert!(buf.iter().all(|p| w.contains(p)));
            if let MacProcess::MaternCsma(spec) = process {
                assert!(buf.iter().all(|p| p.norm() > spec.exclusion_radius));
            }
        }
    }
    assert!(PalmSampler::new(MacProcess::ppp_aloha(0.3).unwrap(), Window::disc(Point::new(9.0, 0.0), 1.0).unwrap()).is_err());
}

#[test]
fn palm_ppp_mean_count() {
    let w = Window::disc(Point::new(1.0, 0.0), 6.0).unwrap();
    let mut s = PalmSampler::new(MacProcess::ppp_aloha(0.2).unwrap(), w).unwrap();
    let mut buf = Vec::new();
    let stats: RunningStats = (0..4000)
        .map(|i| {
            s.sample_into(&mut stream_rng(9, i), &mut buf).unwrap();
            buf.len() as f64
        })
        .collect();
    let expect = 0.2 * w.area();
    assert!((stats.mean() - expect).abs() < 4.0 * stats.std_error());
}

#[test]
fn scaled_pair_density_is_flat_beyond_two() {
    for i in 0..50 {
        let r = 2.0_f64 + i as f64 * 0.37;
        assert!((matern_scaled_rho2(r) - 1.0 / (PI * PI)).abs() < 1e-10);
    }
    assert_eq!(matern_scaled_rho2(0.99_f64), 0.0);
    // the general k-point routine agrees with the closed form
    for &r in &[1.1_f64, 1.5, 1.9, 2.5] {
        let k2 = matern_scaled_product_density(2, &[Point::new(r, 0.0)]).unwrap();
        assert!((k2 - matern_scaled_rho2(r)).abs() < 1e-12, "r={r}");
    }
}

#[test]
fn matern_pair_statistics_follow_scaling() {
    // K_a(c a)/a² depends on c only and matches the scaled model
    let model = ProductDensityModel::MaternScaled { a: 1.0 };
    let cs = [1.2_f64, 1.5, 2.0, 2.5];
    for &a in &[2.0_f64, 5.0] {
        let spec = MaternSpec::new(a).unwrap();
        let w = square(20.0 * a);
        let radii: Vec<f64> = cs.iter().map(|c| c * a).collect();
        let mut stats = vec![RunningStats::new(); cs.len()];
        for seed in 0..30 {
            let p = sample_matern_hardcore(&spec, &w, 100 + seed).unwrap();
            let k = empirical_ripley_k(&p, &radii).unwrap();
            for (s, v) in stats.iter_mut().zip(k) {
                s.push(v / (a * a));
            }
        }
        for (s, &c) in stats.iter().zip(&cs) {
            let expect = model.ripley_k(c).unwrap();
            assert!(
                (s.mean() - expect).abs() < 4.0 * s.std_error() + 1e-3 * expect,
                "a={a} c={c}: {} ± {} vs {expect}",
                s.mean(),
                s.std_error()
            );
        }
    }
}

#[test]
fn ppp_ripley_is_area() {
    let w = square(15.0);
    let radii = [0.5, 1.0, 2.0];
    let mut stats = vec![RunningStats::new(); radii.len()];
    for seed in 0..40 {
        let k = empirical_ripley_k(&sample_ppp(1.0, &w, seed).unwrap(), &radii).unwrap();
        for (s, v) in stats.iter_mut().zip(k) {
            s.push(v);
        }
    }
    for (s, r) in stats.iter().zip(radii) {
        assert!((s.mean() - PI * r * r).abs() < 4.0 * s.std_error(), "r={r}");
    }
}

#[test]
fn thomas_ripley_matches_closed_form() {
    let spec = ClusterSpec::new(0.5, 4.0, 0.3).unwrap();
    let model = ProductDensityModel::ThomasClosedForm(spec);
    let w = square(12.0);
    let radii = [0.3, 0.6, 1.2];
    let mut stats = vec![RunningStats::new(); radii.len()];
    for seed in 0..40 {
        let k = empirical_ripley_k(&sample_thomas_cluster(&spec, &w, seed).unwrap(), &radii).unwrap();
        for (s, v) in stats.iter_mut().zip(k) {
            s.push(v);
        }
    }
    for (s, r) in stats.iter().zip(radii) {
        let expect = model.ripley_k(r).unwrap();
        assert!((s.mean() - expect).abs() < 4.0 * s.std_error() + 0.02 * expect, "r={r}: {} vs {expect}", s.mean());
    }
}

#[test]
fn cluster_mac_keeps_whole_clusters() {
    let c = ClusterSpec::new(1.0, 15.0, 0.2).unwrap();
    let m = MacProcess::ClusterMac { cluster: c, q: 1.0 / 15.0 };
    assert!((m.density() - 1.0).abs() < 1e-12);
    let pcf = m.product_density().pcf(0.0);
    let thinned = MacProcess::ThomasAloha { cluster: c, p: 1.0 / 15.0 }.product_density().pcf(0.0);
    assert!(pcf > 10.0 * thinned);
}

#[test]
fn sampler_rejects_huge_windows() {
    assert!(matches!(sample_ppp(1.0, &square(1e5), 0), Err(sirasym::Error::PointCapExceeded { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn aloha_thinning_is_nested(p1 in 0.0f64..1.0, dp in 0.0f64..0.5, seed in 0u64..1000) {
        let base = sample_ppp(2.0, &square(3.0), seed).unwrap();
        let p2 = (p1 + dp).min(1.0);
        let a = aloha_thin(&base, p1, seed + 1).unwrap();
        let b = aloha_thin(&base, p2, seed + 1).unwrap();
        prop_assert!(a.len() <= b.len());
        prop_assert!(a.points.iter().all(|x| b.points.contains(x)));
    }

    #[test]
    fn palm_ppp_is_coupled_in_p(p1 in 0.01f64..0.5, dp in 0.0f64..0.5, seed in 0u64..1000) {
        let w = Window::disc(Point::new(1.0, 0.0), 8.0).unwrap();
        let mut lo = PalmSampler::new(MacProcess::ppp_aloha(p1).unwrap(), w).unwrap();
        let mut hi = PalmSampler::new(MacProcess::ppp_aloha(p1 + dp).unwrap(), w).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        lo.sample_into(&mut stream_rng(seed, 0), &mut a).unwrap();
        hi.sample_into(&mut stream_rng(seed, 0), &mut b).unwrap();
        prop_assert!(a.iter().all(|x| b.contains(x)));
    }

    #[test]
    fn disc_intersection_agrees_with_simulation(
        xs in proptest::collection::vec((-0.8f64..0.8, -0.8f64..0.8), 2..5),
        seed in 0u64..100,
    ) {
        let c: Vec<Point> = xs.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let exact = disc_intersection_area(&c, 1.0).unwrap();
        let (mc, se) = disc_intersection_area_mc(&c, 1.0, 40_000, &mut stream_rng(seed, 0)).unwrap();
        prop_assert!((exact - mc).abs() < 5.0 * se + 1e-9, "{} vs {} ± {}", exact, mc, se);
        prop_assert!(exact <= PI + 1e-12 && exact >= 0.0);
    }

    #[test]
    fn lens_area_is_bounded_and_decreasing(d in 0.0f64..2.0, dd in 0.0f64..1.0) {
        let a = lens_area(d, 1.0);
        let b = lens_area(d + dd, 1.0);
        prop_assert!(b <= a + 1e-14);
        prop_assert!(a <= PI + 1e-14);
    }

    #[test]
    fn matern_radius_inverts_density(eta in 0.001f64..0.95) {
        let a = matern_radius_for_density(eta).unwrap();
        prop_assert!((matern_density(a) / eta - 1.0).abs() < 1e-9);
    }
}
