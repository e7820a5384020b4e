use anyhow::{Context, Result};
use log::{info, warn};
use sirasym::asymptotics::{
    fit_gamma_kappa, gamma_aloha, gamma_aloha_beamforming, gamma_aloha_nakagami, gamma_csma_rayleigh_closed,
    gamma_kappa_csma, kappa_bounds_check, AsymptoticResult,
};
use sirasym::capacity::{
    condition_diagnostics, success_prob_bounds, tc_asymptotic, tc_bounds, tc_simulated, DiagnosticOptions,
    TcSimOptions,
};
use sirasym::channel::{FadingModel, LinkConfig, PathLossModel};
use sirasym::geom_proc::{
    aloha_thin, palm_scenario_sample, sample_matern_hardcore, sample_ppp, sample_thomas_cluster, MacProcess, Point,
    PointPattern, ProductDensityModel, Window,
};
use sirasym::outage_sim::{estimate_ps, truncation_radius, OutageEstimate, Scenario};
use std::path::Path;

use crate::config::ExperimentConfig;
use crate::exit::{ConfigError, ToleranceExceeded};
use crate::output::{num, opt, write_json, RowSeed, Table};

/// Everything a command produces, written after it returns.
#[derive(Debug, Default)]
pub struct Run {
    pub tables: Vec<Table>,
    pub json: Vec<(String, serde_json::Value)>,
    pub patterns: Vec<(String, PointPattern)>,
    pub row_seeds: Vec<RowSeed>,
    /// Set when outputs were produced but some check failed.
    pub failure: Option<ToleranceExceeded>,
}

impl Run {
    fn seed(&mut self, table: &str, row: usize, seed: u64) {
        self.row_seeds.push(RowSeed { table: table.into(), row, seed });
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<String>> {
        let mut names = Vec::new();
        for t in &self.tables {
            t.write(dir)?;
            names.push(format!("{}.csv", t.name));
        }
        for (name, value) in &self.json {
            write_json(dir, name, value)?;
            names.push(name.clone());
        }
        for (stem, p) in &self.patterns {
            let csv = dir.join(format!("{stem}.csv"));
            let f = std::fs::File::create(&csv).with_context(|| format!("creating {}", csv.display()))?;
            p.write_csv(std::io::BufWriter::new(f))?;
            write_json(dir, &format!("{stem}.json"), &p.sidecar())?;
            names.push(format!("{stem}.csv"));
            names.push(format!("{stem}.json"));
        }
        Ok(names)
    }
}

/// Seed for row `i` of a sweep.
fn row_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add(i as u64)
}

const OUTAGE_HEADER: &[&str] = &[
    "process", "params", "eta", "theta", "alpha", "R", "N", "ps", "se", "bias_bound", "samples", "seed",
];

fn outage_row(p: &MacProcess, link: &LinkConfig, e: &OutageEstimate, seed: u64) -> Vec<String> {
    vec![
        p.label().to_string(),
        p.params(),
        num(p.density()),
        num(link.theta),
        num(link.pathloss.alpha()),
        num(link.distance),
        num(link.noise),
        num(e.p_success),
        num(e.std_error),
        num(e.truncation_bias_bound),
        e.samples_used.to_string(),
        seed.to_string(),
    ]
}

fn simulate_point(cfg: &ExperimentConfig, p: &MacProcess, seed: u64) -> Result<OutageEstimate> {
    let r = truncation_radius(p, &cfg.link, cfg.budget.truncation_tol)?;
    Ok(estimate_ps(&Scenario::new(*p, cfg.link, r, cfg.budget.samples, seed)?)?)
}

fn outage_sweep(cfg: &ExperimentConfig, seed: u64, name: &str, run: &mut Run) -> Result<(Vec<f64>, Vec<OutageEstimate>)> {
    let grid = cfg.density_grid()?;
    let mut table = Table::new(name, OUTAGE_HEADER);
    let mut etas = Vec::new();
    let mut ests = Vec::new();
    for (i, (eta, p)) in grid.iter().enumerate() {
        let s = row_seed(seed, i);
        let e = simulate_point(cfg, p, s).with_context(|| format!("estimating P_s at eta = {eta}"))?;
        info!("{} eta={eta}: ps={} se={}", p.label(), e.p_success, e.std_error);
        table.push(outage_row(p, &cfg.link, &e, s));
        run.seed(name, i, s);
        etas.push(*eta);
        ests.push(e);
    }
    run.tables.push(table);
    Ok((etas, ests))
}

/// Plain realization of the transmitter process in `w`.
fn realize(p: &MacProcess, w: &Window, seed: u64) -> sirasym::Result<PointPattern> {
    // independent stream for the access coins
    let coins = seed ^ 0x5851_f42d_4c95_7f2d;
    match *p {
        MacProcess::PppAloha { p, node_density } => aloha_thin(&sample_ppp(node_density, w, seed)?, p, coins),
        MacProcess::MaternCsma(s) => sample_matern_hardcore(&s, w, seed),
        MacProcess::ThomasAloha { cluster, p } => aloha_thin(&sample_thomas_cluster(&cluster, w, seed)?, p, coins),
        MacProcess::ClusterMac { cluster, q } => sample_thomas_cluster(&cluster.cluster_thinned(q), w, seed),
    }
}

pub fn sample(cfg: &ExperimentConfig, seed: u64) -> Result<Run> {
    let mut run = Run::default();
    let w = Window::square(Point::origin(), cfg.sample.half_width)?;
    let mut table = Table::new("sample", &["process", "params", "eta", "count", "empirical_density", "file", "seed"]);
    for (i, (_, p)) in cfg.density_grid()?.iter().enumerate() {
        let s = row_seed(seed, i);
        let pattern = if cfg.sample.palm {
            palm_scenario_sample(p, &cfg.link, &w, s)?.pattern
        } else {
            realize(p, &w, s)?
        };
        let stem = format!("sample_{i:03}");
        table.push(vec![
            p.label().into(),
            p.params(),
            num(p.density()),
            pattern.len().to_string(),
            num(pattern.empirical_density()),
            format!("{stem}.csv"),
            s.to_string(),
        ]);
        run.seed("sample", i, s);
        run.patterns.push((stem, pattern));
    }
    run.tables.push(table);
    Ok(run)
}

pub fn simulate_outage(cfg: &ExperimentConfig, seed: u64) -> Result<Run> {
    let mut run = Run::default();
    outage_sweep(cfg, seed, "simulate_outage", &mut run)?;
    Ok(run)
}

/// Low-density constants (γ, κ) of the configured family.
fn family_asymptotics(p: &MacProcess, link: &LinkConfig, samples: u64, seed: u64) -> sirasym::Result<AsymptoticResult> {
    match p {
        MacProcess::PppAloha { .. } | MacProcess::ThomasAloha { .. } => gamma_aloha(&p.product_density(), link),
        MacProcess::MaternCsma(_) => gamma_kappa_csma(link, samples, seed),
        MacProcess::ClusterMac { .. } => Err(sirasym::Error::Unsupported(
            "whole-cluster access has no low-density expansion: P_s stays below one".into(),
        )),
    }
}

/// `Ok(None)` for operations the configuration does not support.
fn optional<T>(r: sirasym::Result<T>, what: &str) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(sirasym::Error::Unsupported(msg)) => {
            warn!("{what} skipped: {msg}");
            Ok(None)
        }
        Err(e) => Err(e).with_context(|| what.to_string()),
    }
}

fn nu_of(link: &LinkConfig) -> Result<u32> {
    Ok(link.sd_fading.taylor_head(0)?.nu)
}

pub fn gamma(cfg: &ExperimentConfig, seed: u64) -> Result<Run> {
    let mut run = Run::default();
    let p = &cfg.scenario;
    let r = family_asymptotics(p, &cfg.link, cfg.budget.samples, seed)?;
    let mut table = Table::new(
        "gamma",
        &["process", "params", "theta", "alpha", "R", "N", "nu", "gamma", "gamma_se", "kappa", "method", "seed"],
    );
    table.push(vec![
        p.label().into(),
        p.params(),
        num(cfg.link.theta),
        num(cfg.link.pathloss.alpha()),
        num(cfg.link.distance),
        num(cfg.link.noise),
        nu_of(&cfg.link)?.to_string(),
        num(r.gamma),
        opt(r.stderr),
        num(r.kappa),
        format!("{:?}", r.method),
        seed.to_string(),
    ]);
    run.seed("gamma", 0, seed);
    run.tables.push(table);
    Ok(run)
}

pub fn fit_kappa(cfg: &ExperimentConfig, seed: u64) -> Result<Run> {
    let mut run = Run::default();
    let (etas, ests) = outage_sweep(cfg, seed, "fit_kappa_sweep", &mut run)?;
    let fit = fit_gamma_kappa(&etas, &ests)?;
    let nu = nu_of(&cfg.link)?;
    let check = kappa_bounds_check(cfg.link.pathloss.alpha(), nu, fit.kappa, fit.kappa_stderr.unwrap_or(0.0));
    let diag = fit.fit.as_ref();
    let mut table = Table::new(
        "fit_kappa",
        &[
            "gamma", "gamma_se", "kappa", "kappa_se", "chi_square", "dof", "points_used", "kappa_lower", "kappa_upper",
            "kappa_within",
        ],
    );
    table.push(vec![
        num(fit.gamma),
        opt(fit.stderr),
        num(fit.kappa),
        opt(fit.kappa_stderr),
        opt(diag.map(|d| d.chi_square)),
        diag.map(|d| d.dof.to_string()).unwrap_or_default(),
        diag.map(|d| d.used.len().to_string()).unwrap_or_default(),
        num(check.lower),
        num(check.upper),
        check.within.to_string(),
    ]);
    run.tables.push(table);
    Ok(run)
}

const TC_HEADER: &[&str] = &["epsilon", "tc_asym", "tc_sim", "tc_sim_ci", "tcl", "tcu"];

pub fn tc(cfg: &ExperimentConfig, seed: u64) -> Result<Run> {
    let mut run = Run::default();
    let fam = &cfg.scenario;
    let asym = optional(family_asymptotics(fam, &cfg.link, cfg.budget.samples, seed), "asymptotic TC")?;
    let mut table = Table::new("tc", TC_HEADER);
    for (i, &eps) in cfg.epsilon_grid()?.iter().enumerate() {
        let s = row_seed(seed, i);
        let tc_asym = asym.as_ref().map(|r| tc_asymptotic(r.gamma, r.kappa, eps)).transpose()?;
        let bounds = optional(
            tc_bounds(eps, fam, &cfg.link, cfg.budget.samples, s, cfg.budget.rel_tol),
            "TC bounds",
        )?;
        let sim = if cfg.budget.simulate_tc {
            let opts = TcSimOptions {
                samples: cfg.budget.samples,
                seed: s,
                rel_tol: cfg.budget.rel_tol,
                ..Default::default()
            };
            Some(tc_simulated(eps, fam, &cfg.link, &opts).with_context(|| format!("simulated TC at epsilon = {eps}"))?)
        } else {
            None
        };
        table.push(vec![
            num(eps),
            opt(tc_asym),
            opt(sim.map(|x| x.tc)),
            opt(sim.map(|x| 0.5 * (x.ci_high - x.ci_low))),
            opt(bounds.map(|b| b.tcl)),
            opt(bounds.map(|b| b.tcu)),
        ]);
        run.seed("tc", i, s);
    }
    run.tables.push(table);
    Ok(run)
}

pub fn bounds(cfg: &ExperimentConfig, seed: u64) -> Result<Run> {
    let mut run = Run::default();
    let mut table = Table::new(
        "bounds",
        &[
            "process", "params", "eta", "mu", "sigma", "sigma_se", "sigma_method", "lower", "upper_sigma", "upper_pgfl",
            "upper_pgfl_se", "upper", "seed",
        ],
    );
    for (i, (eta, p)) in cfg.density_grid()?.iter().enumerate() {
        let s = row_seed(seed, i);
        let b = success_prob_bounds(p, &cfg.link, cfg.budget.samples, s)
            .with_context(|| format!("bounds at eta = {eta}"))?;
        let f = &b.functionals;
        table.push(vec![
            p.label().into(),
            p.params(),
            num(*eta),
            num(f.mu_eta),
            num(f.sigma_eta),
            num(f.sigma_std_error),
            serde_json::to_value(f.sigma_method)?.as_str().unwrap_or_default().to_string(),
            num(b.lower),
            num(b.upper_sigma),
            opt(b.upper_pgfl.map(|g| g.value)),
            opt(b.upper_pgfl.map(|g| g.std_error)),
            num(b.upper),
            s.to_string(),
        ]);
        run.seed("bounds", i, s);
    }
    run.tables.push(table);
    Ok(run)
}

pub fn diagnostics(cfg: &ExperimentConfig, seed: u64) -> Result<Run> {
    let mut run = Run::default();
    let etas: Vec<f64> = cfg.density_grid()?.iter().map(|g| g.0).collect();
    let d = &cfg.diagnostics;
    let opts = DiagnosticOptions {
        translate_grid: d.translate_grid,
        r1: d.r1.clone(),
        samples: cfg.budget.samples,
        seed,
        simulate: d.simulate,
        truncation_tol: cfg.budget.truncation_tol,
        ..Default::default()
    };
    let report = condition_diagnostics(&cfg.scenario, &etas, &cfg.link, &opts)?;
    let mut header: Vec<String> = vec!["eta".into(), "b1".into()];
    header.extend(d.r1.iter().map(|r| format!("b2_r{r}")));
    header.extend(["c1", "c2", "mu", "sigma", "ps", "ps_se"].map(String::from));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new("diagnostics", &header_refs);
    for (k, row) in report.rows.iter().enumerate() {
        let mut cells = vec![num(row.eta), num(row.b1)];
        cells.extend(row.b2.iter().map(|v| num(*v)));
        cells.extend([
            num(row.c1),
            num(row.c2),
            num(row.functionals.mu_eta),
            num(row.functionals.sigma_eta),
            opt(row.ps.map(|p| p.p_success)),
            opt(row.ps.map(|p| p.std_error)),
        ]);
        table.push(cells);
        run.seed("diagnostics", k, seed.wrapping_add(k as u64));
    }
    run.tables.push(table);
    run.json.push(("diagnostics_trends.json".into(), serde_json::to_value(&report.trends)?));
    Ok(run)
}

fn rayleigh_link(alpha: f64) -> Result<LinkConfig> {
    Ok(LinkConfig::new(1.0, 1.0, PathLossModel::unbounded(alpha)?)?)
}

/// Canonical comparison tables. Comparisons outside `cfg.suite.tolerances`
/// are collected and reported after every table is written.
pub fn reference_suite(cfg: &ExperimentConfig, seed: u64) -> Result<Run> {
    let mut run = Run::default();
    let tol = &cfg.suite.tolerances;
    let mut failures = Vec::new();
    let ppp = ProductDensityModel::PppConstant { density: 1.0 };

    let mut aloha = Table::new("reference_aloha_gamma", &["fading", "parameter", "alpha", "quadrature", "closed_form", "rel_error"]);
    for &alpha in &[3.0, 4.0] {
        for &m in &[1.0, 2.0, 4.0] {
            let l = rayleigh_link(alpha)?
                .with_sd_fading(FadingModel::Nakagami { m })?
                .with_interferer_fading(FadingModel::Nakagami { m })?;
            let q = gamma_aloha(&ppp, &l)?.gamma;
            let c = gamma_aloha_nakagami(m, 1.0, alpha, 1.0)?;
            aloha.push(compare_row("nakagami", m, alpha, q, c, tol.aloha_gamma_rel, &mut failures));
        }
        for &mr in &[1u32, 2, 4] {
            let l = rayleigh_link(alpha)?.with_sd_fading(FadingModel::Beamforming { antennas: mr })?;
            let q = gamma_aloha(&ppp, &l)?.gamma;
            let c = gamma_aloha_beamforming(mr, 1.0, alpha, 1.0)?;
            aloha.push(compare_row("beamforming", mr as f64, alpha, q, c, tol.aloha_gamma_rel, &mut failures));
        }
    }
    run.tables.push(aloha);

    let mut csma = Table::new("reference_csma_gamma", &["alpha", "assembly", "closed_form", "rel_error"]);
    for &alpha in &[3.0, 4.0, 5.0] {
        let a = gamma_kappa_csma(&rayleigh_link(alpha)?, cfg.budget.samples, seed)?.gamma;
        let c = gamma_csma_rayleigh_closed(1.0, alpha, 1.0)?;
        let rel = (a / c - 1.0).abs();
        if !(rel <= tol.csma_gamma_rel) {
            failures.push(format!("CSMA gamma alpha={alpha}: rel error {rel:e} > {:e}", tol.csma_gamma_rel));
        }
        csma.push(vec![num(alpha), num(a), num(c), num(rel)]);
    }
    run.tables.push(csma);

    let link = rayleigh_link(4.0)?;
    if cfg.suite.simulate {
        let mut kappa = Table::new(
            "reference_kappa",
            &["family", "kappa", "kappa_se", "gamma", "gamma_se", "kappa_theory", "within_bounds"],
        );
        let fams = [
            ("ppp_aloha", MacProcess::ppp_aloha(0.5)?, vec![2.5e-4, 5e-4, 1e-3, 2e-3, 4e-3], 1.0, tol.aloha_kappa_abs),
            (
                "matern_csma",
                MacProcess::matern_csma(1.0)?,
                vec![1e-4, 1.5e-4, 2.5e-4, 4e-4, 6e-4, 1e-3],
                2.0,
                tol.csma_kappa_abs,
            ),
        ];
        for (k, (name, fam, etas, theory, tol_k)) in fams.into_iter().enumerate() {
            let asym = family_asymptotics(&fam, &link, cfg.budget.samples, seed)?;
            let mut ests = Vec::new();
            for (i, &eta) in etas.iter().enumerate() {
                let s = row_seed(seed, 100 * (k + 1) + i);
                let p = fam.with_density(eta)?;
                // the outage here is far below any absolute tolerance
                let tol = cfg.budget.truncation_tol.min(1e-2 * asym.gamma * eta.powf(asym.kappa));
                let r = truncation_radius(&p, &link, tol)?;
                ests.push(estimate_ps(&Scenario::new(p, link, r, cfg.budget.samples, s)?)?);
                run.seed("reference_kappa", k, s);
            }
            let fit = fit_gamma_kappa(&etas, &ests).with_context(|| format!("kappa fit for {name}"))?;
            let check = kappa_bounds_check(4.0, 1, fit.kappa, fit.kappa_stderr.unwrap_or(0.0));
            if !((fit.kappa - theory).abs() <= tol_k && check.within) {
                failures.push(format!("{name} kappa {:.4} vs {theory} ± {tol_k}", fit.kappa));
            }
            kappa.push(vec![
                name.into(),
                num(fit.kappa),
                opt(fit.kappa_stderr),
                num(fit.gamma),
                opt(fit.stderr),
                num(theory),
                check.within.to_string(),
            ]);
        }
        run.tables.push(kappa);
    }

    let mut tcs = Table::new("reference_tc", &["family", "epsilon", "tc_asym", "tc_sim", "tc_sim_ci", "tcl", "tcu", "tc_exact"]);
    let c = std::f64::consts::PI.powi(2) / 2.0;
    let fams = [
        ("ppp_aloha", MacProcess::ppp_aloha(0.5)?, cfg.suite.simulate),
        ("matern_csma", MacProcess::matern_csma(1.0)?, false),
    ];
    for (k, (name, fam, simulate)) in fams.into_iter().enumerate() {
        let asym = family_asymptotics(&fam, &link, cfg.budget.samples, seed)?;
        for (i, &eps) in [0.01, 0.02, 0.05, 0.1].iter().enumerate() {
            let s = row_seed(seed, 1000 * (k + 1) + i);
            let b = tc_bounds(eps, &fam, &link, cfg.budget.samples, s, cfg.budget.rel_tol)?;
            let exact = (k == 0).then(|| -(1.0 - eps).ln() / c * (1.0 - eps));
            let sim = if simulate {
                let opts = TcSimOptions { samples: cfg.budget.samples, seed: s, rel_tol: cfg.budget.rel_tol, ..Default::default() };
                Some(tc_simulated(eps, &fam, &link, &opts)?)
            } else {
                None
            };
            if let Some(x) = exact {
                if !(b.tcl <= x && x <= b.tcu * (1.0 + cfg.budget.rel_tol)) {
                    failures.push(format!("{name} eps={eps}: exact TC {x:e} outside [{:e}, {:e}]", b.tcl, b.tcu));
                }
                if let Some(sm) = sim {
                    if !(sm.ci_low <= x && x <= sm.ci_high) {
                        failures.push(format!("{name} eps={eps}: exact TC {x:e} outside the simulated CI"));
                    }
                }
            }
            tcs.push(vec![
                name.into(),
                num(eps),
                num(tc_asymptotic(asym.gamma, asym.kappa, eps)?),
                opt(sim.map(|x| x.tc)),
                opt(sim.map(|x| 0.5 * (x.ci_high - x.ci_low))),
                num(b.tcl),
                num(b.tcu),
                opt(exact),
            ]);
            run.seed("reference_tc", tcs.rows.len() - 1, s);
        }
    }
    run.tables.push(tcs);

    if !failures.is_empty() {
        run.failure = Some(ToleranceExceeded(failures));
    }
    Ok(run)
}

fn compare_row(
    kind: &str,
    param: f64,
    alpha: f64,
    quad: f64,
    closed: f64,
    tol: f64,
    failures: &mut Vec<String>,
) -> Vec<String> {
    let rel = (quad / closed - 1.0).abs();
    if !(rel <= tol) {
        failures.push(format!("{kind} {param} alpha={alpha}: rel error {rel:e} > {tol:e}"));
    }
    vec![kind.into(), num(param), num(alpha), num(quad), num(closed), num(rel)]
}

/// Rejects a config that lacks what a command needs before any work starts.
pub fn precheck(cfg: &ExperimentConfig, needs_density: bool, needs_epsilon: bool) -> Result<(), ConfigError> {
    if needs_density {
        cfg.density_grid()?;
    }
    if needs_epsilon {
        cfg.epsilon_grid()?;
    }
    Ok(())
}
