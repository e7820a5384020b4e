use serde::{Deserialize, Serialize};
use sirasym::channel::LinkConfig;
use sirasym::geom_proc::{MacProcess, MaternSpec};

use crate::exit::ConfigError;

/// One experiment: a transmitter family, a link, the grid to sweep and the
/// Monte Carlo budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: MacProcess,
    pub link: LinkConfig,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub sample: SampleOptions,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default)]
    pub suite: SuiteOptions,
}

/// At most one density grid (`eta`, or `a` for CSMA) plus an optional outage
/// grid for `tc`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub eta: Option<Vec<f64>>,
    pub a: Option<Vec<f64>>,
    pub epsilon: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budget {
    /// Replications per Monte Carlo estimate.
    pub samples: u64,
    /// Truncation bias allowed in each P̂_s.
    pub truncation_tol: f64,
    /// Relative bisection width for TC searches.
    pub rel_tol: f64,
    /// Also run the simulated TC search in `tc`.
    pub simulate_tc: bool,
    pub threads: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            samples: 100_000,
            truncation_tol: 1e-4,
            rel_tol: 1e-3,
            simulate_tc: true,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleOptions {
    /// Half side of the square sampling window.
    pub half_width: f64,
    /// Sample the reduced-Palm interferer field instead of a plain realization.
    pub palm: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self { half_width: 10.0, palm: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsSection {
    /// Also estimate P̂_s at each density.
    pub simulate: bool,
    /// Radii R₁ for the B.2 statistic.
    pub r1: Vec<f64>,
    /// Unit-square translates per axis for the B.1 supremum.
    pub translate_grid: usize,
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        Self {
            simulate: false,
            r1: vec![0.5, 1.0, 2.0],
            translate_grid: 21,
        }
    }
}

/// Reference-suite switches and the tolerances its comparisons must meet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteOptions {
    /// Run the simulation-based tables (κ fits, simulated TC).
    pub simulate: bool,
    pub tolerances: Tolerances,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            simulate: true,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub aloha_gamma_rel: f64,
    pub csma_gamma_rel: f64,
    pub aloha_kappa_abs: f64,
    pub csma_kappa_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            aloha_gamma_rel: 1e-6,
            csma_gamma_rel: 1e-4,
            aloha_kappa_abs: 0.1,
            csma_kappa_abs: 0.15,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            ConfigError(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Default experiment for the reference suite when no config is given.
    pub fn reference() -> Self {
        Self::parse(
            r#"{"scenario":{"process":"ppp_aloha","p":0.05},
                "link":{"theta":1,"R":1,"pathloss":{"kind":"unbounded","alpha":4}}}"#,
        )
        .expect("built-in reference config is valid")
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.scenario.validate().map_err(|e| ConfigError(format!("scenario: {e}")))?;
        self.link.validate().map_err(|e| ConfigError(format!("link: {e}")))?;
        if self.sweep.eta.is_some() && self.sweep.a.is_some() {
            return Err(ConfigError("sweep: give either `eta` or `a`, not both".into()));
        }
        if let Some(g) = &self.sweep.eta {
            check_grid("sweep.eta", g, |v| v > 0.0)?;
        }
        if let Some(g) = &self.sweep.a {
            if !matches!(self.scenario, MacProcess::MaternCsma(_)) {
                return Err(ConfigError("sweep.a: only valid for matern_csma".into()));
            }
            check_grid("sweep.a", g, |v| v > 0.0)?;
        }
        if let Some(g) = &self.sweep.epsilon {
            check_grid("sweep.epsilon", g, |v| v > 0.0 && v < 1.0)?;
        }
        let b = &self.budget;
        if b.samples == 0 {
            return Err(ConfigError("budget.samples: must be positive".into()));
        }
        if !(b.truncation_tol > 0.0 && b.truncation_tol < 1.0) {
            return Err(ConfigError("budget.truncation_tol: must lie in (0, 1)".into()));
        }
        if !(b.rel_tol > 0.0 && b.rel_tol < 1.0) {
            return Err(ConfigError("budget.rel_tol: must lie in (0, 1)".into()));
        }
        if b.threads == Some(0) {
            return Err(ConfigError("budget.threads: must be positive".into()));
        }
        if !(self.sample.half_width > 0.0 && self.sample.half_width.is_finite()) {
            return Err(ConfigError("sample.half_width: must be positive".into()));
        }
        let d = &self.diagnostics;
        if d.r1.is_empty() || d.r1.iter().any(|r| !(*r > 0.0)) || d.translate_grid == 0 {
            return Err(ConfigError("diagnostics: r1 must be non-empty and positive, translate_grid positive".into()));
        }
        let t = &self.suite.tolerances;
        if [t.aloha_gamma_rel, t.csma_gamma_rel, t.aloha_kappa_abs, t.csma_kappa_abs]
            .iter()
            .any(|v| !(*v >= 0.0))
        {
            return Err(ConfigError("suite.tolerances: must be non-negative".into()));
        }
        Ok(())
    }

    /// The swept processes, in grid order, paired with their densities.
    pub fn density_grid(&self) -> Result<Vec<(f64, MacProcess)>, ConfigError> {
        let wrap = |e: sirasym::Error| ConfigError(format!("sweep: {e}"));
        if let Some(g) = &self.sweep.eta {
            return g
                .iter()
                .map(|&eta| Ok((eta, self.scenario.with_density(eta).map_err(wrap)?)))
                .collect();
        }
        if let (Some(g), MacProcess::MaternCsma(s)) = (&self.sweep.a, &self.scenario) {
            return g
                .iter()
                .map(|&a| {
                    let p = MacProcess::MaternCsma(MaternSpec::with_parent_density(a, s.parent_density).map_err(wrap)?);
                    Ok((p.density(), p))
                })
                .collect();
        }
        Err(ConfigError("sweep: this command needs an `eta` (or `a`) grid".into()))
    }

    pub fn epsilon_grid(&self) -> Result<&[f64], ConfigError> {
        self.sweep
            .epsilon
            .as_deref()
            .ok_or_else(|| ConfigError("sweep: this command needs an `epsilon` grid".into()))
    }
}

fn check_grid(name: &str, grid: &[f64], ok: impl Fn(f64) -> bool) -> Result<(), ConfigError> {
    if grid.is_empty() {
        return Err(ConfigError(format!("{name}: grid is empty")));
    }
    if let Some(v) = grid.iter().find(|v| !ok(**v)) {
        return Err(ConfigError(format!("{name}: value {v} out of range")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(ConfigError(format!("{name}: grid must be strictly increasing")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#""scenario":{"process":"ppp_aloha","p":0.1},"link":{"theta":1,"R":1,"pathloss":{"kind":"unbounded","alpha":4}}"#;

    #[test]
    fn parses_minimal_config() {
        let c = ExperimentConfig::parse(&format!("{{{BASE},\"sweep\":{{\"eta\":[0.01,0.02]}}}}")).unwrap();
        assert_eq!(c.budget, Budget::default());
        assert_eq!(c.density_grid().unwrap().len(), 2);
        assert!(c.epsilon_grid().is_err());
    }

    #[test]
    fn rejects_bad_grids_and_fields() {
        for sweep in [r#"{"eta":[]}"#, r#"{"eta":[0.02,0.01]}"#, r#"{"epsilon":[1.5]}"#, r#"{"a":[1]}"#] {
            let text = format!("{{{BASE},\"sweep\":{sweep}}}");
            assert!(ExperimentConfig::parse(&text).is_err(), "{sweep}");
        }
        let e = ExperimentConfig::parse(&format!("{{{BASE},\"bogus\":1}}")).unwrap_err();
        assert!(e.0.contains("line 1") && e.0.contains("bogus"), "{}", e.0);
    }

    #[test]
    fn a_grid_maps_to_densities() {
        let text = r#"{"scenario":{"process":"matern_csma","a":1},"link":{"theta":1,"R":1,"pathloss":{"kind":"unbounded","alpha":4}},"sweep":{"a":[1,2]}}"#;
        let g = ExperimentConfig::parse(text).unwrap().density_grid().unwrap();
        assert!(g[0].0 > g[1].0);
    }
}
