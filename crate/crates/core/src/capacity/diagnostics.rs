use serde::{Deserialize, Serialize};

use super::functionals::{mu_sigma, MuSigma};
use crate::channel::LinkConfig;
use crate::error::{invalid, Error, Result};
use crate::geom_proc::{MacProcess, ProductDensityModel};
use crate::outage_sim::{estimate_ps, truncation_radius, OutageEstimate, Scenario};

/// A statistic is treated as growing (B.1) or vanishing (B.2, C.2) as η → 0
/// when its log-log slope against η crosses these values.
pub const B1_MIN_SLOPE: f64 = -0.25;
pub const B2_MAX_SLOPE: f64 = 0.25;
pub const C2_MIN_SLOPE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticOptions {
    /// Translates per axis when approximating sup_x 𝒦_η(S₁ + x).
    pub translate_grid: usize,
    /// Midpoint nodes per axis inside each unit square.
    pub square_nodes: usize,
    /// Radii R₁ for the B.2 statistic η K_η(R₁η^{−1/2}).
    pub r1: Vec<f64>,
    /// Budget for simulated σ_η and, when `simulate` is set, for P̂_s.
    pub samples: u64,
    pub seed: u64,
    /// Also estimate the success probability at each η.
    pub simulate: bool,
    /// Truncation bias allowed in each P̂_s.
    pub truncation_tol: f64,
}

impl Default for DiagnosticOptions {
    fn default() -> Self {
        Self {
            translate_grid: 21,
            square_nodes: 24,
            r1: vec![0.5, 1.0, 2.0],
            samples: 100_000,
            seed: 0,
            simulate: false,
            truncation_tol: 1e-4,
        }
    }
}

/// Condition statistics at one density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRow {
    pub eta: f64,
    /// Grid estimate of sup_x 𝒦_η(S₁ + x), S₁ = [0, 1]².
    pub b1: f64,
    /// η K_η(R₁η^{−1/2}) for each requested R₁.
    pub b2: Vec<f64>,
    /// E[ΣΔ²]/σ_η.
    pub c1: f64,
    /// σ_η/μ_η.
    pub c2: f64,
    pub functionals: MuSigma,
    pub ps: Option<OutageEstimate>,
}

/// Low-density behaviour read off the η grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionTrends {
    pub b1_slope: f64,
    pub b1_bounded: bool,
    /// Per R₁.
    pub b2_slopes: Vec<f64>,
    pub b2_positive: bool,
    pub c1_at_smallest_eta: f64,
    pub c1_slope: f64,
    pub c1_above_two: bool,
    pub c2_slope: f64,
    pub c2_vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub family: String,
    pub rows: Vec<ConditionRow>,
    pub trends: ConditionTrends,
}

/// sup over a grid of unit-square translates of ∫_{S₁+x} g, with the grid
/// covering the region where g ≠ 1. An estimate of the supremum, not a bound.
pub fn b1_statistic(model: &ProductDensityModel, grid: usize, nodes: usize) -> Result<f64> {
    if grid < 2 || nodes == 0 {
        return Err(invalid("translate_grid", "need at least 2 translates and 1 node per axis"));
    }
    let reach = model.correlation_range() + 1.0;
    let step = 2.0 * reach / (grid - 1) as f64;
    let h = 1.0 / nodes as f64;
    let mut best = 0.0_f64;
    for i in 0..grid {
        for j in 0..grid {
            // lower-left corners span [−reach − ½, reach − ½]²
            let (x0, y0) = (-reach - 0.5 + i as f64 * step, -reach - 0.5 + j as f64 * step);
            let mut acc = 0.0;
            for u in 0..nodes {
                let x = x0 + (u as f64 + 0.5) * h;
                for v in 0..nodes {
                    let y = y0 + (v as f64 + 0.5) * h;
                    acc += model.pcf(x.hypot(y));
                }
            }
            best = best.max(acc * h * h);
        }
    }
    Ok(best)
}

/// η K_η(R₁η^{−1/2}), the mean number of other transmitters within R₁η^{−1/2}
/// of a typical one.
pub fn b2_statistic(model: &ProductDensityModel, r1: f64) -> Result<f64> {
    let eta = model.density();
    Ok(eta * model.ripley_k(r1 / eta.sqrt())?)
}

fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Evaluates the spreading conditions B.1/B.2 and the capacity conditions
/// C.1/C.2 along the density family of `family` (exponential signal gain).
pub fn condition_diagnostics(
    family: &MacProcess,
    etas: &[f64],
    link: &LinkConfig,
    opts: &DiagnosticOptions,
) -> Result<ConditionReport> {
    if etas.len() < 2 {
        return Err(Error::Empty("need at least two densities"));
    }
    let mut rows = Vec::with_capacity(etas.len());
    for (k, &eta) in etas.iter().enumerate() {
        let process = family.with_density(eta)?;
        let model = process.product_density();
        let ms = mu_sigma(&process, link, opts.samples, opts.seed.wrapping_add(k as u64))?;
        let ps = if opts.simulate {
            let radius = truncation_radius(&process, link, opts.truncation_tol)?;
            Some(estimate_ps(&Scenario::new(process, *link, radius, opts.samples, opts.seed)?)?)
        } else {
            None
        };
        rows.push(ConditionRow {
            eta,
            b1: b1_statistic(&model, opts.translate_grid, opts.square_nodes)?,
            b2: opts.r1.iter().map(|&r| b2_statistic(&model, r)).collect::<Result<_>>()?,
            c1: ms.delta_sq_eta / ms.sigma_eta,
            c2: ms.sigma_eta / ms.mu_eta,
            functionals: ms,
            ps,
        });
    }
    let col = |f: &dyn Fn(&ConditionRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let b1_slope = log_slope(etas, &col(&|r| r.b1));
    let b2_slopes: Vec<f64> = (0..opts.r1.len()).map(|i| log_slope(etas, &col(&|r| r.b2[i]))).collect();
    let c1_slope = log_slope(etas, &col(&|r| r.c1));
    let c2_slope = log_slope(etas, &col(&|r| r.c2));
    let smallest = rows
        .iter()
        .min_by(|a, b| a.eta.total_cmp(&b.eta))
        .expect("at least two rows");
    let trends = ConditionTrends {
        b1_slope,
        b1_bounded: b1_slope > B1_MIN_SLOPE,
        b2_positive: smallest.b2.iter().any(|&v| v > 0.0) && b2_slopes.iter().any(|&s| s < B2_MAX_SLOPE),
        b2_slopes,
        c1_at_smallest_eta: smallest.c1,
        c1_slope,
        c1_above_two: smallest.c1 > 2.0,
        c2_slope,
        c2_vanishing: c2_slope > C2_MIN_SLOPE,
    };
    Ok(ConditionReport {
        family: family.label().to_string(),
        rows,
        trends,
    })
}
