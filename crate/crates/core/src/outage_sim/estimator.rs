use log::warn;
use rand::distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::truncation::{truncation_bias_bound, TRUNCATION_FLOOR_FACTOR};
use crate::channel::LinkConfig;
use crate::error::{invalid, Result};
use crate::geom_proc::{MacProcess, PalmSampler, Point, Window};
use crate::numeric::{merge_tree, RunningStats};
use crate::rng::stream_rng;

/// Replications per work unit. Merge order depends on it, so it is fixed.
pub const BATCH_SIZE: u64 = 1024;

pub const DEFAULT_SAMPLES: u64 = 100_000;

fn default_samples() -> u64 {
    DEFAULT_SAMPLES
}

/// One Palm Monte Carlo experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(flatten)]
    pub process: MacProcess,
    pub link: LinkConfig,
    /// Interferers farther than this from the receiver are ignored.
    pub truncation_radius: f64,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
}

impl Scenario {
    pub fn new(process: MacProcess, link: LinkConfig, truncation_radius: f64, samples: u64, seed: u64) -> Result<Self> {
        let s = Self {
            process,
            link,
            truncation_radius,
            samples,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.process.validate()?;
        self.link.validate()?;
        let floor = TRUNCATION_FLOOR_FACTOR * self.link.distance;
        if !(self.truncation_radius >= floor && self.truncation_radius.is_finite()) {
            return Err(invalid(
                "truncation_radius",
                format!("must be finite and at least {floor}, got {}", self.truncation_radius),
            ));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "need at least one replication"));
        }
        Ok(())
    }

    /// Disc of radius `truncation_radius` about the receiver.
    pub fn window(&self) -> Result<Window> {
        Window::disc(self.link.receiver(), self.truncation_radius)
    }
}

/// Success-probability estimate with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub p_success: f64,
    pub std_error: f64,
    pub samples_used: u64,
    /// Bound on the bias from ignoring interferers beyond the truncation radius.
    pub truncation_bias_bound: f64,
    /// Lipschitz constant of the signal CCDF entering the bias bound.
    pub lipschitz: f64,
    /// Mean rejection attempts per replication.
    pub mean_attempts: f64,
    /// Interferers found exactly on the receiver and nudged off it.
    pub singular_hits: u64,
}

impl OutageEstimate {
    /// Normal-approximation interval `p ± z·se`, clamped to [0, 1].
    pub fn confidence_interval(&self, z: f64) -> (f64, f64) {
        let h = z * self.std_error;
        ((self.p_success - h).max(0.0), (self.p_success + h).min(1.0))
    }
}

/// Accumulated output of [`palm_mc`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PalmMcOutput {
    pub stats: RunningStats,
    pub attempts: u64,
    pub singular_hits: u64,
}

/// Averages `f(interferers, gains)` over reduced-Palm realizations in the disc
/// of radius `truncation_radius` about the receiver.
///
/// Replication i draws geometry from stream 2i and gains from stream 2i + 1,
/// so runs that share a seed are coupled replication by replication.
pub fn palm_mc<F>(
    process: &MacProcess,
    link: &LinkConfig,
    truncation_radius: f64,
    samples: u64,
    seed: u64,
    f: F,
) -> Result<PalmMcOutput>
where
    F: Fn(&[Point], &[f64]) -> f64 + Sync,
{
    let rx = link.receiver();
    let window = Window::disc(rx, truncation_radius)?;
    let base = PalmSampler::new(*process, window)?;
    let gains = link.interferer_fading.sampler()?;
    let batches = samples.div_ceil(BATCH_SIZE);
    let parts = (0..batches)
        .into_par_iter()
        .map(|b| -> Result<(RunningStats, u64, u64)> {
            let mut sampler = base.clone();
            let mut pts = Vec::new();
            let mut h = Vec::new();
            let mut stats = RunningStats::new();
            let (mut attempts, mut hits) = (0, 0);
            let start = b * BATCH_SIZE;
            for i in start..(start + BATCH_SIZE).min(samples) {
                let mut geo = stream_rng(seed, 2 * i);
                attempts += sampler.sample_into(&mut geo, &mut pts)?;
                for p in pts.iter_mut() {
                    if *p == rx {
                        p.x += 1e-12;
                        hits += 1;
                    }
                }
                let mut g = stream_rng(seed, 2 * i + 1);
                h.clear();
                h.extend((0..pts.len()).map(|_| gains.sample(&mut g)));
                stats.push(f(&pts, &h));
            }
            Ok((stats, attempts, hits))
        })
        .collect::<Result<Vec<_>>>()?;
    let stats = merge_tree(&parts.iter().map(|p| p.0).collect::<Vec<_>>());
    let attempts = parts.iter().map(|p| p.1).sum();
    let singular_hits = parts.iter().map(|p| p.2).sum();
    if singular_hits > 0 {
        warn!("{singular_hits} interferer(s) coincided with the receiver and were displaced by 1e-12");
    }
    Ok(PalmMcOutput {
        stats,
        attempts,
        singular_hits,
    })
}

/// Palm Monte Carlo estimate of P_s = E[F_sd(θI/ℓ(R) + N)], averaging the
/// signal CCDF analytically given each interference draw.
pub fn estimate_ps(scenario: &Scenario) -> Result<OutageEstimate> {
    scenario.validate()?;
    let link = scenario.link;
    let rx = link.receiver();
    let pl = link.pathloss;
    let out = palm_mc(
        &scenario.process,
        &link,
        scenario.truncation_radius,
        scenario.samples,
        scenario.seed,
        |pts, h| {
            let i: f64 = pts.iter().zip(h).map(|(p, g)| g * pl.from_dist_sq(p.dist_sq(&rx))).sum();
            link.success_given_interference(i).unwrap_or(0.0)
        },
    )?;
    Ok(OutageEstimate {
        p_success: out.stats.mean(),
        std_error: out.stats.std_error(),
        samples_used: out.stats.count(),
        truncation_bias_bound: truncation_bias_bound(&scenario.process, &link, scenario.truncation_radius)?,
        lipschitz: link.sd_fading.lipschitz(),
        mean_attempts: out.attempts as f64 / out.stats.count() as f64,
        singular_hits: out.singular_hits,
    })
}
