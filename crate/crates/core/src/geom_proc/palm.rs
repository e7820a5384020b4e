//! MAC processes and reduced-Palm sampling of the interferer field seen by a
//! typical transmitter at the origin.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::samplers::{for_each_mark_ordered, for_each_thomas_daughter, poisson_count, MaternEngine};
use super::{ClusterSpec, MaternSpec, Point, PointPattern, ProcessTag, ProductDensityModel, Window};
use crate::channel::LinkConfig;
use crate::error::{invalid, Error, Result};
use crate::rng::stream_rng;

/// Cap on Matérn Palm rejection attempts per realization.
pub const PALM_REJECTION_CAP: u64 = 10_000_000;

fn one() -> f64 {
    1.0
}

/// Transmitter process: a node process plus a medium-access rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "process", rename_all = "snake_case")]
pub enum MacProcess {
    /// Poisson nodes of density `node_density`, each transmitting with probability `p`.
    PppAloha {
        p: f64,
        #[serde(default = "one")]
        node_density: f64,
    },
    /// Matérn type-II transmitter set.
    MaternCsma(MaternSpec),
    /// Thomas nodes, each transmitting independently with probability `p`.
    ThomasAloha { cluster: ClusterSpec, p: f64 },
    /// Thomas nodes where each whole cluster transmits with probability `q`.
    ClusterMac { cluster: ClusterSpec, q: f64 },
}

impl MacProcess {
    pub fn ppp_aloha(p: f64) -> Result<Self> {
        let m = MacProcess::PppAloha { p, node_density: 1.0 };
        m.validate()?;
        Ok(m)
    }

    pub fn matern_csma(a: f64) -> Result<Self> {
        Ok(MacProcess::MaternCsma(MaternSpec::new(a)?))
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |name: &'static str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(invalid(name, format!("must lie in [0, 1], got {v}")))
            }
        };
        match self {
            MacProcess::PppAloha { p, node_density } => {
                prob("p", *p)?;
                if !(*node_density > 0.0 && node_density.is_finite()) {
                    return Err(invalid("node_density", format!("must be positive, got {node_density}")));
                }
                Ok(())
            }
            MacProcess::MaternCsma(spec) => spec.validate(),
            MacProcess::ThomasAloha { cluster, p } => {
                cluster.validate()?;
                prob("p", *p)
            }
            MacProcess::ClusterMac { cluster, q } => {
                cluster.validate()?;
                prob("q", *q)
            }
        }
    }

    /// Short label used in result tables.
    pub fn label(&self) -> &'static str {
        match self {
            MacProcess::PppAloha { .. } => "ppp_aloha",
            MacProcess::MaternCsma(_) => "matern_csma",
            MacProcess::ThomasAloha { .. } => "thomas_aloha",
            MacProcess::ClusterMac { .. } => "cluster_mac",
        }
    }

    /// Compact parameter string, e.g. `p=0.01`.
    pub fn params(&self) -> String {
        match self {
            MacProcess::PppAloha { p, node_density } => format!("p={p};lambda={node_density}"),
            MacProcess::MaternCsma(s) => format!("a={};lambda={}", s.exclusion_radius, s.parent_density),
            MacProcess::ThomasAloha { cluster, p } => format!(
                "lambda_p={};c={};sigma={};p={p}",
                cluster.parent_density, cluster.mean_cluster_size, cluster.spread
            ),
            MacProcess::ClusterMac { cluster, q } => format!(
                "lambda_p={};c={};sigma={};q={q}",
                cluster.parent_density, cluster.mean_cluster_size, cluster.spread
            ),
        }
    }

    /// Transmitter density η.
    pub fn density(&self) -> f64 {
        match self {
            MacProcess::PppAloha { p, node_density } => p * node_density,
            MacProcess::MaternCsma(s) => s.density(),
            MacProcess::ThomasAloha { cluster, p } => cluster.density() * p,
            MacProcess::ClusterMac { cluster, q } => cluster.density() * q,
        }
    }

    /// Same family with the access parameter set so the density is `eta`:
    /// `p` for ALOHA, `a` for CSMA and `q` for cluster MAC.
    pub fn with_density(&self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(invalid("eta", format!("must be positive, got {eta}")));
        }
        let access = |name: &'static str, full: f64| {
            let v = eta / full;
            if v <= 1.0 {
                Ok(v)
            } else {
                Err(invalid(name, format!("density {eta} exceeds the node density {full}")))
            }
        };
        let out = match *self {
            MacProcess::PppAloha { node_density, .. } => MacProcess::PppAloha {
                p: access("p", node_density)?,
                node_density,
            },
            MacProcess::MaternCsma(s) => {
                // η(a) = λ η₁(a√λ)
                let full = s.parent_density;
                let a1 = super::matern_radius_for_density(access("eta", full)?)?;
                MacProcess::MaternCsma(MaternSpec::with_parent_density(a1 / full.sqrt(), full)?)
            }
            MacProcess::ThomasAloha { cluster, .. } => MacProcess::ThomasAloha {
                cluster,
                p: access("p", cluster.density())?,
            },
            MacProcess::ClusterMac { cluster, .. } => MacProcess::ClusterMac {
                cluster,
                q: access("q", cluster.density())?,
            },
        };
        Ok(out)
    }

    /// Second-order structure of the transmitter process.
    pub fn product_density(&self) -> ProductDensityModel {
        match *self {
            MacProcess::PppAloha { .. } => ProductDensityModel::PppConstant { density: self.density() },
            MacProcess::MaternCsma(s) => ProductDensityModel::MaternExact(s),
            MacProcess::ThomasAloha { cluster, p } => ProductDensityModel::ThomasClosedForm(cluster.thinned(p)),
            MacProcess::ClusterMac { cluster, q } => {
                ProductDensityModel::ThomasClosedForm(cluster.cluster_thinned(q))
            }
        }
    }

    /// Largest interaction range of a single point (hard core or cluster
    /// spread); used to size windows.
    pub fn interaction_range(&self) -> f64 {
        match self {
            MacProcess::PppAloha { .. } => 0.0,
            MacProcess::MaternCsma(s) => 2.0 * s.exclusion_radius,
            MacProcess::ThomasAloha { cluster, .. } | MacProcess::ClusterMac { cluster, .. } => {
                cluster.padding()
            }
        }
    }
}

/// Draws reduced-Palm interferer fields, reusing buffers between calls.
#[derive(Debug, Clone)]
pub struct PalmSampler {
    process: MacProcess,
    window: Window,
    matern: Option<MaternEngine>,
}

impl PalmSampler {
    /// `window` must contain the origin.
    pub fn new(process: MacProcess, window: Window) -> Result<Self> {
        process.validate()?;
        window.validate()?;
        if !window.contains(&Point::origin()) {
            return Err(Error::DegenerateWindow("Palm window must contain the origin".into()));
        }
        let matern = match process {
            MacProcess::MaternCsma(spec) => Some(MaternEngine::new(spec, &window)?),
            _ => None,
        };
        Ok(Self {
            process,
            window,
            matern,
        })
    }

    pub fn process(&self) -> &MacProcess {
        &self.process
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Replaces `out` with one interferer field. Returns the number of
    /// rejection attempts (1 except for CSMA).
    pub fn sample_into<R: Rng + ?Sized>(&mut self, rng: &mut R, out: &mut Vec<Point>) -> Result<u64> {
        out.clear();
        let window = self.window;
        match self.process {
            MacProcess::PppAloha { p, node_density } => {
                for_each_mark_ordered(node_density, &window, p, rng, |x, _| out.push(x));
                Ok(1)
            }
            MacProcess::MaternCsma(spec) => {
                let n = spec.mean_neighborhood();
                // A parent at the origin with mark m is retained iff no other
                // parent in B(o, a) has a smaller mark, which has probability
                // e^{−N̄ m}.
                let mut attempts = 0u64;
                let m0 = loop {
                    if attempts >= PALM_REJECTION_CAP {
                        return Err(Error::RejectionCapExceeded { cap: PALM_REJECTION_CAP });
                    }
                    attempts += 1;
                    let m: f64 = rng.random();
                    let u: f64 = rng.random();
                    if u < (-n * m).exp() {
                        break m;
                    }
                };
                let engine = self.matern.as_mut().expect("engine built for CSMA");
                engine.run(rng, &window, Some(m0), |x, _| out.push(x));
                Ok(attempts)
            }
            MacProcess::ThomasAloha { cluster, p } => {
                own_cluster(&cluster, &window, rng, p, out)?;
                for_each_thomas_daughter(&cluster, &window, rng, |x, rng| {
                    if rng.random::<f64>() < p {
                        out.push(x);
                    }
                })?;
                Ok(1)
            }
            MacProcess::ClusterMac { cluster, q } => {
                own_cluster(&cluster, &window, rng, 1.0, out)?;
                for_each_thomas_daughter(&cluster.cluster_thinned(q), &window, rng, |x, _| out.push(x))?;
                Ok(1)
            }
        }
    }
}

/// Siblings of the typical daughter: the parent sits at a Gaussian offset and
/// the other daughters form a Poisson cluster around it.
fn own_cluster<R: Rng + ?Sized>(
    cluster: &ClusterSpec,
    window: &Window,
    rng: &mut R,
    p: f64,
    out: &mut Vec<Point>,
) -> Result<()> {
    let normal = Normal::new(0.0, cluster.spread).map_err(|e| invalid("spread", e.to_string()))?;
    let parent = Point::new(normal.sample(rng), normal.sample(rng));
    let k = poisson_count(cluster.mean_cluster_size, rng);
    for _ in 0..k {
        let x = Point::new(parent.x + normal.sample(rng), parent.y + normal.sample(rng));
        let u: f64 = rng.random();
        if u < p && window.contains(&x) {
            out.push(x);
        }
    }
    Ok(())
}

/// One reduced-Palm realization together with its rejection count.
#[derive(Debug, Clone, PartialEq)]
pub struct PalmSample {
    pub pattern: PointPattern,
    pub attempts: u64,
}

/// Interferer field seen by a typical transmitter at the origin whose
/// receiver sits at `(R, 0)`. The origin itself is not part of the output.
pub fn palm_scenario_sample(process: &MacProcess, link: &LinkConfig, window: &Window, seed: u64) -> Result<PalmSample> {
    link.validate()?;
    if !window.contains(&link.receiver()) {
        return Err(Error::DegenerateWindow("Palm window must contain the receiver".into()));
    }
    let mut sampler = PalmSampler::new(*process, *window)?;
    let mut rng = stream_rng(seed, 0);
    let mut points = Vec::new();
    let attempts = sampler.sample_into(&mut rng, &mut points)?;
    Ok(PalmSample {
        pattern: PointPattern {
            points,
            marks: None,
            window: *window,
            nominal_density: process.density(),
            process_tag: ProcessTag::PalmScenario,
            seed: Some(seed),
        },
        attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::PathLossModel;

    fn link() -> LinkConfig {
        LinkConfig::new(1.0, 1.0, PathLossModel::unbounded(4.0).unwrap()).unwrap()
    }

    #[test]
    fn serde_shapes() {
        let m: MacProcess = serde_json::from_str(r#"{"process":"matern_csma","a":1.5}"#).unwrap();
        assert_eq!(m, MacProcess::matern_csma(1.5).unwrap());
        let p: MacProcess = serde_json::from_str(r#"{"process":"ppp_aloha","p":0.1}"#).unwrap();
        assert_eq!(p, MacProcess::ppp_aloha(0.1).unwrap());
    }

    #[test]
    fn zero_access_gives_no_interferers() {
        let w = Window::disc(Point::new(1.0, 0.0), 30.0).unwrap();
        let s = palm_scenario_sample(&MacProcess::ppp_aloha(0.0).unwrap(), &link(), &w, 9).unwrap();
        assert!(s.pattern.is_empty());
    }

    #[test]
    fn matern_palm_respects_hard_core() {
        let w = Window::disc(Point::new(1.0, 0.0), 20.0).unwrap();
        let m = MacProcess::matern_csma(1.0).unwrap();
        for seed in 0..20 {
            let s = palm_scenario_sample(&m, &link(), &w, seed).unwrap();
            assert!(s.pattern.points.iter().all(|x| x.norm() > 1.0));
            assert!(s.pattern.min_pair_distance().map_or(true, |d| d > 1.0));
        }
    }

    #[test]
    fn with_density_hits_target() {
        let c = ClusterSpec::new(1.0 / 15.0, 15.0, 2.0).unwrap();
        for m in [
            MacProcess::ppp_aloha(0.5).unwrap(),
            MacProcess::matern_csma(1.0).unwrap(),
            MacProcess::ThomasAloha { cluster: c, p: 1.0 },
            MacProcess::ClusterMac { cluster: c, q: 1.0 },
        ] {
            let t = m.with_density(0.02).unwrap();
            assert!((t.density() - 0.02).abs() < 1e-12, "{t:?}");
        }
    }
}
