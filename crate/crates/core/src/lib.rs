//! Stochastic-geometry engine for the low-density behaviour of the success
//! probability and transmission capacity of interference-limited networks.
//!
//! The analytic layers (`channel`, `asymptotics`, `capacity` formulas) are
//! generic over [`Scalar`]; Monte Carlo code runs in `f64`.

pub mod asymptotics;
pub mod capacity;
pub mod channel;
pub mod error;
pub mod geom_proc;
pub mod numeric;
pub mod outage_sim;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Concrete aliases for the scalar-generic types.
pub type Link = channel::LinkConfig<f64>;
pub type Link32 = channel::LinkConfig<f32>;
pub type Fading = channel::FadingModel<f64>;
pub type Fading32 = channel::FadingModel<f32>;
pub type PathLoss = channel::PathLossModel<f64>;
pub type PathLoss32 = channel::PathLossModel<f32>;
pub type Point2 = geom_proc::Point<f64>;
pub type Point2f32 = geom_proc::Point<f32>;
pub type ProductDensity = geom_proc::ProductDensityModel<f64>;
pub type ProductDensity32 = geom_proc::ProductDensityModel<f32>;
pub type Matern = geom_proc::MaternSpec<f64>;
pub type Matern32 = geom_proc::MaternSpec<f32>;
pub type Cluster = geom_proc::ClusterSpec<f64>;
pub type Cluster32 = geom_proc::ClusterSpec<f32>;
pub type Asymptotic = asymptotics::AsymptoticResult<f64>;
pub type Asymptotic32 = asymptotics::AsymptoticResult<f32>;
