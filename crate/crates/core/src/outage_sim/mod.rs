//! Palm Monte Carlo of the success probability, truncation control and
//! interference moments.

mod estimator;
mod integrals;
mod moments;
mod truncation;

pub use estimator::{estimate_ps, palm_mc, OutageEstimate, PalmMcOutput, Scenario, BATCH_SIZE, DEFAULT_SAMPLES};
pub use integrals::{pair_integral_is, pcf_weighted_integral, Envelope};
pub use moments::{interference_moment_analytic, interference_moment_mc, MAX_MOMENT_ORDER};
pub use truncation::{truncation_bias_bound, truncation_radius, TRUNCATION_FLOOR_FACTOR};
