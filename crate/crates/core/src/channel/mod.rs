//! Fading laws, path loss and the single-interferer outage kernel.

mod fading;
mod link;
mod pathloss;

pub use fading::{FadingModel, GainSampler, TaylorHead, TAYLOR_ORDER_CAP};
pub use link::LinkConfig;
pub use pathloss::PathLossModel;
