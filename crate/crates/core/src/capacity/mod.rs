//! Transmission capacity: asymptotic inversion, simulated inversion, the
//! μ_η/σ_η bounds and the spreading conditions on the transmitter process.

mod bounds;
mod diagnostics;
mod functionals;
mod tc;

pub use bounds::{pgfl_exp_delta, success_prob_bounds, tc_bounds, SuccessBounds, TcBounds};
pub use diagnostics::{b1_statistic, b2_statistic, condition_diagnostics, B1_MIN_SLOPE, B2_MAX_SLOPE, C2_MIN_SLOPE, ConditionReport, ConditionRow, ConditionTrends, DiagnosticOptions};
pub use functionals::{
    delta_sq_eta, mu_eta, mu_sigma, pgfl_poisson, MuSigma, SigmaMethod, FUNCTIONAL_TRUNCATION_REL,
};
pub use tc::{tc_asymptotic, tc_simulated, TcCurve, TcSimOptions, TcSimulated};
