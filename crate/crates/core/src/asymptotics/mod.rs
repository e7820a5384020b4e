//! Low-density constants γ and κ in P_s ∼ P₀ − γη^κ: closed forms,
//! quadrature, partition sums and regression on simulated sweeps.

mod aloha;
mod csma;
mod fit;
mod noise;
mod partitions;
mod result;

pub(crate) use aloha::{analytic_settings, kernel_knee};
pub use aloha::{gamma_aloha, gamma_aloha_beamforming, gamma_aloha_nakagami};
pub use csma::{csma_a_i, csma_a_i_first_order, gamma_csma_rayleigh_closed, gamma_kappa_csma, CSMA_MAX_NU};
pub use fit::{fit_gamma_kappa, kappa_bounds_check, FitDiagnostics, KappaCheck, FIT_MAX_OUTAGE, FIT_MIN_SE_MULTIPLE};
pub use noise::noise_taylor;
pub use partitions::{partitions, Partition, PARTITION_CAP};
pub use result::{AsymptoticMethod, AsymptoticResult};
