//! Numerical building blocks: special functions, quadrature, root finding and
//! streaming statistics.

pub mod quadrature;
pub mod roots;
pub mod special;
pub mod stats;

pub use quadrature::{
    integrate, integrate_breaks, integrate_breaks_to_infinity, integrate_to_infinity, QuadResult,
    QuadSettings,
};
pub use roots::{bisect, bisect_predicate, Bracket};
pub use special::{beta_inc, factorial, gamma, gamma_p, gamma_q, ln_gamma};
pub use stats::{merge_tree, pairwise_sum, Estimate, RunningStats};
