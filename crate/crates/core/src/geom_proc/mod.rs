//! Point processes, MAC thinning, Palm sampling and product densities.

mod cluster;
mod discs;
pub(crate) mod grid;
mod matern;
mod palm;
mod pattern;
mod point;
mod product_density;
mod ripley;
mod samplers;

pub use cluster::ClusterSpec;
pub use discs::{disc_intersection_area, disc_intersection_area_mc, disc_union_area, lens_area};
pub use matern::{
    matern_density, matern_radius_for_density, matern_scaled_product_density, matern_scaled_rho2, MaternSpec,
    MAX_PRODUCT_ORDER,
};
pub use palm::{palm_scenario_sample, MacProcess, PalmSample, PalmSampler, PALM_REJECTION_CAP};
pub use pattern::{PatternSidecar, PointPattern, ProcessTag};
pub use point::{Point, Window};
pub use product_density::ProductDensityModel;
pub use ripley::{empirical_pcf, empirical_ripley_k};
pub use samplers::{
    aloha_thin, matern_mark_cut, sample_matern_hardcore, sample_ppp, sample_thomas_cluster, MATERN_MARK_TAIL,
    MAX_EXPECTED_POINTS,
};
