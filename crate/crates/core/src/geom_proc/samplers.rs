//! Samplers for Poisson, Matérn type-II and Thomas patterns.
//!
//! Every sampler is a pure function of its inputs and seed. Point counts are
//! capped at [`MAX_EXPECTED_POINTS`] expected points per call.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Normal, Poisson};

use super::grid::HardCoreGrid;
use super::{ClusterSpec, MaternSpec, Point, PointPattern, ProcessTag, Window};
use crate::error::{invalid, Error, Result};
use crate::rng::stream_rng;

/// Largest expected number of generated points accepted by a sampler.
pub const MAX_EXPECTED_POINTS: f64 = 2.0e7;

/// Probability bound on retained points lost by cutting parent marks (see
/// [`matern_mark_cut`]).
pub const MATERN_MARK_TAIL: f64 = 1.0e-9;

pub(crate) fn check_expected(expected: f64) -> Result<()> {
    if expected > MAX_EXPECTED_POINTS {
        return Err(Error::PointCapExceeded {
            expected,
            cap: MAX_EXPECTED_POINTS as usize,
        });
    }
    Ok(())
}

pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng) as u64
}

/// Homogeneous Poisson process of the given density in `window`.
pub fn sample_ppp(density: f64, window: &Window, seed: u64) -> Result<PointPattern> {
    window.validate()?;
    if !(density >= 0.0 && density.is_finite()) {
        return Err(invalid("density", format!("must be non-negative, got {density}")));
    }
    let expected = density * window.area();
    check_expected(expected)?;
    let mut rng = stream_rng(seed, 0);
    let n = poisson_count(expected, &mut rng);
    let points = (0..n).map(|_| window.sample_uniform(&mut rng)).collect();
    Ok(PointPattern {
        points,
        marks: None,
        window: *window,
        nominal_density: density,
        process_tag: ProcessTag::Ppp,
        seed: Some(seed),
    })
}

/// Streams a Poisson process on `window × [0, mark_max)` in increasing mark
/// order, with `density` points per unit area per unit mark.
///
/// Prefixes are shared across `mark_max`, which couples thinned patterns.
pub(crate) fn for_each_mark_ordered<R: Rng + ?Sized>(
    density: f64,
    window: &Window,
    mark_max: f64,
    rng: &mut R,
    mut visit: impl FnMut(Point, f64),
) {
    let rate = density * window.area();
    if rate <= 0.0 || mark_max <= 0.0 {
        return;
    }
    let mut mark = 0.0;
    loop {
        let gap: f64 = Exp1.sample(rng);
        mark += gap / rate;
        if mark >= mark_max {
            return;
        }
        let p = window.sample_uniform(rng);
        visit(p, mark);
    }
}

/// Largest parent mark that can still produce a retained point in `window`
/// with probability above [`MATERN_MARK_TAIL`].
pub fn matern_mark_cut(spec: &MaternSpec, window: &Window) -> f64 {
    let n = spec.mean_neighborhood();
    // E[#retained with mark > m] ≤ λ|W| e^{−N̄ m} / N̄
    let lead = spec.parent_density * window.area() / (n * MATERN_MARK_TAIL);
    (lead.ln() / n).clamp(0.0, 1.0)
}

/// Reusable Matérn retention state.
#[derive(Debug, Clone)]
pub(crate) struct MaternEngine {
    spec: MaternSpec,
    parent_window: Window,
    mark_cut: f64,
    grid: HardCoreGrid,
}

impl MaternEngine {
    pub fn new(spec: MaternSpec, window: &Window) -> Result<Self> {
        spec.validate()?;
        window.validate()?;
        let a = spec.exclusion_radius;
        let parent_window = window.padded(a);
        let mark_cut = matern_mark_cut(&spec, window);
        check_expected(spec.parent_density * parent_window.area() * mark_cut)?;
        let (lo, hi) = parent_window.bounding_box();
        Ok(Self {
            spec,
            parent_window,
            mark_cut,
            grid: HardCoreGrid::new(lo, hi, a),
        })
    }

    /// Runs retention on a fresh parent process. With `origin_mark` set, a
    /// parent with that mark sits at the origin and parents inside `B(o, a)`
    /// with smaller marks are suppressed (conditioning on that region being
    /// empty).
    pub fn run<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        window: &Window,
        origin_mark: Option<f64>,
        mut keep: impl FnMut(Point, f64),
    ) {
        let a = self.spec.exclusion_radius;
        let a2 = a * a;
        self.grid.clear();
        let mut cut = self.mark_cut;
        if let Some(m0) = origin_mark {
            self.grid.insert_and_check(Point::origin());
            cut = cut.max(m0);
        }
        let grid = &mut self.grid;
        for_each_mark_ordered(self.spec.parent_density, &self.parent_window, cut, rng, |p, m| {
            if let Some(m0) = origin_mark {
                if m < m0 && p.norm_sq() <= a2 {
                    return;
                }
            }
            let retained = !grid.insert_and_check(p);
            if retained && window.contains(&p) {
                keep(p, m);
            }
        });
    }
}

/// Matérn type-II pattern in `window`; parents are drawn on the window padded
/// by the exclusion radius so border retention is exact.
pub fn sample_matern_hardcore(spec: &MaternSpec, window: &Window, seed: u64) -> Result<PointPattern> {
    let mut engine = MaternEngine::new(*spec, window)?;
    let mut rng = stream_rng(seed, 0);
    let mut points = Vec::new();
    let mut marks = Vec::new();
    engine.run(&mut rng, window, None, |p, m| {
        points.push(p);
        marks.push(m);
    });
    Ok(PointPattern {
        points,
        marks: Some(marks),
        window: *window,
        nominal_density: spec.density(),
        process_tag: ProcessTag::MaternIi,
        seed: Some(seed),
    })
}

/// Generates Thomas daughters of Poisson parents on the padded window and
/// hands those falling in `window` to `visit`.
pub(crate) fn for_each_thomas_daughter<R: Rng + ?Sized>(
    spec: &ClusterSpec,
    window: &Window,
    rng: &mut R,
    mut visit: impl FnMut(Point, &mut R),
) -> Result<()> {
    let parent_window = window.padded(spec.padding());
    let parents = spec.parent_density * parent_window.area();
    check_expected(parents * (1.0 + spec.mean_cluster_size))?;
    let normal = Normal::new(0.0, spec.spread).map_err(|e| invalid("spread", e.to_string()))?;
    let n = poisson_count(parents, rng);
    for _ in 0..n {
        let c = parent_window.sample_uniform(rng);
        let k = poisson_count(spec.mean_cluster_size, rng);
        for _ in 0..k {
            let p = Point::new(c.x + normal.sample(rng), c.y + normal.sample(rng));
            if window.contains(&p) {
                visit(p, rng);
            }
        }
    }
    Ok(())
}

/// Thomas cluster pattern in `window`.
pub fn sample_thomas_cluster(spec: &ClusterSpec, window: &Window, seed: u64) -> Result<PointPattern> {
    spec.validate()?;
    window.validate()?;
    let mut rng = stream_rng(seed, 0);
    let mut points = Vec::new();
    for_each_thomas_daughter(spec, window, &mut rng, |p, _| points.push(p))?;
    Ok(PointPattern {
        points,
        marks: None,
        window: *window,
        nominal_density: spec.density(),
        process_tag: ProcessTag::Thomas,
        seed: Some(seed),
    })
}

/// Independent ALOHA thinning with retention `p`.
///
/// Point i is kept iff uᵢ < p for a uniform uᵢ drawn in point order from
/// `seed`, so for a fixed seed the kept set grows monotonically with `p`.
pub fn aloha_thin(pattern: &PointPattern, p: f64, seed: u64) -> Result<PointPattern> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("access probability must lie in [0, 1], got {p}")));
    }
    let mut rng = stream_rng(seed, 0);
    let mut points = Vec::new();
    let mut marks = pattern.marks.as_ref().map(|_| Vec::new());
    for (i, pt) in pattern.points.iter().enumerate() {
        let u: f64 = rng.random();
        if u < p {
            points.push(*pt);
            if let (Some(out), Some(src)) = (marks.as_mut(), pattern.marks.as_ref()) {
                out.push(src[i]);
            }
        }
    }
    Ok(PointPattern {
        points,
        marks,
        window: pattern.window,
        nominal_density: pattern.nominal_density * p,
        process_tag: ProcessTag::AlohaThinned,
        seed: Some(seed),
    })
}
