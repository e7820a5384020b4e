//! Border-corrected second-order estimators.

use super::grid::Grid;
use super::PointPattern;
use crate::error::{invalid, Error, Result};

/// Minus-sampling estimate of Ripley's K on `r_grid`.
///
/// Only points at least r from the window boundary serve as centres at
/// radius r; radii with no eligible centre yield NaN.
pub fn empirical_ripley_k(pattern: &PointPattern, r_grid: &[f64]) -> Result<Vec<f64>> {
    if pattern.is_empty() {
        return Err(Error::Empty("pattern"));
    }
    if r_grid.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(invalid("r_grid", "radii must be finite and non-negative"));
    }
    let r_max = r_grid.iter().cloned().fold(0.0, f64::max);
    let pts = &pattern.points;
    let eta = pattern.empirical_density();
    let (lo, hi) = pattern.window.bounding_box();
    let mut grid = Grid::new(lo, hi, (r_max / 2.0).max(1e-9));
    for (i, p) in pts.iter().enumerate() {
        grid.insert(i as u32, p);
    }

    let mut sums = vec![0.0_f64; r_grid.len()];
    let mut centres = vec![0usize; r_grid.len()];
    let mut dists = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let b = pattern.window.boundary_distance(p);
        if b < r_grid.iter().cloned().fold(f64::INFINITY, f64::min) {
            continue;
        }
        dists.clear();
        let reach = r_max.min(b);
        grid.for_each_candidate(p, reach, |j| {
            if j as usize != i {
                let d = pts[j as usize].dist(p);
                if d <= reach {
                    dists.push(d);
                }
            }
            true
        });
        for (k, &r) in r_grid.iter().enumerate() {
            if b >= r {
                centres[k] += 1;
                sums[k] += dists.iter().filter(|&&d| d <= r).count() as f64;
            }
        }
    }
    Ok(sums
        .iter()
        .zip(&centres)
        .map(|(s, &n)| if n == 0 { f64::NAN } else { s / (n as f64 * eta) })
        .collect())
}

/// Pair-correlation estimate g(r) ≈ [K(r + h) − K(r − h)] / (2π r · 2h).
pub fn empirical_pcf(pattern: &PointPattern, r_grid: &[f64], bandwidth: f64) -> Result<Vec<f64>> {
    if !(bandwidth > 0.0) {
        return Err(invalid("bandwidth", "must be positive"));
    }
    if r_grid.iter().any(|r| *r < bandwidth) {
        return Err(invalid("r_grid", "radii must be at least the bandwidth"));
    }
    let mut edges = Vec::with_capacity(2 * r_grid.len());
    for r in r_grid {
        edges.push(r - bandwidth);
        edges.push(r + bandwidth);
    }
    let k = empirical_ripley_k(pattern, &edges)?;
    Ok(r_grid
        .iter()
        .enumerate()
        .map(|(i, r)| (k[2 * i + 1] - k[2 * i]) / (2.0 * std::f64::consts::PI * r * 2.0 * bandwidth))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom_proc::{sample_matern_hardcore, MaternSpec, Point, Window};

    #[test]
    fn hard_core_has_empty_k_below_radius() {
        let w = Window::square(Point::origin(), 20.0).unwrap();
        let pat = sample_matern_hardcore(&MaternSpec::new(1.0).unwrap(), &w, 1).unwrap();
        let k = empirical_ripley_k(&pat, &[0.5, 0.99, 1.5]).unwrap();
        assert_eq!(k[0], 0.0);
        assert_eq!(k[1], 0.0);
        assert!(k[2] > 0.0);
    }

    #[test]
    fn empty_pattern_is_rejected() {
        let w = Window::square(Point::origin(), 1.0).unwrap();
        let pat = PointPattern::empty(w, 1.0, crate::geom_proc::ProcessTag::Ppp, None);
        assert!(empirical_ripley_k(&pat, &[0.1]).is_err());
    }
}
