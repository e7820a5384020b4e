use std::io::Write;

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::{Point, Window};
use crate::error::{Error, Result};

/// Origin of a point pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessTag {
    Ppp,
    MaternIi,
    Thomas,
    AlohaThinned,
    PalmScenario,
}

/// Finite planar pattern observed in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    pub points: Vec<Point>,
    /// Uniform marks in [0, 1], aligned with `points` when present.
    pub marks: Option<Vec<f64>>,
    pub window: Window,
    /// Intensity of the generating process.
    pub nominal_density: f64,
    pub process_tag: ProcessTag,
    pub seed: Option<u64>,
}

/// JSON sidecar written next to a CSV pattern dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternSidecar {
    pub window: Window,
    pub process_tag: ProcessTag,
    pub nominal_density: f64,
    pub seed: Option<u64>,
    pub count: usize,
    pub has_marks: bool,
}

impl PointPattern {
    pub fn empty(window: Window, nominal_density: f64, process_tag: ProcessTag, seed: Option<u64>) -> Self {
        Self {
            points: Vec::new(),
            marks: None,
            window,
            nominal_density,
            process_tag,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Count per unit area.
    pub fn empirical_density(&self) -> f64 {
        self.points.len() as f64 / self.window.area()
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        if let Some(m) = &self.marks {
            if m.len() != self.points.len() {
                return Err(Error::Numeric(format!(
                    "{} marks for {} points",
                    m.len(),
                    self.points.len()
                )));
            }
            if m.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::Numeric("mark outside [0, 1]".into()));
            }
        }
        if let Some(p) = self.points.iter().find(|p| !p.is_finite() || !self.window.contains(p)) {
            return Err(Error::Numeric(format!("point {p:?} lies outside the window")));
        }
        Ok(())
    }

    /// Smallest pairwise distance, or `None` with fewer than two points.
    pub fn min_pair_distance(&self) -> Option<f64> {
        if self.points.len() < 2 {
            return None;
        }
        let (lo, hi) = self.window.bounding_box();
        // about four points per cell on average
        let cell = (self.window.area() * 4.0 / self.points.len() as f64).sqrt();
        let mut grid = Grid::new(lo, hi, cell);
        for (i, p) in self.points.iter().enumerate() {
            grid.insert(i as u32, p);
        }
        let mut best = f64::INFINITY;
        let mut reach = cell;
        loop {
            for (i, p) in self.points.iter().enumerate() {
                grid.for_each_candidate(p, reach.min(best), |j| {
                    if j as usize != i {
                        best = best.min(p.dist(&self.points[j as usize]));
                    }
                    true
                });
            }
            if best <= reach {
                return Some(best);
            }
            reach *= 4.0;
        }
    }

    /// Writes `x,y[,mark]` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        match &self.marks {
            Some(marks) => {
                writeln!(out, "x,y,mark")?;
                for (p, m) in self.points.iter().zip(marks) {
                    writeln!(out, "{:.16e},{:.16e},{:.16e}", p.x, p.y, m)?;
                }
            }
            None => {
                writeln!(out, "x,y")?;
                for p in &self.points {
                    writeln!(out, "{:.16e},{:.16e}", p.x, p.y)?;
                }
            }
        }
        Ok(())
    }

    pub fn sidecar(&self) -> PatternSidecar {
        PatternSidecar {
            window: self.window,
            process_tag: self.process_tag,
            nominal_density: self.nominal_density,
            seed: self.seed,
            count: self.points.len(),
            has_marks: self.marks.is_some(),
        }
    }
}
