use super::Point;

const MAX_CELLS: usize = 1 << 22;

/// Uniform bucket grid over a bounding box for fixed-radius neighbour queries.
#[derive(Debug, Clone)]
pub(crate) struct Grid {
    lo: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
    touched: Vec<u32>,
}

impl Grid {
    /// Grid covering `[lo, hi]` with cells at least `min_cell` wide.
    pub fn new(lo: Point, hi: Point, min_cell: f64) -> Self {
        let w = (hi.x - lo.x).max(f64::MIN_POSITIVE);
        let h = (hi.y - lo.y).max(f64::MIN_POSITIVE);
        let mut cell = min_cell.max(f64::MIN_POSITIVE);
        while ((w / cell).ceil() * (h / cell).ceil()) as usize > MAX_CELLS {
            cell *= 2.0;
        }
        let nx = ((w / cell).ceil() as usize).max(1);
        let ny = ((h / cell).ceil() as usize).max(1);
        Self {
            lo,
            cell,
            nx,
            ny,
            cells: vec![Vec::new(); nx * ny],
            touched: Vec::new(),
        }
    }

    fn coords(&self, p: &Point) -> (usize, usize) {
        let ix = ((p.x - self.lo.x) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let iy = ((p.y - self.lo.y) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (ix, iy)
    }

    pub fn insert(&mut self, idx: u32, p: &Point) {
        let (ix, iy) = self.coords(p);
        let c = iy * self.nx + ix;
        if self.cells[c].is_empty() {
            self.touched.push(c as u32);
        }
        self.cells[c].push(idx);
    }

    #[cfg(test)]
    /// Empties the grid, touching only the cells that were used.
    pub fn clear(&mut self) {
        for &c in &self.touched {
            self.cells[c as usize].clear();
        }
        self.touched.clear();
    }

    /// Calls `f` with every stored index whose cell may hold points within `r` of `p`.
    pub fn for_each_candidate(&self, p: &Point, r: f64, mut f: impl FnMut(u32) -> bool) {
        let reach = (r / self.cell).ceil() as isize;
        let (ix, iy) = self.coords(p);
        let (ix, iy) = (ix as isize, iy as isize);
        for y in (iy - reach).max(0)..=(iy + reach).min(self.ny as isize - 1) {
            let row = y as usize * self.nx;
            for x in (ix - reach).max(0)..=(ix + reach).min(self.nx as isize - 1) {
                for &i in &self.cells[row + x as usize] {
                    if !f(i) {
                        return;
                    }
                }
            }
        }
    }

    #[cfg(test)]
    /// True when some stored point lies within distance `r` of `p`.
    pub fn any_within(&self, pts: &[Point], p: &Point, r: f64) -> bool {
        let r2 = r * r;
        let mut found = false;
        self.for_each_candidate(p, r, |i| {
            if pts[i as usize].dist_sq(p) <= r2 {
                found = true;
                false
            } else {
                true
            }
        });
        found
    }
}

/// Bucket grid specialised for hard-core retention: points are stored inline
/// and queried only for "some earlier point within `radius`".
#[derive(Debug, Clone)]
pub(crate) struct HardCoreGrid {
    lo: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    radius_sq: f64,
    // a non-empty own cell already implies a point within the radius
    own_cell_blocks: bool,
    offsets: Vec<(isize, isize)>,
    cells: Vec<Vec<Point>>,
    touched: Vec<u32>,
}

impl HardCoreGrid {
    pub fn new(lo: Point, hi: Point, radius: f64) -> Self {
        let w = (hi.x - lo.x).max(f64::MIN_POSITIVE);
        let h = (hi.y - lo.y).max(f64::MIN_POSITIVE);
        let mut cell = (radius / std::f64::consts::SQRT_2).max(f64::MIN_POSITIVE);
        while ((w / cell).ceil() * (h / cell).ceil()) as usize > MAX_CELLS {
            cell *= 2.0;
        }
        let nx = ((w / cell).ceil() as usize).max(1);
        let ny = ((h / cell).ceil() as usize).max(1);
        let reach = (radius / cell).ceil() as isize;
        let gap = |d: isize| (d.abs() - 1).max(0) as f64 * cell;
        let mut offsets: Vec<(isize, isize)> = (-reach..=reach)
            .flat_map(|dy| (-reach..=reach).map(move |dx| (dx, dy)))
            .filter(|&(dx, dy)| gap(dx).hypot(gap(dy)) <= radius)
            .collect();
        offsets.sort_by(|a, b| {
            let da = gap(a.0).hypot(gap(a.1)) + 1e-9 * (a.0.abs() + a.1.abs()) as f64;
            let db = gap(b.0).hypot(gap(b.1)) + 1e-9 * (b.0.abs() + b.1.abs()) as f64;
            da.total_cmp(&db)
        });
        Self {
            lo,
            cell,
            nx,
            ny,
            radius_sq: radius * radius,
            own_cell_blocks: cell * std::f64::consts::SQRT_2 <= radius,
            offsets,
            cells: vec![Vec::new(); nx * ny],
            touched: Vec::new(),
        }
    }

    fn coords(&self, p: &Point) -> (isize, isize) {
        let ix = ((p.x - self.lo.x) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as isize;
        let iy = ((p.y - self.lo.y) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as isize;
        (ix, iy)
    }

    pub fn clear(&mut self) {
        for &c in &self.touched {
            self.cells[c as usize].clear();
        }
        self.touched.clear();
    }

    /// Stores `p` and returns true when a previously stored point lies within
    /// the radius of it.
    pub fn insert_and_check(&mut self, p: Point) -> bool {
        let (ix, iy) = self.coords(&p);
        let own = iy as usize * self.nx + ix as usize;
        let blocked = if self.own_cell_blocks && !self.cells[own].is_empty() {
            true
        } else {
            self.offsets.iter().any(|&(dx, dy)| {
                let (x, y) = (ix + dx, iy + dy);
                if x < 0 || y < 0 || x >= self.nx as isize || y >= self.ny as isize {
                    return false;
                }
                self.cells[y as usize * self.nx + x as usize]
                    .iter()
                    .any(|q| q.dist_sq(&p) <= self.radius_sq)
            })
        };
        if self.cells[own].is_empty() {
            self.touched.push(own as u32);
        }
        self.cells[own].push(p);
        blocked
    }
}
