use std::io::{Read, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{unit_sphere_area, Real};

/// Region whose interior nodes are free; all other nodes carry Dirichlet data.
/// Radii of `Ball` and `Annulus` are full radii `sqrt((x1 - center)^2 + r^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region<T> {
    Box,
    Ball { center: T, radius: T },
    Annulus { center: T, inner: T, outer: T },
}

impl<T: Real> Region<T> {
    pub fn contains(&self, x1: T, r: T) -> bool {
        match *self {
            Region::Box => true,
            Region::Ball { center, radius } => (x1 - center).hypot(r) < radius,
            Region::Annulus { center, inner, outer } => {
                let rho = (x1 - center).hypot(r);
                rho > inner && rho < outer
            }
        }
    }
}

/// Uniform node grid on `[x_lo, x_hi] x [r_lo, r_hi]` in the `(x_1, |x'|)`
/// half-plane, carrying the volume weight `|x'|^{d-2}`.
///
/// With `axis` set, `r_lo = h_r / 2` and the row nearest the axis is free
/// (natural boundary condition); otherwise the row at `r_lo` is Dirichlet.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymGrid<T> {
    pub nx: usize,
    pub nr: usize,
    pub x_lo: T,
    pub r_lo: T,
    pub hx: T,
    pub hr: T,
    pub d: u32,
    pub region: Region<T>,
    pub axis: bool,
    free: Vec<bool>,
    active: Vec<usize>,
    cell_weight: Vec<T>,
}

impl<T: Real> AxisymGrid<T> {
    pub fn new(
        d: u32,
        (nx, nr): (usize, usize),
        (x_lo, x_hi): (T, T),
        (r_lo, r_hi): (T, T),
        region: Region<T>,
        axis: bool,
    ) -> Result<Self> {
        if d < 2 {
            return Err(Error::config(format!("grid dimension d = {d} is below 2")));
        }
        if nx < 3 || nr < 2 {
            return Err(Error::config(format!("grid {nx} x {nr} is too small")));
        }
        if !(x_hi > x_lo) || !(r_hi > r_lo) || !(r_lo > T::zero()) {
            return Err(Error::config("grid ranges must be nonempty with r_lo > 0"));
        }
        let hx = (x_hi - x_lo) / T::from_count(nx - 1);
        let hr = (r_hi - r_lo) / T::from_count(nr - 1);
        if axis && (r_lo - hr * T::lit(0.5)).abs() > hr * T::lit(1e-9) {
            return Err(Error::config("axis grids need r_lo = h_r / 2"));
        }
        let mut grid = Self {
            nx,
            nr,
            x_lo,
            r_lo,
            hx,
            hr,
            d,
            region,
            axis,
            free: Vec::new(),
            active: Vec::new(),
            cell_weight: Vec::new(),
        };
        grid.free = (0..nx * nr)
            .map(|k| {
                let (i, j) = (k % nx, k / nx);
                let (x, r) = grid.node(i, j);
                i > 0 && i + 1 < nx && j + 1 < nr && (j > 0 || axis) && region.contains(x, r)
            })
            .collect();
        let sigma = unit_sphere_area::<T>(d - 1);
        grid.cell_weight = (0..(nx - 1) * (nr - 1))
            .map(|c| {
                let (_, rc) = grid.cell_center(c);
                sigma * rc.powi(d as i32 - 2) * hx * hr
            })
            .collect();
        grid.active = (0..(nx - 1) * (nr - 1)).filter(|&c| grid.cell_corners(c).iter().any(|&k| grid.free[k])).collect();
        Ok(grid)
    }

    /// Axis grid of spacing close to `h` covering the region's bounding box
    /// plus one cell.
    pub fn covering(d: u32, region: Region<T>, center: T, radius: T, h: T) -> Result<Self> {
        if !(h > T::zero()) || !(radius > T::zero()) {
            return Err(Error::config("spacing and radius must be positive"));
        }
        let cells_x = ((T::lit(2.0) * (radius + h)) / h).ceil().to_f64_lossy() as usize;
        let hx = T::lit(2.0) * (radius + h) / T::from_count(cells_x);
        let cells_r = ((radius + h) / h).ceil().to_f64_lossy() as usize;
        let r_lo = h * T::lit(0.5);
        let r_hi = r_lo + h * T::from_count(cells_r);
        let x_lo = center - radius - h;
        Self::new(d, (cells_x + 1, cells_r + 1), (x_lo, x_lo + hx * T::from_count(cells_x)), (r_lo, r_hi), region, true)
    }

    pub fn ball(d: u32, center: T, radius: T, h: T) -> Result<Self> {
        Self::covering(d, Region::Ball { center, radius }, center, radius, h)
    }

    pub fn annulus(d: u32, center: T, inner: T, outer: T, h: T) -> Result<Self> {
        if !(inner > T::zero() && outer > inner) {
            return Err(Error::config("annulus needs 0 < inner < outer"));
        }
        Self::covering(d, Region::Annulus { center, inner, outer }, center, outer, h)
    }

    /// Box grid away from the axis; the whole boundary is Dirichlet.
    pub fn cylinder(d: u32, x_range: (T, T), r_range: (T, T), nx: usize, nr: usize) -> Result<Self> {
        Self::new(d, (nx, nr), x_range, r_range, Region::Box, false)
    }

    pub fn into_shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.nx * self.nr
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn node(&self, i: usize, j: usize) -> (T, T) {
        (self.x_lo + self.hx * T::from_count(i), self.r_lo + self.hr * T::from_count(j))
    }

    pub fn node_at(&self, k: usize) -> (T, T) {
        self.node(k % self.nx, k / self.nx)
    }

    pub fn is_free(&self, k: usize) -> bool {
        self.free[k]
    }

    pub fn free_mask(&self) -> &[bool] {
        &self.free
    }

    pub fn free_count(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }

    pub fn cell_count(&self) -> usize {
        (self.nx - 1) * (self.nr - 1)
    }

    /// Cells with at least one free corner.
    pub fn active_cells(&self) -> &[usize] {
        &self.active
    }

    /// Corner node indices `[00, 10, 01, 11]` (first index along `x_1`).
    pub fn cell_corners(&self, c: usize) -> [usize; 4] {
        let (i, j) = (c % (self.nx - 1), c / (self.nx - 1));
        let k = self.index(i, j);
        [k, k + 1, k + self.nx, k + self.nx + 1]
    }

    pub fn cell_center(&self, c: usize) -> (T, T) {
        let (i, j) = (c % (self.nx - 1), c / (self.nx - 1));
        let (x, r) = self.node(i, j);
        (x + self.hx * T::lit(0.5), r + self.hr * T::lit(0.5))
    }

    /// `sigma_{d-2} r_c^{d-2} h_x h_r`.
    pub fn cell_weight(&self, c: usize) -> T {
        self.cell_weight[c]
    }

    /// Cells whose centre lies in the ball `B_radius((center, 0))`.
    pub fn cells_in_ball(&self, center: T, radius: T) -> Vec<usize> {
        (0..self.cell_count())
            .filter(|&c| {
                let (x, r) = self.cell_center(c);
                (x - center).hypot(r) < radius
            })
            .collect()
    }

    /// Nodes in the closed ball `B_radius((center, 0))`.
    pub fn nodes_in_ball(&self, center: T, radius: T) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| {
                let (x, r) = self.node_at(k);
                (x - center).hypot(r) <= radius
            })
            .collect()
    }

    /// Cell-centred `(d/dx_1, d/dr)` of nodal values.
    #[inline]
    pub fn cell_gradient(&self, values: &[T], c: usize) -> [T; 2] {
        let [a, b, e, f] = self.cell_corners(c);
        let two = T::lit(2.0);
        [
            ((values[b] - values[a]) + (values[f] - values[e])) / (two * self.hx),
            ((values[e] - values[a]) + (values[f] - values[b])) / (two * self.hr),
        ]
    }

    #[inline]
    pub fn cell_value(&self, values: &[T], c: usize) -> T {
        let [a, b, e, f] = self.cell_corners(c);
        (values[a] + values[b] + values[e] + values[f]) * T::lit(0.25)
    }

    /// Adds `g . grad(basis_k)` for each corner `k` of cell `c` into `out`,
    /// i.e. the transpose of [`cell_gradient`](Self::cell_gradient).
    #[inline]
    pub fn scatter_gradient(&self, c: usize, g: [T; 2], out: &mut [T]) {
        let [a, b, e, f] = self.cell_corners(c);
        let two = T::lit(2.0);
        let gx = g[0] / (two * self.hx);
        let gr = g[1] / (two * self.hr);
        out[a] = out[a] - gx - gr;
        out[b] = out[b] + gx - gr;
        out[e] = out[e] - gx + gr;
        out[f] = out[f] + gx + gr;
    }

    /// Cell containing `(x1, r)` and bilinear coordinates inside it.
    pub fn locate(&self, x1: T, r: T) -> Option<(usize, T, T)> {
        let fx = (x1 - self.x_lo) / self.hx;
        let fr = (r - self.r_lo) / self.hr;
        if fx < T::zero() || fr < T::zero() {
            return None;
        }
        let i = fx.floor().to_f64_lossy() as usize;
        let j = fr.floor().to_f64_lossy() as usize;
        let i = i.min(self.nx - 2);
        let j = j.min(self.nr - 2);
        let tx = fx - T::from_count(i);
        let tr = fr - T::from_count(j);
        if tx > T::one() + T::lit(1e-9) || tr > T::one() + T::lit(1e-9) {
            return None;
        }
        Some((j * (self.nx - 1) + i, tx, tr))
    }

    /// Bilinear interpolation of nodal values.
    pub fn interpolate(&self, values: &[T], x1: T, r: T) -> Option<T> {
        let (c, tx, tr) = self.locate(x1, r)?;
        let [a, b, e, f] = self.cell_corners(c);
        let one = T::one();
        Some(
            values[a] * (one - tx) * (one - tr)
                + values[b] * tx * (one - tr)
                + values[e] * (one - tx) * tr
                + values[f] * tx * tr,
        )
    }
}

/// Nodal values on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    pub grid: Arc<AxisymGrid<T>>,
    pub values: Vec<T>,
}

impl<T: Real> GridField<T> {
    pub fn from_fn(grid: Arc<AxisymGrid<T>>, f: impl Fn(T, T) -> T) -> Self {
        let values = (0..grid.len()).map(|k| {
            let (x, r) = grid.node_at(k);
            f(x, r)
        });
        let values = values.collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<AxisymGrid<T>>) -> Self {
        let n = grid.len();
        Self { grid, values: vec![T::zero(); n] }
    }

    pub fn new(grid: Arc<AxisymGrid<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for {} nodes", values.len(), grid.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::config(format!("non-finite value at node {k}")));
        }
        Ok(Self { grid, values })
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch("fields live on different grids".into()))
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn positive_part(&self) -> Self {
        self.map(|v| v.max(T::zero()))
    }

    /// Same values with every non-free node set to zero.
    pub fn with_zero_boundary(&self) -> Self {
        let mut out = self.clone();
        for (k, v) in out.values.iter_mut().enumerate() {
            if !self.grid.is_free(k) {
                *v = T::zero();
            }
        }
        out
    }

    pub fn max_over(&self, nodes: &[usize]) -> T {
        nodes.iter().map(|&k| self.values[k]).fold(T::neg_infinity(), T::max)
    }

    /// Little-endian layout: `nx: u32, nr: u32, x1_lo, x1_hi, r_lo, r_hi: f64,
    /// d: u32`, then `nx * nr` values as `f64`, `r` index outermost.
    pub fn write_binary(&self, mut w: impl Write) -> Result<()> {
        let g = &*self.grid;
        w.write_all(&(g.nx as u32).to_le_bytes())?;
        w.write_all(&(g.nr as u32).to_le_bytes())?;
        let x_hi = g.x_lo + g.hx * T::from_count(g.nx - 1);
        let r_hi = g.r_lo + g.hr * T::from_count(g.nr - 1);
        for v in [g.x_lo, x_hi, g.r_lo, r_hi] {
            w.write_all(&v.to_f64_lossy().to_le_bytes())?;
        }
        w.write_all(&g.d.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_f64_lossy().to_le_bytes())?;
        }
        Ok(())
    }

    /// Inverse of [`write_binary`](Self::write_binary). The region is not
    /// stored, so the grid comes back as a box; `axis` is inferred from `r_lo`.
    pub fn read_binary(mut r: impl Read) -> Result<Self> {
        let mut u32buf = [0u8; 4];
        let mut f64buf = [0u8; 8];
        let mut read_u32 = |r: &mut dyn Read| -> Result<u32> {
            r.read_exact(&mut u32buf)?;
            Ok(u32::from_le_bytes(u32buf))
        };
        let nx = read_u32(&mut r)? as usize;
        let nr = read_u32(&mut r)? as usize;
        let mut ranges = [0.0; 4];
        for v in &mut ranges {
            r.read_exact(&mut f64buf)?;
            *v = f64::from_le_bytes(f64buf);
        }
        let d = read_u32(&mut r)?;
        let hr = (ranges[3] - ranges[2]) / (nr.max(2) - 1) as f64;
        let axis = (ranges[2] - 0.5 * hr).abs() <= 1e-9 * hr;
        let grid = AxisymGrid::new(
            d,
            (nx, nr),
            (T::lit(ranges[0]), T::lit(ranges[1])),
            (T::lit(ranges[2]), T::lit(ranges[3])),
            Region::Box,
            axis,
        )?;
        let mut values = Vec::with_capacity(nx * nr);
        for _ in 0..nx * nr {
            r.read_exact(&mut f64buf)?;
            values.push(T::lit(f64::from_le_bytes(f64buf)));
        }
        Self::new(Arc::new(grid), values)
    }

    /// CSV with columns `x1,r,value,free`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x1", "r", "value", "free"])?;
        for (k, v) in self.values.iter().enumerate() {
            let (x, r) = self.grid.node_at(k);
            out.write_record([
                format!("{:e}", x.to_f64_lossy()),
                format!("{:e}", r.to_f64_lossy()),
                format!("{:e}", v.to_f64_lossy()),
                u8::from(self.grid.is_free(k)).to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}
