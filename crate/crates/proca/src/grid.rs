//! Periodic collocated grid and the field containers that live on it.
//!
//! All field components are sampled at cell centers of the same grid
//! (no staggering), x fastest in memory. Axes with extent 1 are inactive:
//! derivatives along them vanish identically, which is how 1-D and 2-D
//! runs fall out of the same code.

use crate::error::{Error, Result};

pub const MIN_ACTIVE_EXTENT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    dims: [usize; 3],
    spacing: [f64; 3],
}

impl Grid {
    /// Periodic grid. Active axes (extent > 1) need at least
    /// [`MIN_ACTIVE_EXTENT`] cells; inactive axes must have extent exactly 1
    /// and get unit spacing so cell volumes stay meaningful.
    pub fn new(dims: [usize; 3], spacing: [f64; 3]) -> Result<Self> {
        for a in 0..3 {
            if dims[a] == 0 {
                return Err(Error::InvalidGrid(format!("axis {a} has zero extent")));
            }
            if dims[a] > 1 && dims[a] < MIN_ACTIVE_EXTENT {
                return Err(Error::InvalidGrid(format!(
                    "active axis {a} has extent {} < {MIN_ACTIVE_EXTENT}",
                    dims[a]
                )));
            }
            if spacing[a] <= 0.0 || !spacing[a].is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "axis {a} spacing {} must be positive and finite",
                    spacing[a]
                )));
            }
        }
        Ok(Self { dims, spacing })
    }

    pub fn line(n: usize, dx: f64) -> Result<Self> {
        Self::new([n, 1, 1], [dx, 1.0, 1.0])
    }

    pub fn square(n: usize, dx: f64) -> Result<Self> {
        Self::new([n, n, 1], [dx, dx, 1.0])
    }

    pub fn cube(n: usize, dx: f64) -> Result<Self> {
        Self::new([n, n, n], [dx, dx, dx])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn cell_count(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_active(&self, axis: usize) -> bool {
        self.dims[axis] > 1
    }

    pub fn active_axes(&self) -> usize {
        (0..3).filter(|&a| self.is_active(a)).count()
    }

    /// Physical extent of an axis (periodic length).
    pub fn length(&self, axis: usize) -> f64 {
        self.dims[axis] as f64 * self.spacing[axis]
    }

    /// Volume of one cell; inactive axes contribute their unit spacing.
    pub fn cell_volume(&self) -> f64 {
        self.spacing[0] * self.spacing[1] * self.spacing[2]
    }

    pub fn min_active_spacing(&self) -> f64 {
        (0..3)
            .filter(|&a| self.is_active(a))
            .map(|a| self.spacing[a])
            .fold(f64::INFINITY, f64::min)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    #[inline]
    pub fn position(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            i as f64 * self.spacing[0],
            j as f64 * self.spacing[1],
            k as f64 * self.spacing[2],
        ]
    }

    /// Smallest wavenumber quantum of an axis, 2 pi / L.
    pub fn fundamental_wavenumber(&self, axis: usize) -> f64 {
        std::f64::consts::TAU / self.length(axis)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![0.0; grid.cell_count()],
        }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 3]) -> f64) -> Self {
        let mut field = Self::zeros(grid);
        let [nx, ny, nz] = grid.dims();
        let mut idx = 0;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    field.data[idx] = f(grid.position(i, j, k));
                    idx += 1;
                }
            }
        }
        field
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    grid: Grid,
    comps: [Vec<f64>; 3],
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        let n = grid.cell_count();
        Self {
            grid,
            comps: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 3]) -> [f64; 3]) -> Self {
        let mut field = Self::zeros(grid);
        let [nx, ny, nz] = grid.dims();
        let mut idx = 0;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    let v = f(grid.position(i, j, k));
                    for (comp, value) in field.comps.iter_mut().zip(v) {
                        comp[idx] = value;
                    }
                    idx += 1;
                }
            }
        }
        field
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn comp(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.comps[c]
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        debug_assert_eq!(self.grid, other.grid);
        for (mine, theirs) in self.comps.iter_mut().zip(&other.comps) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                *a += c * b;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(|v| v.is_finite()))
    }
}

/// Complex scalar field stored as separate real and imaginary parts, so
/// stencil code operates on each part through the identical real path.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexScalarField {
    pub re: ScalarField,
    pub im: ScalarField,
}

impl ComplexScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            re: ScalarField::zeros(grid),
            im: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> Grid {
        self.re.grid()
    }

    /// Largest pointwise modulus.
    pub fn max_modulus(&self) -> f64 {
        self.re
            .data()
            .iter()
            .zip(self.im.data())
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }
}

/// Complex 3-vector field split into real and imaginary vector fields.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVectorField {
    pub re: VectorField,
    pub im: VectorField,
}

impl ComplexVectorField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            re: VectorField::zeros(grid),
            im: VectorField::zeros(grid),
        }
    }

    pub fn grid(&self) -> Grid {
        self.re.grid()
    }

    pub fn max_modulus(&self) -> f64 {
        (0..3).fold(0.0f64, |m, c| {
            self.re
                .comp(c)
                .iter()
                .zip(self.im.comp(c))
                .fold(m, |acc, (a, b)| acc.max(a.hypot(*b)))
        })
    }
}

/// Electric and magnetic fields plus the potentials, all on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct EMFieldState {
    pub e: VectorField,
    pub b: VectorField,
    pub a: VectorField,
    pub phi: ScalarField,
}

impl EMFieldState {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            e: VectorField::zeros(grid),
            b: VectorField::zeros(grid),
            a: VectorField::zeros(grid),
            phi: ScalarField::zeros(grid),
        }
    }

    pub fn new(e: VectorField, b: VectorField, a: VectorField, phi: ScalarField) -> Result<Self> {
        let g = e.grid();
        if b.grid() != g || a.grid() != g || phi.grid() != g {
            return Err(Error::ShapeMismatch(
                "E, B, A, phi must share one grid".into(),
            ));
        }
        Ok(Self { e, b, a, phi })
    }

    pub fn grid(&self) -> Grid {
        self.e.grid()
    }

    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        self.e.add_scaled(c, &other.e);
        self.b.add_scaled(c, &other.b);
        self.a.add_scaled(c, &other.a);
        self.phi.add_scaled(c, &other.phi);
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.b.is_finite() && self.a.is_finite() && self.phi.is_finite()
    }

    pub fn max_abs(&self) -> f64 {
        self.e
            .max_abs()
            .max(self.b.max_abs())
            .max(self.a.max_abs())
            .max(self.phi.max_abs())
    }
}
