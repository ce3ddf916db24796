//! Centered finite-difference operators on the periodic grid.
//!
//! Centered stencils on periodic grids commute exactly, so the discrete
//! identities div(curl F) = 0 and curl(grad f) = 0 hold to round-off.
//! They are also skew-adjoint under the grid inner product, which is what
//! makes the discrete field energy a conserved quantity of the
//! semi-discrete system.

use crate::error::{Error, Result};
use crate::grid::{ComplexScalarField, ComplexVectorField, Grid, ScalarField, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilOrder {
    Two,
    Four,
}

impl StencilOrder {
    pub fn from_usize(order: usize) -> Result<Self> {
        match order {
            2 => Ok(StencilOrder::Two),
            4 => Ok(StencilOrder::Four),
            other => Err(Error::UnsupportedOrder(other)),
        }
    }

    pub fn as_usize(self) -> usize {
        match self {
            StencilOrder::Two => 2,
            StencilOrder::Four => 4,
        }
    }

    /// Discrete Fourier symbol of the centered first derivative: the
    /// effective wavenumber the stencil produces on a sampled exp(ikx).
    pub fn wavenumber_symbol(self, k: f64, dx: f64) -> f64 {
        let theta = k * dx;
        match self {
            StencilOrder::Two => theta.sin() / dx,
            StencilOrder::Four => (8.0 * theta.sin() - (2.0 * theta).sin()) / (6.0 * dx),
        }
    }

    /// Maximum of |symbol| * dx over all resolvable wavenumbers; enters the
    /// stability bound as an effective signal-speed factor.
    pub fn max_symbol_factor(self) -> f64 {
        match self {
            StencilOrder::Two => 1.0,
            // max of (8 sin t - sin 2t)/6 at cos t = 1 - sqrt(6)/2
            StencilOrder::Four => 1.372_228_727_4,
        }
    }
}

struct AxisTable {
    m2: Vec<usize>,
    m1: Vec<usize>,
    p1: Vec<usize>,
    p2: Vec<usize>,
}

fn axis_table(n: usize) -> AxisTable {
    let wrap = |v: isize| -> usize { v.rem_euclid(n as isize) as usize };
    AxisTable {
        m2: (0..n).map(|i| wrap(i as isize - 2)).collect(),
        m1: (0..n).map(|i| wrap(i as isize - 1)).collect(),
        p1: (0..n).map(|i| wrap(i as isize + 1)).collect(),
        p2: (0..n).map(|i| wrap(i as isize + 2)).collect(),
    }
}

/// Gradient, divergence and curl on one grid at one stencil order.
pub struct SpatialOps {
    grid: Grid,
    order: StencilOrder,
    tables: [AxisTable; 3],
}

impl SpatialOps {
    pub fn new(grid: Grid, order: StencilOrder) -> Self {
        let [nx, ny, nz] = grid.dims();
        Self {
            grid,
            order,
            tables: [axis_table(nx), axis_table(ny), axis_table(nz)],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn order(&self) -> StencilOrder {
        self.order
    }

    /// Centered first derivative along `axis`, periodic wrap.
    fn derivative_axis(&self, f: &[f64], axis: usize, out: &mut [f64]) {
        let [nx, ny, nz] = self.grid.dims();
        debug_assert_eq!(f.len(), self.grid.cell_count());
        if self.grid.dims()[axis] == 1 {
            out.fill(0.0);
            return;
        }
        let stride = [1usize, nx, nx * ny][axis];
        let inv = 1.0 / self.grid.spacing()[axis];
        let tab = &self.tables[axis];

        let mut idx = 0usize;
        match self.order {
            StencilOrder::Two => {
                let c = 0.5 * inv;
                for k in 0..nz {
                    for j in 0..ny {
                        for i in 0..nx {
                            let ca = [i, j, k][axis];
                            let base = idx - ca * stride;
                            out[idx] =
                                c * (f[base + tab.p1[ca] * stride] - f[base + tab.m1[ca] * stride]);
                            idx += 1;
                        }
                    }
                }
            }
            StencilOrder::Four => {
                let c = inv / 12.0;
                for k in 0..nz {
                    for j in 0..ny {
                        for i in 0..nx {
                            let ca = [i, j, k][axis];
                            let base = idx - ca * stride;
                            let fp1 = f[base + tab.p1[ca] * stride];
                            let fm1 = f[base + tab.m1[ca] * stride];
                            let fp2 = f[base + tab.p2[ca] * stride];
                            let fm2 = f[base + tab.m2[ca] * stride];
                            out[idx] = c * (8.0 * (fp1 - fm1) - (fp2 - fm2));
                            idx += 1;
                        }
                    }
                }
            }
        }
    }

    fn derivative(&self, f: &[f64], axis: usize) -> Vec<f64> {
        let mut out = vec![0.0; f.len()];
        self.derivative_axis(f, axis, &mut out);
        out
    }

    pub fn grad(&self, f: &ScalarField) -> VectorField {
        let mut out = VectorField::zeros(self.grid);
        for axis in 0..3 {
            self.derivative_axis(f.data(), axis, out.comp_mut(axis));
        }
        out
    }

    pub fn div(&self, v: &VectorField) -> ScalarField {
        let dx = self.derivative(v.comp(0), 0);
        let dy = self.derivative(v.comp(1), 1);
        let dz = self.derivative(v.comp(2), 2);
        let mut out = ScalarField::zeros(self.grid);
        for (o, ((a, b), c)) in out.data_mut().iter_mut().zip(dx.iter().zip(&dy).zip(&dz)) {
            *o = a + b + c;
        }
        out
    }

    pub fn curl(&self, v: &VectorField) -> VectorField {
        let dy_fz = self.derivative(v.comp(2), 1);
        let dz_fy = self.derivative(v.comp(1), 2);
        let dz_fx = self.derivative(v.comp(0), 2);
        let dx_fz = self.derivative(v.comp(2), 0);
        let dx_fy = self.derivative(v.comp(1), 0);
        let dy_fx = self.derivative(v.comp(0), 1);

        let mut out = VectorField::zeros(self.grid);
        for (o, (a, b)) in out.comp_mut(0).iter_mut().zip(dy_fz.iter().zip(&dz_fy)) {
            *o = a - b;
        }
        for (o, (a, b)) in out.comp_mut(1).iter_mut().zip(dz_fx.iter().zip(&dx_fz)) {
            *o = a - b;
        }
        for (o, (a, b)) in out.comp_mut(2).iter_mut().zip(dx_fy.iter().zip(&dy_fx)) {
            *o = a - b;
        }
        out
    }

    /// Complex divergence: the real path applied to each part separately,
    /// so real/imaginary splits of complex residuals match the real-system
    /// residuals bit for bit.
    pub fn div_complex(&self, v: &ComplexVectorField) -> ComplexScalarField {
        ComplexScalarField {
            re: self.div(&v.re),
            im: self.div(&v.im),
        }
    }

    pub fn curl_complex(&self, v: &ComplexVectorField) -> ComplexVectorField {
        ComplexVectorField {
            re: self.curl(&v.re),
            im: self.curl(&v.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_vector_field(grid: Grid, seed: u64) -> VectorField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = VectorField::zeros(grid);
        for c in 0..3 {
            for x in v.comp_mut(c) {
                *x = rng.random_range(-1.0..1.0);
            }
        }
        v
    }

    fn random_scalar_field(grid: Grid, seed: u64) -> ScalarField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = ScalarField::zeros(grid);
        for x in f.data_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
        f
    }

    #[test]
    fn order_validation() {
        assert!(StencilOrder::from_usize(2).is_ok());
        assert!(StencilOrder::from_usize(4).is_ok());
        assert!(matches!(
            StencilOrder::from_usize(3),
            Err(Error::UnsupportedOrder(3))
        ));
    }

    #[test]
    fn grad_of_constant_is_zero() {
        let grid = Grid::cube(8, 0.5).unwrap();
        for order in [StencilOrder::Two, StencilOrder::Four] {
            let ops = SpatialOps::new(grid, order);
            let f = ScalarField::from_fn(grid, |_| 3.25);
            let g = ops.grad(&f);
            assert_eq!(g.max_abs(), 0.0);
        }
    }

    #[test]
    fn div_curl_commute_to_roundoff() {
        let grid = Grid::cube(8, 1.0).unwrap();
        for order in [StencilOrder::Two, StencilOrder::Four] {
            let ops = SpatialOps::new(grid, order);
            let v = random_vector_field(grid, 7);
            let dc = ops.div(&ops.curl(&v));
            assert!(
                dc.max_abs() < 1e-13,
                "order {:?}: div curl = {}",
                order,
                dc.max_abs()
            );
        }
    }

    #[test]
    fn curl_grad_commutes_to_roundoff() {
        let grid = Grid::cube(8, 1.0).unwrap();
        for order in [StencilOrder::Two, StencilOrder::Four] {
            let ops = SpatialOps::new(grid, order);
            let f = random_scalar_field(grid, 11);
            let cg = ops.curl(&ops.grad(&f));
            assert!(cg.max_abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_discrete_symbol() {
        // div of sin(kx) x_hat must equal k_eff cos(kx) exactly (up to
        // rounding): the centered stencil acts diagonally on sampled
        // sinusoids with eigenvalue i k_eff.
        let n = 64;
        let dx = std::f64::consts::TAU / n as f64;
        let grid = Grid::line(n, dx).unwrap();
        let k = 3.0;
        for order in [StencilOrder::Two, StencilOrder::Four] {
            let ops = SpatialOps::new(grid, order);
            let v = VectorField::from_fn(grid, |p| [(k * p[0]).sin(), 0.0, 0.0]);
            let d = ops.div(&v);
            let k_eff = order.wavenumber_symbol(k, dx);
            let expected = ScalarField::from_fn(grid, |p| k_eff * (k * p[0]).cos());
            let err = d
                .data()
                .iter()
                .zip(expected.data())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-12, "order {:?}: err {}", order, err);
        }
    }

    #[test]
    fn inactive_axis_derivatives_vanish() {
        let grid = Grid::line(16, 0.25).unwrap();
        let ops = SpatialOps::new(grid, StencilOrder::Four);
        let f = ScalarField::from_fn(grid, |p| (p[0]).cos());
        let g = ops.grad(&f);
        assert_eq!(g.comp(1).iter().fold(0.0f64, |m, v| m.max(v.abs())), 0.0);
        assert_eq!(g.comp(2).iter().fold(0.0f64, |m, v| m.max(v.abs())), 0.0);
    }

    #[test]
    fn derivative_is_skew_adjoint() {
        // sum f (D g) = -sum (D f) g on the periodic grid.
        let grid = Grid::cube(8, 0.7).unwrap();
        for order in [StencilOrder::Two, StencilOrder::Four] {
            let ops = SpatialOps::new(grid, order);
            let f = random_scalar_field(grid, 3);
            let g = random_scalar_field(grid, 5);
            for axis in 0..3 {
                let df = ops.derivative(f.data(), axis);
                let dg = ops.derivative(g.data(), axis);
                let lhs: f64 = f.data().iter().zip(&dg).map(|(a, b)| a * b).sum();
                let rhs: f64 = df.iter().zip(g.data()).map(|(a, b)| a * b).sum();
                assert!(
                    (lhs + rhs).abs() < 1e-11,
                    "axis {axis} order {order:?}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn symbol_small_k_limit() {
        // k_eff -> k as k dx -> 0, fourth order closer than second.
        let dx = 0.05;
        let k = 1.0;
        let e2 = (StencilOrder::Two.wavenumber_symbol(k, dx) - k).abs();
        let e4 = (StencilOrder::Four.wavenumber_symbol(k, dx) - k).abs();
        assert!(e2 < 1e-3);
        assert!(e4 < 1e-6);
        assert!(e4 < e2);
    }

    #[test]
    fn complex_ops_are_componentwise() {
        let grid = Grid::cube(8, 0.9).unwrap();
        let ops = SpatialOps::new(grid, StencilOrder::Four);
        let re = random_vector_field(grid, 21);
        let im = random_vector_field(grid, 22);
        let c = ComplexVectorField {
            re: re.clone(),
            im: im.clone(),
        };
        assert_eq!(ops.curl_complex(&c).re, ops.curl(&re));
        assert_eq!(ops.curl_complex(&c).im, ops.curl(&im));
        assert_eq!(ops.div_complex(&c).re, ops.div(&re));
    }
}
