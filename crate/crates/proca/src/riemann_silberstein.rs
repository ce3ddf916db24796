//! The Riemann-Silberstein field Psi = E - i B and the first-order
//! complex field equations it satisfies.
//!
//! One complex 3-vector carries both real fields. The massive system in
//! complex form is
//!
//!   Psi = -dA/dt - i curl A - grad phi        (potential reconstruction)
//!   div Psi = -mu^2 phi                       (divergence relation)
//!   dPsi/dt - i curl Psi = mu^2 A             (evolution equation)
//!
//! and splitting each equation into real and imaginary parts recovers the
//! usual real pairs: E/B reconstruction from the potentials, the two
//! divergence constraints, and the two curl equations. The residual
//! functions here compute the complex left-hand sides pointwise with the
//! same stencils the grid solver uses, and real/imaginary parts are taken
//! through the identical real code path, so the split is exact in floating
//! point -- the complex residual modulus can never exceed sqrt(2) times
//! the larger of the corresponding real residuals.
//!
//! Time derivatives are supplied by the caller (solver states, finite
//! differences, or analytic modes); this module does no time integration.

use crate::error::{Error, Result};
use crate::grid::{ComplexScalarField, ComplexVectorField, EMFieldState, ScalarField, VectorField};
use crate::stencil::SpatialOps;

/// Complex field Psi = E - i B, stored as split real/imaginary parts.
pub type RsField = ComplexVectorField;

/// Pointwise Psi = E - i B.
pub fn compose(e: &VectorField, b: &VectorField) -> Result<RsField> {
    if e.grid() != b.grid() {
        return Err(Error::ShapeMismatch(
            "E and B grids differ in compose".into(),
        ));
    }
    let mut im = VectorField::zeros(b.grid());
    for c in 0..3 {
        for (o, v) in im.comp_mut(c).iter_mut().zip(b.comp(c)) {
            *o = -v;
        }
    }
    Ok(RsField { re: e.clone(), im })
}

/// Inverse of [`compose`]: E = Re Psi, B = -Im Psi.
pub fn decompose(psi: &RsField) -> (VectorField, VectorField) {
    let mut b = VectorField::zeros(psi.grid());
    for c in 0..3 {
        for (o, v) in b.comp_mut(c).iter_mut().zip(psi.im.comp(c)) {
            *o = -v;
        }
    }
    (psi.re.clone(), b)
}

/// Externally supplied time derivatives for the residual evaluations.
pub struct TimeDerivatives {
    pub da_dt: VectorField,
    pub dpsi_dt: ComplexVectorField,
}

/// Pointwise residuals of the three complex massive-field equations.
pub struct ProcaResiduals {
    /// Psi + dA/dt + i curl A + grad phi
    pub reconstruction: ComplexVectorField,
    /// div Psi + mu^2 phi
    pub divergence: ComplexScalarField,
    /// dPsi/dt - i curl Psi - mu^2 A
    pub evolution: ComplexVectorField,
}

/// Pointwise residuals of the massless (vacuum) complex equations.
pub struct MaxwellResiduals {
    /// dPsi/dt - i curl Psi
    pub evolution: ComplexVectorField,
    /// div Psi
    pub divergence: ComplexScalarField,
}

/// Evaluates the three massive-system residuals on one grid snapshot.
pub fn proca_rs_residuals(
    psi: &RsField,
    a_potential: &VectorField,
    phi: &ScalarField,
    mu: f64,
    derivatives: &TimeDerivatives,
    ops: &SpatialOps,
) -> Result<ProcaResiduals> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(Error::NegativeMass(mu));
    }
    let grid = psi.grid();
    if a_potential.grid() != grid
        || phi.grid() != grid
        || derivatives.da_dt.grid() != grid
        || derivatives.dpsi_dt.grid() != grid
        || ops.grid() != grid
    {
        return Err(Error::ShapeMismatch(
            "psi, potentials, derivatives and stencil grids differ".into(),
        ));
    }
    let mu2 = mu * mu;

    // reconstruction: real part E + dA/dt + grad phi,
    // imaginary part -B + curl A
    let grad_phi = ops.grad(phi);
    let curl_a = ops.curl(a_potential);
    let mut reconstruction = ComplexVectorField::zeros(grid);
    for c in 0..3 {
        for (((o, psi_re), da), gp) in reconstruction
            .re
            .comp_mut(c)
            .iter_mut()
            .zip(psi.re.comp(c))
            .zip(derivatives.da_dt.comp(c))
            .zip(grad_phi.comp(c))
        {
            *o = psi_re + da + gp;
        }
        for ((o, psi_im), ca) in reconstruction
            .im
            .comp_mut(c)
            .iter_mut()
            .zip(psi.im.comp(c))
            .zip(curl_a.comp(c))
        {
            *o = psi_im + ca;
        }
    }

    // divergence: div Psi + mu^2 phi (phi is real, so only the real part
    // shifts)
    let mut divergence = ops.div_complex(psi);
    for (o, p) in divergence.re.data_mut().iter_mut().zip(phi.data()) {
        *o += mu2 * p;
    }

    // evolution: dPsi/dt - i curl Psi - mu^2 A, i.e.
    //   re: dRe/dt + curl(Im Psi) - mu^2 A
    //   im: dIm/dt - curl(Re Psi)
    let curl_psi = ops.curl_complex(psi);
    let mut evolution = ComplexVectorField::zeros(grid);
    for c in 0..3 {
        for (((o, d), ci), a) in evolution
            .re
            .comp_mut(c)
            .iter_mut()
            .zip(derivatives.dpsi_dt.re.comp(c))
            .zip(curl_psi.im.comp(c))
            .zip(a_potential.comp(c))
        {
            *o = d + ci - mu2 * a;
        }
        for ((o, d), cr) in evolution
            .im
            .comp_mut(c)
            .iter_mut()
            .zip(derivatives.dpsi_dt.im.comp(c))
            .zip(curl_psi.re.comp(c))
        {
            *o = d - cr;
        }
    }

    Ok(ProcaResiduals {
        reconstruction,
        divergence,
        evolution,
    })
}

/// Massless limit of the residuals: the evolution equation loses its
/// mass term and the divergence of Psi must vanish outright.
pub fn maxwell_rs_residuals(
    psi: &RsField,
    dpsi_dt: &ComplexVectorField,
    ops: &SpatialOps,
) -> Result<MaxwellResiduals> {
    let grid = psi.grid();
    if dpsi_dt.grid() != grid || ops.grid() != grid {
        return Err(Error::ShapeMismatch(
            "psi, derivative and stencil grids differ".into(),
        ));
    }
    let curl_psi = ops.curl_complex(psi);
    let mut evolution = ComplexVectorField::zeros(grid);
    for c in 0..3 {
        for ((o, d), ci) in evolution
            .re
            .comp_mut(c)
            .iter_mut()
            .zip(dpsi_dt.re.comp(c))
            .zip(curl_psi.im.comp(c))
        {
            *o = d + ci;
        }
        for ((o, d), cr) in evolution
            .im
            .comp_mut(c)
            .iter_mut()
            .zip(dpsi_dt.im.comp(c))
            .zip(curl_psi.re.comp(c))
        {
            *o = d - cr;
        }
    }
    Ok(MaxwellResiduals {
        evolution,
        divergence: ops.div_complex(psi),
    })
}

/// Residuals of the real first-order system, for equivalence checks
/// against the complex residuals above:
/// gauss = div E + mu^2 phi, div_b = div B,
/// ampere = dE/dt - curl B - mu^2 A, faraday = dB/dt + curl E.
pub struct RealSystemResiduals {
    pub gauss: ScalarField,
    pub div_b: ScalarField,
    pub ampere: VectorField,
    pub faraday: VectorField,
}

pub fn real_system_residuals(
    state: &EMFieldState,
    de_dt: &VectorField,
    db_dt: &VectorField,
    mu: f64,
    ops: &SpatialOps,
) -> Result<RealSystemResiduals> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(Error::NegativeMass(mu));
    }
    let grid = state.grid();
    if de_dt.grid() != grid || db_dt.grid() != grid || ops.grid() != grid {
        return Err(Error::ShapeMismatch(
            "state, derivatives and stencil grids differ".into(),
        ));
    }
    let mu2 = mu * mu;

    let mut gauss = ops.div(&state.e);
    for (o, p) in gauss.data_mut().iter_mut().zip(state.phi.data()) {
        *o += mu2 * p;
    }
    let div_b = ops.div(&state.b);

    let curl_b = ops.curl(&state.b);
    let curl_e = ops.curl(&state.e);
    let mut ampere = VectorField::zeros(grid);
    let mut faraday = VectorField::zeros(grid);
    for c in 0..3 {
        for (((o, d), cb), a) in ampere
            .comp_mut(c)
            .iter_mut()
            .zip(de_dt.comp(c))
            .zip(curl_b.comp(c))
            .zip(state.a.comp(c))
        {
            *o = d - cb - mu2 * a;
        }
        for ((o, d), ce) in faraday
            .comp_mut(c)
            .iter_mut()
            .zip(db_dt.comp(c))
            .zip(curl_e.comp(c))
        {
            *o = d + ce;
        }
    }

    Ok(RealSystemResiduals {
        gauss,
        div_b,
        ampere,
        faraday,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::planewave::{self, ModeKind};
    use crate::stencil::StencilOrder;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tau() -> f64 {
        std::f64::consts::TAU
    }

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

    #[test]
    fn compose_pointwise_values() {
        let g = Grid::line(8, 1.0).unwrap();
        let e = VectorField::from_fn(g, |_| [1.0, 0.0, 0.0]);
        let b = VectorField::from_fn(g, |_| [0.0, 1.0, 0.0]);
        let psi = compose(&e, &b).unwrap();
        // Psi = (1, -i, 0)
        assert_eq!(psi.re.comp(0)[0], 1.0);
        assert_eq!(psi.im.comp(0)[0], 0.0);
        assert_eq!(psi.re.comp(1)[0], 0.0);
        assert_eq!(psi.im.comp(1)[0], -1.0);
    }

    #[test]
    fn compose_of_pure_e_is_real() {
        let g = Grid::line(8, 1.0).unwrap();
        let e = random_vector_field(g, 1);
        let b = VectorField::zeros(g);
        let psi = compose(&e, &b).unwrap();
        assert_eq!(psi.im.max_abs(), 0.0);
        assert_eq!(psi.re, e);
    }

    #[test]
    fn decompose_pure_imaginary() {
        let g = Grid::line(8, 1.0).unwrap();
        // Psi = (i, 0, 0) -> E = 0, B = (-1, 0, 0)
        let mut psi = RsField::zeros(g);
        psi.im.comp_mut(0).fill(1.0);
        let (e, b) = decompose(&psi);
        assert_eq!(e.max_abs(), 0.0);
        assert!(b.comp(0).iter().all(|v| *v == -1.0));
    }

    #[test]
    fn compose_rejects_shape_mismatch() {
        let g1 = Grid::line(8, 1.0).unwrap();
        let g2 = Grid::line(16, 1.0).unwrap();
        let r = compose(&VectorField::zeros(g1), &VectorField::zeros(g2));
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn zero_fields_zero_residuals() {
        let g = Grid::line(8, 0.5).unwrap();
        let ops = SpatialOps::new(g, StencilOrder::Two);
        let psi = RsField::zeros(g);
        let derivs = TimeDerivatives {
            da_dt: VectorField::zeros(g),
            dpsi_dt: ComplexVectorField::zeros(g),
        };
        let res = proca_rs_residuals(
            &psi,
            &VectorField::zeros(g),
            &ScalarField::zeros(g),
            1.0,
            &derivs,
            &ops,
        )
        .unwrap();
        assert_eq!(res.reconstruction.max_modulus(), 0.0);
        assert_eq!(res.divergence.max_modulus(), 0.0);
        assert_eq!(res.evolution.max_modulus(), 0.0);
    }

    #[test]
    fn negative_mass_rejected() {
        let g = Grid::line(8, 0.5).unwrap();
        let ops = SpatialOps::new(g, StencilOrder::Two);
        let derivs = TimeDerivatives {
            da_dt: VectorField::zeros(g),
            dpsi_dt: ComplexVectorField::zeros(g),
        };
        let r = proca_rs_residuals(
            &RsField::zeros(g),
            &VectorField::zeros(g),
            &ScalarField::zeros(g),
            -0.5,
            &derivs,
            &ops,
        );
        assert!(matches!(r, Err(Error::NegativeMass(_))));
    }

    /// Analytic mode, discrete stencils: every residual is bounded by the
    /// stencil's wavenumber defect |k - k_eff| times the field scale.
    #[test]
    fn analytic_mode_residuals_at_discretization_error() {
        let n = 64;
        let dx = tau() / n as f64;
        let g = Grid::line(n, dx).unwrap();
        let k = 3.0;
        for (order, mu) in [
            (StencilOrder::Two, 0.0),
            (StencilOrder::Two, 1.0),
            (StencilOrder::Four, 0.0),
            (StencilOrder::Four, 1.0),
        ] {
            let ops = SpatialOps::new(g, order);
            let kind = ModeKind::Transverse1;
            let m = planewave::make_mode([k, 0.0, 0.0], mu, kind, 1.0.into()).unwrap();
            let t = 0.15;
            let s = planewave::sample(&m, &g, t).unwrap();
            let sd = planewave::sample_time_derivative(&m, &g, t).unwrap();
            let psi = compose(&s.e, &s.b).unwrap();
            let dpsi = compose(&sd.e, &sd.b).unwrap();
            let derivs = TimeDerivatives {
                da_dt: sd.a.clone(),
                dpsi_dt: dpsi,
            };
            let res = proca_rs_residuals(&psi, &s.a, &s.phi, mu, &derivs, &ops).unwrap();

            let k_defect = (k - order.wavenumber_symbol(k, dx)).abs();
            let scale = s.max_abs().max(1.0);
            // two stencil applications can stack in the evolution
            // residual; allow a factor 4
            let bound = 4.0 * k_defect * k.max(1.0) * scale + 1e-12;
            assert!(
                res.reconstruction.max_modulus() < bound,
                "{order:?} mu={mu} reconstruction"
            );
            assert!(
                res.divergence.max_modulus() < bound,
                "{order:?} mu={mu} divergence"
            );
            assert!(
                res.evolution.max_modulus() < bound,
                "{order:?} mu={mu} evolution"
            );
            // and fourth order beats 5e-3 at this resolution outright
            if order == StencilOrder::Four {
                assert!(res.evolution.max_modulus() < 5e-3);
            }
        }
    }

    #[test]
    fn maxwell_residuals_on_vacuum_mode() {
        let n = 64;
        let dx = tau() / n as f64;
        let g = Grid::line(n, dx).unwrap();
        let ops = SpatialOps::new(g, StencilOrder::Four);
        let m =
            planewave::make_mode([2.0, 0.0, 0.0], 0.0, ModeKind::Transverse1, 1.0.into()).unwrap();
        let s = planewave::sample(&m, &g, 0.4).unwrap();
        let sd = planewave::sample_time_derivative(&m, &g, 0.4).unwrap();
        let psi = compose(&s.e, &s.b).unwrap();
        let dpsi = compose(&sd.e, &sd.b).unwrap();
        let res = maxwell_rs_residuals(&psi, &dpsi, &ops).unwrap();
        let k_defect = (2.0 - StencilOrder::Four.wavenumber_symbol(2.0, dx)).abs();
        assert!(res.evolution.max_modulus() < 4.0 * k_defect * 2.0 + 1e-12);
        // axis-aligned transverse mode: div Psi vanishes identically
        assert!(res.divergence.max_modulus() < 1e-13);
    }

    #[test]
    fn static_uniform_psi_has_zero_maxwell_residuals() {
        let g = Grid::line(8, 0.5).unwrap();
        let ops = SpatialOps::new(g, StencilOrder::Two);
        let mut psi = RsField::zeros(g);
        psi.re.comp_mut(0).fill(2.0);
        psi.im.comp_mut(2).fill(-1.0);
        let res = maxwell_rs_residuals(&psi, &ComplexVectorField::zeros(g), &ops).unwrap();
        assert_eq!(res.evolution.max_modulus(), 0.0);
        assert_eq!(res.divergence.max_modulus(), 0.0);
    }

    #[test]
    fn forced_longitudinal_without_mass_violates_divergence() {
        // A longitudinal field pattern with mu = 0 cannot satisfy
        // div Psi = 0; the residual must be large and detectable.
        let n = 32;
        let dx = tau() / n as f64;
        let g = Grid::line(n, dx).unwrap();
        let ops = SpatialOps::new(g, StencilOrder::Two);
        let e = VectorField::from_fn(g, |p| [(2.0 * p[0]).sin(), 0.0, 0.0]);
        let psi = compose(&e, &VectorField::zeros(g)).unwrap();
        let res = maxwell_rs_residuals(&psi, &ComplexVectorField::zeros(g), &ops).unwrap();
        let k_eff = StencilOrder::Two.wavenumber_symbol(2.0, dx);
        assert!(res.divergence.max_modulus() > 0.9 * k_eff);
    }

    /// Splitting the complex residuals into real and imaginary parts must
    /// reproduce the real-system residuals exactly, even on arbitrary
    /// (inconsistent) fields: it is the same arithmetic.
    #[test]
    fn complex_residuals_split_into_real_residuals() {
        let g = Grid::new([16, 8, 1], [0.4, 0.3, 1.0]).unwrap();
        let ops = SpatialOps::new(g, StencilOrder::Four);
        let mu = 1.3;
        let state = EMFieldState::new(
            random_vector_field(g, 10),
            random_vector_field(g, 11),
            random_vector_field(g, 12),
            {
                let mut f = ScalarField::zeros(g);
                let mut rng = ChaCha8Rng::seed_from_u64(13);
                for x in f.data_mut() {
                    *x = rng.random_range(-1.0..1.0);
                }
                f
            },
        )
        .unwrap();
        let de_dt = random_vector_field(g, 14);
        let db_dt = random_vector_field(g, 15);

        let psi = compose(&state.e, &state.b).unwrap();
        let dpsi = compose(&de_dt, &db_dt).unwrap();
        let derivs = TimeDerivatives {
            da_dt: VectorField::zeros(g),
            dpsi_dt: dpsi,
        };
        let res = proca_rs_residuals(&psi, &state.a, &state.phi, mu, &derivs, &ops).unwrap();
        let real = real_system_residuals(&state, &de_dt, &db_dt, mu, &ops).unwrap();

        // Re(divergence) = gauss, Im(divergence) = -div B, bit for bit.
        for (a, b) in res.divergence.re.data().iter().zip(real.gauss.data()) {
            assert_eq!(a, b);
        }
        for (a, b) in res.divergence.im.data().iter().zip(real.div_b.data()) {
            assert_eq!(*a, -b);
        }
        // Re(evolution) = ampere, Im(evolution) = -faraday.
        for c in 0..3 {
            for (a, b) in res.evolution.re.comp(c).iter().zip(real.ampere.comp(c)) {
                assert_eq!(a, b);
            }
            for (a, b) in res.evolution.im.comp(c).iter().zip(real.faraday.comp(c)) {
                assert_eq!(*a, -b);
            }
        }
    }

    /// At mu = 0 the massive residuals collapse onto the massless pair,
    /// bit for bit, on fields taken from an actual massless solver run.
    #[test]
    fn massless_limit_reduces_to_maxwell_residuals() {
        let n = 32;
        let g = Grid::line(n, tau() / n as f64).unwrap();
        let ops = SpatialOps::new(g, StencilOrder::Four);
        let m =
            planewave::make_mode([2.0, 0.0, 0.0], 0.0, ModeKind::Transverse1, 1.0.into()).unwrap();
        let init = planewave::sample(&m, &g, 0.0).unwrap();
        let cfg = crate::solver::SolverConfig {
            mu: 0.0,
            dt: 0.3 * crate::solver::cfl_limit(&g, StencilOrder::Four),
            stencil_order: StencilOrder::Four,
            steps: 50,
            cfl_check: true,
            output_every: 0,
        };
        let run = crate::solver::evolve(&init, &cfg).unwrap();
        let state = run.final_state;
        let deriv = crate::solver::rhs(&state, 0.0, &ops);

        let psi = compose(&state.e, &state.b).unwrap();
        let dpsi = compose(&deriv.e, &deriv.b).unwrap();
        let derivs = TimeDerivatives {
            da_dt: deriv.a.clone(),
            dpsi_dt: dpsi.clone(),
        };
        let massive = proca_rs_residuals(&psi, &state.a, &state.phi, 0.0, &derivs, &ops).unwrap();
        let massless = maxwell_rs_residuals(&psi, &dpsi, &ops).unwrap();

        for (a, b) in massive
            .divergence
            .re
            .data()
            .iter()
            .zip(massless.divergence.re.data())
        {
            assert_eq!(a, b);
        }
        for (a, b) in massive
            .divergence
            .im
            .data()
            .iter()
            .zip(massless.divergence.im.data())
        {
            assert_eq!(a, b);
        }
        for c in 0..3 {
            for (a, b) in massive
                .evolution
                .re
                .comp(c)
                .iter()
                .zip(massless.evolution.re.comp(c))
            {
                assert_eq!(a, b);
            }
            for (a, b) in massive
                .evolution
                .im
                .comp(c)
                .iter()
                .zip(massless.evolution.im.comp(c))
            {
                assert_eq!(a, b);
            }
        }
    }

    proptest! {
        #[test]
        fn compose_decompose_roundtrip(seed in 0u64..1000) {
            let g = Grid::line(8, 0.5).unwrap();
            let e = random_vector_field(g, seed);
            let b = random_vector_field(g, seed.wrapping_add(991));
            let psi = compose(&e, &b).unwrap();
            let (e2, b2) = decompose(&psi);
            prop_assert_eq!(e, e2);
            prop_assert_eq!(b, b2);
        }
    }
}
