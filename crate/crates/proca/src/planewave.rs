//! Exact continuum plane-wave solutions of the massive vector field
//! system, used as analytic oracles and as initial data.
//!
//! Convention: every field is the real part of amplitude * exp(i(k.x - w t)).
//! The amplitudes are built so the full first-order system (both curl
//! equations, both divergence constraints, the potential reconstruction
//! and the Lorenz relation) is satisfied identically:
//!
//!   transverse:   A = amp e_pol, phi = 0,   E = i w A,          B = i k x A
//!   longitudinal: A = amp k_hat, phi = amp |k|/w, E = i amp (mu^2/w) k_hat, B = 0
//!
//! with w = sqrt(k.k + mu^2). The longitudinal branch exists only for
//! mu > 0; at mu = 0 it degenerates to a pure-gauge mode with no fields.

use crate::algebra::matrix::{vec3_cross, vec3_scale};
use crate::error::{Error, Result};
use crate::grid::{EMFieldState, Grid};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeKind {
    Transverse1,
    Transverse2,
    Longitudinal,
}

impl std::fmt::Display for ModeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModeKind::Transverse1 => write!(f, "transverse1"),
            ModeKind::Transverse2 => write!(f, "transverse2"),
            ModeKind::Longitudinal => write!(f, "longitudinal"),
        }
    }
}

impl ModeKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "transverse1" | "transverse-1" => Ok(ModeKind::Transverse1),
            "transverse2" | "transverse-2" => Ok(ModeKind::Transverse2),
            "longitudinal" => Ok(ModeKind::Longitudinal),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode kind '{other}' (expected transverse1, transverse2, longitudinal)"
            ))),
        }
    }
}

/// One consistent plane-wave solution: wavevector, frequency and the
/// complex amplitudes of all four fields.
#[derive(Clone, Debug)]
pub struct PlaneWaveMode {
    pub k: [f64; 3],
    pub omega: f64,
    pub mu: f64,
    pub kind: ModeKind,
    pub e_amp: [Complex64; 3],
    pub b_amp: [Complex64; 3],
    pub a_amp: [Complex64; 3],
    pub phi_amp: Complex64,
}

/// w = sqrt(k.k + mu^2), the on-shell frequency of a free mode.
pub fn dispersion(k: [f64; 3], mu: f64) -> Result<f64> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(Error::NegativeMass(mu));
    }
    Ok((k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mu * mu).sqrt())
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Deterministic transverse polarization pair: for k not parallel to z,
/// e1 = normalize(k x z_hat) and e2 = normalize(k x e1); for k along z,
/// (x_hat, y_hat).
pub fn polarization_basis(k: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    if k[0] == 0.0 && k[1] == 0.0 {
        return ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
    }
    // k x z_hat = (ky, -kx, 0)
    let e1_raw = [k[1], -k[0], 0.0];
    let n1 = norm3(e1_raw);
    let e1 = [e1_raw[0] / n1, e1_raw[1] / n1, e1_raw[2] / n1];
    let e2_raw = [
        k[1] * e1[2] - k[2] * e1[1],
        k[2] * e1[0] - k[0] * e1[2],
        k[0] * e1[1] - k[1] * e1[0],
    ];
    let n2 = norm3(e2_raw);
    (
        [e1[0], e1[1], e1[2]],
        [e2_raw[0] / n2, e2_raw[1] / n2, e2_raw[2] / n2],
    )
}

fn real_to_complex3(v: [f64; 3]) -> [Complex64; 3] {
    [
        Complex64::new(v[0], 0.0),
        Complex64::new(v[1], 0.0),
        Complex64::new(v[2], 0.0),
    ]
}

/// Builds a mode whose sampled fields solve the continuum system exactly.
pub fn make_mode(
    k: [f64; 3],
    mu: f64,
    kind: ModeKind,
    amplitude: Complex64,
) -> Result<PlaneWaveMode> {
    discrete_mode(k, k, mu, kind, amplitude)
}

/// Same construction with the algebraic wavevector decoupled from the
/// sampling wavevector. With `k_alg` set to the stencil's effective
/// wavenumbers this produces the exact solution of the *semi-discrete*
/// system: the oracle for time-integrator convergence, and initial data
/// whose monitored constraints vanish to round-off on the grid.
pub fn discrete_mode(
    k_phase: [f64; 3],
    k_alg: [f64; 3],
    mu: f64,
    kind: ModeKind,
    amplitude: Complex64,
) -> Result<PlaneWaveMode> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(Error::NegativeMass(mu));
    }
    let i = Complex64::new(0.0, 1.0);
    let k_norm = norm3(k_alg);
    let omega = dispersion(k_alg, mu)?;

    match kind {
        ModeKind::Transverse1 | ModeKind::Transverse2 => {
            if k_norm == 0.0 {
                return Err(Error::TransverseZeroWavevector);
            }
            let (e1, e2) = polarization_basis(k_alg);
            let pol = if kind == ModeKind::Transverse1 {
                e1
            } else {
                e2
            };
            let a_amp = vec3_scale(&amplitude, &real_to_complex3(pol));
            let e_amp = vec3_scale(&(i * omega), &a_amp);
            let kc = real_to_complex3(k_alg);
            let b_amp = vec3_scale(&i, &vec3_cross(&kc, &a_amp));
            Ok(PlaneWaveMode {
                k: k_phase,
                omega,
                mu,
                kind,
                e_amp,
                b_amp,
                a_amp,
                phi_amp: Complex64::new(0.0, 0.0),
            })
        }
        ModeKind::Longitudinal => {
            if mu <= 0.0 {
                return Err(Error::LongitudinalRequiresMass);
            }
            let dir = if k_norm == 0.0 {
                [0.0, 0.0, 1.0]
            } else {
                [k_alg[0] / k_norm, k_alg[1] / k_norm, k_alg[2] / k_norm]
            };
            let dir_c = real_to_complex3(dir);
            let a_amp = vec3_scale(&amplitude, &dir_c);
            let phi_amp = amplitude * (k_norm / omega);
            let e_amp = vec3_scale(&(i * amplitude * (mu * mu / omega)), &dir_c);
            Ok(PlaneWaveMode {
                k: k_phase,
                omega,
                mu,
                kind,
                e_amp,
                b_amp: [Complex64::new(0.0, 0.0); 3],
                a_amp,
                phi_amp,
            })
        }
    }
}

/// A wavevector fits the periodic box when every component is an integer
/// multiple of that axis' fundamental 2 pi / L (and zero on inactive axes).
pub fn check_commensurate(k: [f64; 3], grid: &Grid) -> Result<()> {
    for (axis, &kc) in k.iter().enumerate() {
        if !grid.is_active(axis) {
            if kc != 0.0 {
                return Err(Error::Incommensurate(format!(
                    "k[{axis}] = {kc} on an inactive axis"
                )));
            }
            continue;
        }
        let cycles = kc * grid.length(axis) / std::f64::consts::TAU;
        if (cycles - cycles.round()).abs() > 1e-9 * cycles.abs().max(1.0) {
            return Err(Error::Incommensurate(format!(
                "k[{axis}] = {kc} gives {cycles} wavelengths across the box"
            )));
        }
    }
    Ok(())
}

fn sample_with(
    mode: &PlaneWaveMode,
    grid: &Grid,
    t: f64,
    scale: Complex64,
) -> Result<EMFieldState> {
    check_commensurate(mode.k, grid)?;
    let e_amp: [Complex64; 3] = std::array::from_fn(|c| scale * mode.e_amp[c]);
    let b_amp: [Complex64; 3] = std::array::from_fn(|c| scale * mode.b_amp[c]);
    let a_amp: [Complex64; 3] = std::array::from_fn(|c| scale * mode.a_amp[c]);
    let phi_amp = scale * mode.phi_amp;

    let mut state = EMFieldState::zeros(*grid);
    let [nx, ny, nz] = grid.dims();
    let mut idx = 0usize;
    for kk in 0..nz {
        for jj in 0..ny {
            for ii in 0..nx {
                let x = grid.position(ii, jj, kk);
                let theta = mode.k[0] * x[0] + mode.k[1] * x[1] + mode.k[2] * x[2] - mode.omega * t;
                let (s, c) = theta.sin_cos();
                for comp in 0..3 {
                    state.e.comp_mut(comp)[idx] = e_amp[comp].re * c - e_amp[comp].im * s;
                    state.b.comp_mut(comp)[idx] = b_amp[comp].re * c - b_amp[comp].im * s;
                    state.a.comp_mut(comp)[idx] = a_amp[comp].re * c - a_amp[comp].im * s;
                }
                state.phi.data_mut()[idx] = phi_amp.re * c - phi_amp.im * s;
                idx += 1;
            }
        }
    }
    Ok(state)
}

/// Real-part sampling of the mode on the grid at time `t`.
pub fn sample(mode: &PlaneWaveMode, grid: &Grid, t: f64) -> Result<EMFieldState> {
    sample_with(mode, grid, t, Complex64::new(1.0, 0.0))
}

/// Analytic time derivative of every field at time `t` (amplitudes times
/// -i w), for residual checks that need d/dt supplied externally.
pub fn sample_time_derivative(mode: &PlaneWaveMode, grid: &Grid, t: f64) -> Result<EMFieldState> {
    sample_with(mode, grid, t, Complex64::new(0.0, -mode.omega))
}
