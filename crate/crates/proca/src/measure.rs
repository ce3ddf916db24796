//! Measurements against analytic oracles: oscillation-frequency
//! extraction, dispersion-relation scans, the static London screening
//! profile, and the time-integrator convergence study.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::planewave::{self, ModeKind};
use crate::solver::{cfl_limit, step_rk4};
use crate::stencil::{SpatialOps, StencilOrder};
use serde::Serialize;

/// Result of fitting a probe series to a cos(w t) + b sin(w t).
#[derive(Clone, Copy, Debug)]
pub struct FrequencyFit {
    /// Least-squares frequency.
    pub omega: f64,
    /// Cross-check estimate from interpolated zero crossings.
    pub omega_zero_crossing: f64,
    pub amplitude: f64,
    /// Sum of squared residuals at the fitted frequency.
    pub ssr: f64,
}

fn sinusoid_ssr(samples: &[f64], dt: f64, omega: f64) -> (f64, f64, f64) {
    let mut scc = 0.0;
    let mut scs = 0.0;
    let mut sss = 0.0;
    let mut scy = 0.0;
    let mut ssy = 0.0;
    for (n, y) in samples.iter().enumerate() {
        let (s, c) = (omega * n as f64 * dt).sin_cos();
        scc += c * c;
        scs += c * s;
        sss += s * s;
        scy += c * y;
        ssy += s * y;
    }
    let det = scc * sss - scs * scs;
    if det.abs() < 1e-30 {
        return (f64::INFINITY, 0.0, 0.0);
    }
    let a = (sss * scy - scs * ssy) / det;
    let b = (scc * ssy - scs * scy) / det;
    let mut ssr = 0.0;
    for (n, y) in samples.iter().enumerate() {
        let (s, c) = (omega * n as f64 * dt).sin_cos();
        let r = y - a * c - b * s;
        ssr += r * r;
    }
    (ssr, a, b)
}

fn golden_minimize(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let invphi = 0.618_033_988_749_894_9_f64;
    let mut x1 = hi - invphi * (hi - lo);
    let mut x2 = lo + invphi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Extracts the oscillation frequency of a uniformly sampled probe.
///
/// Zero crossings give the first estimate; the least-squares fit of
/// a cos + b sin refines it, with a coarse scan over the bracket first so
/// the golden-section refinement cannot lock onto a spectral side lobe.
pub fn fit_frequency(samples: &[f64], dt: f64) -> Result<FrequencyFit> {
    if samples.len() < 8 || dt.is_nan() || dt <= 0.0 {
        return Err(Error::UnresolvedFrequency);
    }
    // interpolated zero crossings
    let mut crossings = Vec::new();
    for n in 1..samples.len() {
        let (y0, y1) = (samples[n - 1], samples[n]);
        if y0 == 0.0 {
            continue;
        }
        if y1 == 0.0 {
            crossings.push(n as f64 * dt);
        } else if y0 * y1 < 0.0 {
            let frac = y0 / (y0 - y1);
            crossings.push((n as f64 - 1.0 + frac) * dt);
        }
    }
    if crossings.len() < 5 {
        return Err(Error::UnresolvedFrequency);
    }
    let span = crossings.last().unwrap() - crossings.first().unwrap();
    let mean_gap = span / (crossings.len() - 1) as f64;
    let omega_zc = std::f64::consts::PI / mean_gap;

    // coarse scan, then golden-section refine around the best cell
    let lo = 0.8 * omega_zc;
    let hi = 1.2 * omega_zc;
    let cells = 256;
    let mut best = lo;
    let mut best_ssr = f64::INFINITY;
    for c in 0..=cells {
        let w = lo + (hi - lo) * c as f64 / cells as f64;
        let (ssr, _, _) = sinusoid_ssr(samples, dt, w);
        if ssr < best_ssr {
            best_ssr = ssr;
            best = w;
        }
    }
    let cell = (hi - lo) / cells as f64;
    let omega = golden_minimize(
        |w| sinusoid_ssr(samples, dt, w).0,
        best - cell,
        best + cell,
        120,
    );
    let (ssr, a, b) = sinusoid_ssr(samples, dt, omega);
    Ok(FrequencyFit {
        omega,
        omega_zero_crossing: omega_zc,
        amplitude: a.hypot(b),
        ssr,
    })
}

/// Settings for one dispersion measurement run.
#[derive(Clone, Copy, Debug)]
pub struct DispersionRunConfig {
    pub grid: Grid,
    pub stencil_order: StencilOrder,
    /// Fraction of the stability limit used as the time step.
    pub cfl: f64,
    /// Number of analytic periods to evolve.
    pub periods: f64,
}

impl DispersionRunConfig {
    pub fn new(grid: Grid) -> Self {
        Self {
            grid,
            stencil_order: StencilOrder::Four,
            cfl: 0.5,
            periods: 6.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DispersionMeasurement {
    pub k: [f64; 3],
    pub mu: f64,
    pub omega_analytic: f64,
    pub omega_measured: f64,
    pub omega_zero_crossing: f64,
    pub rel_err: f64,
    /// False when max |k_a| dx_a > 1: the mode is badly resolved and the
    /// discretization error dominates the measurement.
    pub resolved: bool,
}

/// Initializes a single mode, evolves several periods, and extracts the
/// oscillation frequency of a probe field component.
pub fn measure_dispersion(
    k: [f64; 3],
    mu: f64,
    cfg: &DispersionRunConfig,
) -> Result<DispersionMeasurement> {
    planewave::check_commensurate(k, &cfg.grid)?;
    let omega_analytic = planewave::dispersion(k, mu)?;
    let k_norm = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if omega_analytic == 0.0 {
        return Err(Error::InvalidConfig(
            "k = 0 with mu = 0 does not oscillate; nothing to measure".into(),
        ));
    }
    let kind = if k_norm == 0.0 {
        ModeKind::Longitudinal
    } else {
        ModeKind::Transverse1
    };
    let mode = planewave::make_mode(k, mu, kind, 1.0.into())?;

    let spacing = cfg.grid.spacing();
    let resolved = (0..3)
        .map(|a| (k[a] * spacing[a]).abs())
        .fold(0.0f64, f64::max)
        <= 1.0;

    let dt = cfg.cfl * cfl_limit(&cfg.grid, cfg.stencil_order);
    // Run length follows the semi-discrete frequency: a poorly resolved
    // mode oscillates at sqrt(k_eff^2 + mu^2), which can sit far below the
    // analytic frequency, and the probe needs several of *those* periods.
    let k_eff_sq: f64 = k
        .iter()
        .zip(spacing)
        .map(|(kc, dx)| cfg.stencil_order.wavenumber_symbol(*kc, dx).powi(2))
        .sum();
    let omega_discrete = (k_eff_sq + mu * mu).sqrt();
    if omega_discrete <= 0.0 {
        return Err(Error::UnresolvedFrequency);
    }
    let period = std::f64::consts::TAU / omega_discrete;
    let steps = ((cfg.periods * period) / dt).ceil() as usize;

    // probe the E component with the largest amplitude, at cell 0
    let probe_comp = (0..3)
        .max_by(|&a, &b| {
            mode.e_amp[a]
                .norm()
                .partial_cmp(&mode.e_amp[b].norm())
                .unwrap()
        })
        .unwrap();

    let ops = SpatialOps::new(cfg.grid, cfg.stencil_order);
    let mut state = planewave::sample(&mode, &cfg.grid, 0.0)?;
    let mut probe = Vec::with_capacity(steps + 1);
    probe.push(state.e.comp(probe_comp)[0]);
    for step in 0..steps {
        state = step_rk4(&state, dt, mu, &ops).map_err(|e| match e {
            Error::Diverged { .. } => Error::Diverged { step },
            other => other,
        })?;
        probe.push(state.e.comp(probe_comp)[0]);
    }

    let fit = fit_frequency(&probe, dt)?;
    Ok(DispersionMeasurement {
        k,
        mu,
        omega_analytic,
        omega_measured: fit.omega,
        omega_zero_crossing: fit.omega_zero_crossing,
        rel_err: (fit.omega - omega_analytic).abs() / omega_analytic,
        resolved,
    })
}

/// Static screening profile: solves B'' = mu^2 B on [0, length] with
/// B(0) = 1, B(length) = 0 by a second-order tridiagonal solve, then fits
/// the log-linear decay. The fitted length is compared against the
/// penetration depth 1/mu.
#[derive(Clone, Debug, Serialize)]
pub struct LondonProfile {
    pub x: Vec<f64>,
    pub b: Vec<f64>,
    pub lambda_fit: f64,
    pub lambda_analytic: f64,
    pub rel_err: f64,
}

pub fn london_profile(mu: f64, length: f64, points: usize) -> Result<LondonProfile> {
    if mu <= 0.0 || !mu.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "screening solve requires mu > 0, got {mu}"
        )));
    }
    if points < 32 {
        return Err(Error::InvalidConfig(format!(
            "screening solve requires points >= 32, got {points}"
        )));
    }
    if length <= 0.0 || !length.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "screening solve requires length > 0, got {length}"
        )));
    }
    if mu * length < 6.0 {
        return Err(Error::InvalidConfig(format!(
            "mu * length = {} < 6: decay not resolvable in the box",
            mu * length
        )));
    }

    let h = length / (points - 1) as f64;
    let n_int = points - 2;
    let diag = -(2.0 + mu * mu * h * h);

    // Thomas algorithm; unit off-diagonals, right-hand side carries the
    // boundary values B(0) = 1, B(L) = 0.
    let mut c_prime = vec![0.0f64; n_int];
    let mut d_prime = vec![0.0f64; n_int];
    let mut denom = diag;
    if denom.abs() < 1e-14 {
        return Err(Error::SingularSystem);
    }
    c_prime[0] = 1.0 / denom;
    d_prime[0] = -1.0 / denom;
    for i in 1..n_int {
        denom = diag - c_prime[i - 1];
        if denom.abs() < 1e-14 {
            return Err(Error::SingularSystem);
        }
        c_prime[i] = 1.0 / denom;
        let rhs_i = 0.0;
        d_prime[i] = (rhs_i - d_prime[i - 1]) / denom;
    }

    let mut b = vec![0.0f64; points];
    b[0] = 1.0;
    b[points - 1] = 0.0;
    b[n_int] = d_prime[n_int - 1];
    for i in (0..n_int - 1).rev() {
        b[i + 1] = d_prime[i] - c_prime[i] * b[i + 2];
    }

    let x: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();

    // Log-linear fit over the first half of the box, where the decaying
    // exponential dominates and B is safely positive.
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut count = 0.0;
    for i in 0..points {
        if x[i] > length / 2.0 || b[i] <= 0.0 {
            break;
        }
        let ln_b = b[i].ln();
        sx += x[i];
        sy += ln_b;
        sxx += x[i] * x[i];
        sxy += x[i] * ln_b;
        count += 1.0;
    }
    if count < 3.0 {
        return Err(Error::SingularSystem);
    }
    let slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    if slope.is_nan() || slope >= 0.0 {
        return Err(Error::SingularSystem);
    }
    let lambda_fit = -1.0 / slope;
    let lambda_analytic = 1.0 / mu;

    Ok(LondonProfile {
        x,
        b,
        lambda_fit,
        lambda_analytic,
        rel_err: (lambda_fit - lambda_analytic).abs() / lambda_analytic,
    })
}

/// One time step size of the convergence study.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergencePoint {
    pub dt: f64,
    /// Amplitude-normalized max-norm state error after one period,
    /// measured against the exact solution of the semi-discrete system
    /// (phase-dominated for RK4).
    pub phase_error: f64,
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceStudy {
    pub points: Vec<ConvergencePoint>,
    /// Log-log slope of error versus dt over the stable points.
    pub slope: Option<f64>,
}

/// Evolves one transverse mode for one period at each dt and measures the
/// state error against the semi-discrete exact solution, isolating the
/// time integrator's order from the spatial discretization error.
///
/// Steps beyond the stability limit (or runs that produce non-finite
/// fields) are marked unstable and excluded from the slope fit.
pub fn rk4_convergence(
    grid: &Grid,
    mode_number: i64,
    mu: f64,
    order: StencilOrder,
    dts: &[f64],
) -> Result<ConvergenceStudy> {
    if dts.is_empty() {
        return Err(Error::InvalidConfig("no time steps supplied".into()));
    }
    if mode_number == 0 {
        return Err(Error::InvalidConfig(
            "convergence study needs a non-zero mode number".into(),
        ));
    }
    let kx = mode_number as f64 * grid.fundamental_wavenumber(0);
    let k = [kx, 0.0, 0.0];
    let k_eff = [order.wavenumber_symbol(kx, grid.spacing()[0]), 0.0, 0.0];
    // exact solution of the spatially discretized system: continuum
    // amplitude relations evaluated at the stencil's effective wavenumber
    let mode = planewave::discrete_mode(k, k_eff, mu, ModeKind::Transverse1, 1.0.into())?;
    let period = std::f64::consts::TAU / mode.omega;
    let limit = cfl_limit(grid, order);
    let ops = SpatialOps::new(*grid, order);

    let init = planewave::sample(&mode, grid, 0.0)?;
    let amp_scale = init.e.max_abs().max(1e-300);

    let mut points = Vec::with_capacity(dts.len());
    for &dt in dts {
        if dt <= 0.0 || !dt.is_finite() || dt > limit {
            points.push(ConvergencePoint {
                dt,
                phase_error: f64::NAN,
                stable: false,
            });
            continue;
        }
        let steps = (period / dt).round().max(1.0) as usize;
        let t_end = steps as f64 * dt;
        let mut state = init.clone();
        let mut ok = true;
        for _ in 0..steps {
            match step_rk4(&state, dt, mu, &ops) {
                Ok(s) => state = s,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            points.push(ConvergencePoint {
                dt,
                phase_error: f64::NAN,
                stable: false,
            });
            continue;
        }
        let exact = planewave::sample(&mode, grid, t_end)?;
        let mut err = 0.0f64;
        for c in 0..3 {
            for (a, b) in state.e.comp(c).iter().zip(exact.e.comp(c)) {
                err = err.max((a - b).abs());
            }
        }
        points.push(ConvergencePoint {
            dt,
            phase_error: err / amp_scale,
            stable: true,
        });
    }

    // least-squares slope over stable points above the round-off floor
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.stable && p.phase_error > 1e-13)
        .map(|p| (p.dt.ln(), p.phase_error.ln()))
        .collect();
    let slope = if usable.len() >= 2 {
        let n = usable.len() as f64;
        let sx: f64 = usable.iter().map(|(x, _)| x).sum();
        let sy: f64 = usable.iter().map(|(_, y)| y).sum();
        let sxx: f64 = usable.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = usable.iter().map(|(x, y)| x * y).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    } else {
        None
    };

    Ok(ConvergenceStudy { points, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau() -> f64 {
        std::f64::consts::TAU
    }

    #[test]
    fn fit_recovers_synthetic_frequency() {
        let omega = 1.7;
        let dt = 0.03;
        let samples: Vec<f64> = (0..2000)
            .map(|n| 0.8 * (omega * n as f64 * dt + 0.3).cos())
            .collect();
        let fit = fit_frequency(&samples, dt).unwrap();
        assert!((fit.omega - omega).abs() < 1e-8, "got {}", fit.omega);
        assert!((fit.amplitude - 0.8).abs() < 1e-8);
        assert!((fit.omega_zero_crossing - omega).abs() / omega < 0.01);
    }

    #[test]
    fn fit_rejects_non_oscillating_signal() {
        let samples: Vec<f64> = (0..100).map(|n| n as f64).collect();
        assert!(matches!(
            fit_frequency(&samples, 0.1),
            Err(Error::UnresolvedFrequency)
        ));
    }

    #[test]
    fn dispersion_345_triple() {
        // |k| = 3, mu = 4 -> w = 5 on a box where k = 3 is commensurate.
        let n = 64;
        let grid = Grid::line(n, tau() / n as f64).unwrap();
        let cfg = DispersionRunConfig::new(grid);
        let m = measure_dispersion([3.0, 0.0, 0.0], 4.0, &cfg).unwrap();
        assert_eq!(m.omega_analytic, 5.0);
        assert!(m.resolved);
        assert!(
            m.rel_err < 0.005,
            "w measured {} vs 5, rel err {}",
            m.omega_measured,
            m.rel_err
        );
        // zero-crossing cross-check agrees with the fit to 1%
        assert!((m.omega_zero_crossing - m.omega_measured).abs() / m.omega_measured < 0.01);
    }

    #[test]
    fn dispersion_light_cone() {
        let n = 128;
        let grid = Grid::line(n, tau() / n as f64).unwrap();
        let cfg = DispersionRunConfig::new(grid);
        let m = measure_dispersion([4.0, 0.0, 0.0], 0.0, &cfg).unwrap();
        assert!((m.omega_measured / 4.0 - 1.0).abs() < 0.005);
    }

    #[test]
    fn dispersion_rest_oscillation() {
        let n = 16;
        let grid = Grid::line(n, tau() / n as f64).unwrap();
        let cfg = DispersionRunConfig::new(grid);
        let m = measure_dispersion([0.0, 0.0, 0.0], 2.0, &cfg).unwrap();
        assert!((m.omega_measured - 2.0).abs() / 2.0 < 0.005);
    }

    #[test]
    fn dispersion_flags_unresolved_modes() {
        let n = 16;
        let grid = Grid::line(n, tau() / n as f64).unwrap();
        let mut cfg = DispersionRunConfig::new(grid);
        cfg.periods = 4.0;
        // k dx = 7 * 2pi/16 = 2.75 > 1
        let m = measure_dispersion([7.0, 0.0, 0.0], 0.0, &cfg).unwrap();
        assert!(!m.resolved);
    }

    #[test]
    fn dispersion_rejects_incommensurate_and_static() {
        let n = 16;
        let grid = Grid::line(n, tau() / n as f64).unwrap();
        let cfg = DispersionRunConfig::new(grid);
        assert!(matches!(
            measure_dispersion([1.5, 0.0, 0.0], 0.0, &cfg),
            Err(Error::Incommensurate(_))
        ));
        assert!(matches!(
            measure_dispersion([0.0, 0.0, 0.0], 0.0, &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn london_fits_half_penetration_depth() {
        let p = london_profile(2.0, 6.0, 256).unwrap();
        assert_eq!(p.lambda_analytic, 0.5);
        assert!(
            p.rel_err < 0.01,
            "lambda {} rel err {}",
            p.lambda_fit,
            p.rel_err
        );
    }

    #[test]
    fn london_profile_matches_analytic_ratio() {
        // B(5)/B(0) ~ exp(-5) for mu = 1, length = 10.
        let points = 321; // puts a node exactly at x = 5
        let p = london_profile(1.0, 10.0, points).unwrap();
        let i5 = 160;
        assert!((p.x[i5] - 5.0).abs() < 1e-12);
        let ratio = p.b[i5] / p.b[0];
        let expected = (-5.0f64).exp();
        assert!(
            (ratio / expected - 1.0).abs() < 0.005,
            "B(5)/B(0) = {ratio} vs {expected}"
        );
    }

    #[test]
    fn london_error_is_second_order() {
        // against the exact boundary-value solution
        // B(x) = sinh(mu (L - x)) / sinh(mu L)
        let mu = 1.5;
        let length = 8.0;
        let max_err = |points: usize| -> f64 {
            let p = london_profile(mu, length, points).unwrap();
            p.x.iter()
                .zip(&p.b)
                .map(|(x, b)| {
                    let exact = ((mu * (length - x)).sinh()) / ((mu * length).sinh());
                    (b - exact).abs()
                })
                .fold(0.0, f64::max)
        };
        let e1 = max_err(65);
        let e2 = max_err(129);
        let ratio = e1 / e2;
        assert!(
            (3.0..5.2).contains(&ratio),
            "expected ~4x error reduction, got {ratio}"
        );
    }

    #[test]
    fn london_validates_inputs() {
        assert!(london_profile(0.0, 10.0, 128).is_err());
        assert!(london_profile(-1.0, 10.0, 128).is_err());
        assert!(london_profile(2.0, 6.0, 8).is_err());
        assert!(london_profile(0.5, 4.0, 128).is_err()); // mu L = 2 < 6
    }

    #[test]
    fn convergence_slope_is_fourth_order() {
        let grid = Grid::line(64, tau() / 64.0).unwrap();
        let mode =
            planewave::make_mode([1.0, 0.0, 0.0], 0.5, ModeKind::Transverse1, 1.0.into()).unwrap();
        let period = tau() / mode.omega;
        let dts: Vec<f64> = [128.0, 256.0, 512.0, 1024.0]
            .iter()
            .map(|d| period / d)
            .collect();
        let study = rk4_convergence(&grid, 1, 0.5, StencilOrder::Four, &dts).unwrap();
        let slope = study.slope.unwrap();
        assert!(
            (3.8..=4.2).contains(&slope),
            "convergence slope {slope} outside [3.8, 4.2]: {:?}",
            study.points
        );
    }

    #[test]
    fn convergence_marks_unstable_steps() {
        let grid = Grid::line(32, tau() / 32.0).unwrap();
        let limit = cfl_limit(&grid, StencilOrder::Four);
        let dts = [2.0 * limit, 0.02, 0.01, 0.005];
        let study = rk4_convergence(&grid, 1, 0.5, StencilOrder::Four, &dts).unwrap();
        assert!(!study.points[0].stable);
        assert!(study.points[1..].iter().all(|p| p.stable));
        assert!(study.slope.is_some());
    }
}
