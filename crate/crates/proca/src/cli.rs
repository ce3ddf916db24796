//! Command implementations behind the `proca` binary: configuration
//! resolution, validation, computation, and machine-readable outputs.
//!
//! Configuration is flat `key = value` text (see [`crate::config`]);
//! command-line flags override file values, and the merged map is hashed
//! into every output file so runs are attributable. Identical
//! configuration and seed produce byte-identical outputs.
//!
//! Exit policy (mapped in `main`): 0 success, 1 numerical or verification
//! failure, 2 usage or validation error.

use crate::algebra;
use crate::config::KvConfig;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::measure::{self, DispersionRunConfig};
use crate::planewave::{self, ModeKind};
use crate::snapshot::{write_snapshot, SnapshotMeta};
use crate::solver::{self, SolverConfig};
use crate::stencil::StencilOrder;
use crate::VERSION;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmdOutcome {
    Success,
    VerificationFailed,
}

pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_)
        | Error::InvalidGrid(_)
        | Error::UnsupportedOrder(_)
        | Error::NegativeMass(_)
        | Error::LongitudinalRequiresMass
        | Error::TransverseZeroWavevector
        | Error::ShapeMismatch(_)
        | Error::Incommensurate(_)
        | Error::CflViolation { .. } => 2,
        _ => 1,
    }
}

/// 17-significant-digit float text: round-trips f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Output directory: explicit flag, then config key, then PROCA_OUT_DIR,
/// then the working directory.
pub fn resolve_out_dir(explicit: Option<PathBuf>, cfg: &KvConfig) -> PathBuf {
    if let Some(dir) = explicit {
        return dir;
    }
    if let Some(dir) = cfg.get("out_dir") {
        return PathBuf::from(dir);
    }
    if let Ok(dir) = std::env::var("PROCA_OUT_DIR") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from(".")
}

/// Loads the config file (if any), applies flag overrides, and rejects
/// unknown keys before any computation starts.
pub fn merged_config(
    file: Option<&Path>,
    overrides: &[(&str, Option<String>)],
    allowed: &[&str],
) -> Result<KvConfig> {
    let mut cfg = match file {
        Some(path) => KvConfig::from_file(path)?,
        None => KvConfig::default(),
    };
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v.clone());
        }
    }
    cfg.ensure_known_keys(allowed)?;
    Ok(cfg)
}

fn parse_dims(spec: &str) -> Result<[usize; 3]> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(Error::InvalidConfig(format!(
            "grid = '{spec}': expected 1-3 comma-separated extents"
        )));
    }
    let mut dims = [1usize; 3];
    for (a, p) in parts.iter().enumerate() {
        dims[a] = p
            .parse()
            .map_err(|e| Error::InvalidConfig(format!("grid = '{spec}': {e}")))?;
    }
    Ok(dims)
}

/// Grid from `grid` (extents) and optional `spacing` (uniform on active
/// axes). Without `spacing` each active axis gets a box of length 2 pi,
/// so integer mode numbers are wavenumbers.
pub fn parse_grid(cfg: &KvConfig) -> Result<Grid> {
    let spec = cfg
        .get("grid")
        .ok_or_else(|| Error::InvalidConfig("missing 'grid' (e.g. grid = 128)".into()))?;
    let dims = parse_dims(spec)?;
    let spacing_value = cfg.get_f64("spacing")?;
    let mut spacing = [1.0f64; 3];
    for a in 0..3 {
        if dims[a] > 1 {
            spacing[a] = match spacing_value {
                Some(s) => s,
                None => std::f64::consts::TAU / dims[a] as f64,
            };
        }
    }
    Grid::new(dims, spacing)
}

pub fn parse_order(cfg: &KvConfig) -> Result<StencilOrder> {
    match cfg.get_usize("order")? {
        Some(o) => StencilOrder::from_usize(o),
        None => Ok(StencilOrder::Four),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// algebra
// ---------------------------------------------------------------------------

pub const ALGEBRA_KEYS: &[&str] = &["trials", "seed", "out_dir"];

#[derive(Serialize)]
struct AlgebraReportFile {
    version: String,
    config_hash: String,
    seed: u64,
    trials: usize,
    all_passed: bool,
    identities: Vec<algebra::IdentityResult>,
}

pub fn cmd_algebra(cfg: &KvConfig, out_dir: &Path, tamper_spin_sign: bool) -> Result<CmdOutcome> {
    let trials = cfg.get_usize("trials")?.unwrap_or(100);
    if trials < 1 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let seed = cfg.get_i64("seed")?.unwrap_or(1) as u64;

    let report = algebra::verify_all(trials, seed, tamper_spin_sign);
    for r in &report.results {
        let status = if r.pass { "pass" } else { "FAIL" };
        println!(
            "{}: {} {} (max residual {})",
            r.identity,
            r.mode,
            status,
            fmt_f64(r.max_residual)
        );
    }

    std::fs::create_dir_all(out_dir)?;
    let file = AlgebraReportFile {
        version: VERSION.into(),
        config_hash: cfg.hash_hex(),
        seed,
        trials,
        all_passed: report.all_passed,
        identities: report.results.clone(),
    };
    let path = out_dir.join("algebra_report.json");
    write_text(&path, &serde_json::to_string_pretty(&file).unwrap())?;
    println!("wrote {}", path.display());

    if report.all_passed {
        println!("algebra: PASS ({} identity checks)", report.results.len());
        Ok(CmdOutcome::Success)
    } else {
        println!("algebra: FAIL");
        Ok(CmdOutcome::VerificationFailed)
    }
}

// ---------------------------------------------------------------------------
// dispersion
// ---------------------------------------------------------------------------

pub const DISPERSION_KEYS: &[&str] = &[
    "mu", "grid", "spacing", "order", "cfl", "periods", "modes", "out_dir",
];

#[derive(Serialize)]
struct DispersionSummary {
    version: String,
    config_hash: String,
    mu: f64,
    modes_measured: usize,
    modes_skipped: usize,
    max_rel_err: Option<f64>,
}

fn parse_mode_list(spec: &str) -> Result<Vec<[f64; 3]>> {
    let mut out = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let comps: Vec<&str> = part.split(',').map(str::trim).collect();
        if comps.is_empty() || comps.len() > 3 {
            return Err(Error::InvalidConfig(format!(
                "mode '{part}': expected 1-3 comma-separated components"
            )));
        }
        let mut k = [0.0f64; 3];
        for (a, c) in comps.iter().enumerate() {
            k[a] = c
                .parse()
                .map_err(|e| Error::InvalidConfig(format!("mode '{part}': {e}")))?;
        }
        out.push(k);
    }
    Ok(out)
}

pub fn cmd_dispersion(cfg: &KvConfig, out_dir: &Path) -> Result<CmdOutcome> {
    let mu = cfg.get_f64("mu")?.unwrap_or(0.0);
    let grid = parse_grid(cfg)?;
    let order = parse_order(cfg)?;
    let cfl = cfg.get_f64("cfl")?.unwrap_or(0.5);
    let periods = cfg.get_f64("periods")?.unwrap_or(6.0);
    if cfl.is_nan() || cfl <= 0.0 || cfl > 1.0 {
        return Err(Error::InvalidConfig(format!("cfl = {cfl} outside (0, 1]")));
    }
    if periods.is_nan() || periods < 2.0 {
        return Err(Error::InvalidConfig(format!(
            "periods = {periods} too short to resolve a frequency"
        )));
    }
    let modes = parse_mode_list(cfg.get("modes").unwrap_or(""))?;

    let run = DispersionRunConfig {
        grid,
        stencil_order: order,
        cfl,
        periods,
    };

    std::fs::create_dir_all(out_dir)?;
    let hash = cfg.hash_hex();
    let mut csv = String::new();
    csv.push_str(&format!("# proca {VERSION}\n# config_hash: {hash}\n"));
    csv.push_str("kx,ky,kz,omega_analytic,omega_measured,rel_err\n");

    let mut skipped = 0usize;
    let mut measured = 0usize;
    let mut max_rel_err: Option<f64> = None;
    for k in &modes {
        match measure::measure_dispersion(*k, mu, &run) {
            Ok(m) => {
                if !m.resolved {
                    eprintln!(
                        "warning: mode ({}, {}, {}) has k dx > 1; expect large discretization error",
                        k[0], k[1], k[2]
                    );
                }
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_f64(m.k[0]),
                    fmt_f64(m.k[1]),
                    fmt_f64(m.k[2]),
                    fmt_f64(m.omega_analytic),
                    fmt_f64(m.omega_measured),
                    fmt_f64(m.rel_err)
                ));
                measured += 1;
                max_rel_err = Some(max_rel_err.map_or(m.rel_err, |v: f64| v.max(m.rel_err)));
            }
            Err(Error::Incommensurate(msg)) => {
                eprintln!(
                    "warning: skipping mode ({}, {}, {}): {msg}",
                    k[0], k[1], k[2]
                );
                skipped += 1;
            }
            Err(other) => return Err(other),
        }
    }

    let csv_path = out_dir.join("dispersion.csv");
    write_text(&csv_path, &csv)?;
    let summary = DispersionSummary {
        version: VERSION.into(),
        config_hash: hash,
        mu,
        modes_measured: measured,
        modes_skipped: skipped,
        max_rel_err,
    };
    let json_path = out_dir.join("dispersion_summary.json");
    write_text(&json_path, &serde_json::to_string_pretty(&summary).unwrap())?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    match max_rel_err {
        Some(v) => println!(
            "dispersion: {measured} modes measured, {skipped} skipped, max rel err {}",
            fmt_f64(v)
        ),
        None => println!("dispersion: no modes measured ({skipped} skipped)"),
    }
    Ok(CmdOutcome::Success)
}

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

pub const EVOLVE_KEYS: &[&str] = &[
    "grid",
    "spacing",
    "mu",
    "order",
    "dt",
    "cfl",
    "cfl_check",
    "steps",
    "output_every",
    "snapshot_every",
    "kind",
    "mode",
    "amp_re",
    "amp_im",
    "out_dir",
];

#[derive(Serialize)]
struct ConfigEcho {
    version: String,
    config_hash: String,
    dt: f64,
    config: BTreeMap<String, String>,
}

fn parse_mode_numbers(spec: &str) -> Result<[i64; 3]> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(Error::InvalidConfig(format!(
            "mode = '{spec}': expected 1-3 comma-separated integers"
        )));
    }
    let mut n = [0i64; 3];
    for (a, p) in parts.iter().enumerate() {
        n[a] = p
            .parse()
            .map_err(|e| Error::InvalidConfig(format!("mode = '{spec}': {e}")))?;
    }
    Ok(n)
}

pub fn cmd_evolve(cfg: &KvConfig, out_dir: &Path) -> Result<CmdOutcome> {
    let grid = parse_grid(cfg)?;
    let order = parse_order(cfg)?;
    let mu = cfg.get_f64("mu")?.unwrap_or(0.0);
    if mu < 0.0 {
        return Err(Error::NegativeMass(mu));
    }
    let steps = cfg
        .get_usize("steps")?
        .ok_or_else(|| Error::InvalidConfig("missing 'steps'".into()))?;
    let cfl_check = cfg.get_bool("cfl_check")?.unwrap_or(true);
    let limit = solver::cfl_limit(&grid, order);
    let dt = match cfg.get_f64("dt")? {
        Some(dt) => dt,
        None => {
            let cfl = cfg.get_f64("cfl")?.unwrap_or(0.5);
            if cfl.is_nan() || cfl <= 0.0 {
                return Err(Error::InvalidConfig(format!("cfl = {cfl} must be > 0")));
            }
            cfl * limit
        }
    };
    let output_every = cfg.get_usize("output_every")?.unwrap_or(0);
    let snapshot_every = cfg.get_usize("snapshot_every")?.unwrap_or(0);
    let kind = ModeKind::parse(cfg.get("kind").unwrap_or("transverse1"))?;
    let mode_numbers = parse_mode_numbers(cfg.get("mode").unwrap_or("1"))?;
    let amp_re = cfg.get_f64("amp_re")?.unwrap_or(1.0);
    let amp_im = cfg.get_f64("amp_im")?.unwrap_or(0.0);

    let k: [f64; 3] =
        std::array::from_fn(|a| mode_numbers[a] as f64 * grid.fundamental_wavenumber(a));
    // validation happens before any stepping: a longitudinal request at
    // mu = 0 or an off-grid wavevector fails here
    let mode = planewave::make_mode(k, mu, kind, num_complex::Complex64::new(amp_re, amp_im))?;
    let init = planewave::sample(&mode, &grid, 0.0)?;

    let config = SolverConfig {
        mu,
        dt,
        stencil_order: order,
        steps,
        cfl_check,
        output_every,
    };

    std::fs::create_dir_all(out_dir)?;
    let hash = cfg.hash_hex();
    let echo = ConfigEcho {
        version: VERSION.into(),
        config_hash: hash.clone(),
        dt,
        config: cfg.as_map().clone(),
    };
    let echo_path = out_dir.join("evolve_config.json");
    write_text(&echo_path, &serde_json::to_string_pretty(&echo).unwrap())?;

    let diag_path = out_dir.join("diagnostics.csv");
    let mut csv = std::io::BufWriter::new(std::fs::File::create(&diag_path)?);
    writeln!(csv, "# proca {VERSION}")?;
    writeln!(csv, "# config_hash: {hash}")?;
    writeln!(
        csv,
        "time,total_energy,max_div_b,max_gauss_residual,max_lorenz_residual"
    )?;

    let mut io_error: Option<std::io::Error> = None;
    let result = solver::evolve_observed(&init, &config, |d, state| {
        if io_error.is_some() {
            return;
        }
        let row = format!(
            "{},{},{},{},{}\n",
            fmt_f64(d.time),
            fmt_f64(d.total_energy),
            fmt_f64(d.max_div_b),
            fmt_f64(d.max_gauss_residual),
            fmt_f64(d.max_lorenz_residual)
        );
        if let Err(e) = csv.write_all(row.as_bytes()).and_then(|_| csv.flush()) {
            io_error = Some(e);
            return;
        }
        if snapshot_every > 0 && d.step % snapshot_every == 0 {
            let path = out_dir.join(format!("snapshot_{:08}.bin", d.step));
            let meta = SnapshotMeta {
                version: VERSION.into(),
                config_hash: hash.clone(),
                time: d.time,
                mu,
            };
            if let Err(e) = write_snapshot(&path, state, &meta) {
                io_error = Some(match e {
                    Error::Io(io) => io,
                    other => std::io::Error::other(other.to_string()),
                });
            }
        }
    });
    drop(csv);
    if let Some(e) = io_error {
        return Err(Error::Io(e));
    }

    match result {
        Ok(out) => {
            if let Some(w) = &out.initial_constraint_warning {
                eprintln!("warning: {w}");
            }
            println!("wrote {}", echo_path.display());
            println!("wrote {}", diag_path.display());
            let last = out.diagnostics.last().unwrap();
            println!(
                "evolve: {} steps, final energy {}, max |div B| {}",
                steps,
                fmt_f64(last.total_energy),
                fmt_f64(last.max_div_b)
            );
            Ok(CmdOutcome::Success)
        }
        Err(Error::Diverged { step }) => {
            // last good diagnostics rows are already flushed
            eprintln!("error: evolution diverged at step {step}; diagnostics flushed");
            Ok(CmdOutcome::VerificationFailed)
        }
        Err(other) => Err(other),
    }
}

// ---------------------------------------------------------------------------
// london
// ---------------------------------------------------------------------------

pub const LONDON_KEYS: &[&str] = &["mu", "length", "points", "out_dir"];

#[derive(Serialize)]
struct LondonSummary {
    version: String,
    config_hash: String,
    mu: f64,
    length: f64,
    points: usize,
    lambda_fit: f64,
    lambda_analytic: f64,
    rel_err: f64,
}

pub fn cmd_london(cfg: &KvConfig, out_dir: &Path) -> Result<CmdOutcome> {
    let mu = cfg
        .get_f64("mu")?
        .ok_or_else(|| Error::InvalidConfig("missing 'mu'".into()))?;
    if mu.is_nan() || mu <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "screening solve requires mu > 0, got {mu}"
        )));
    }
    let length = cfg.get_f64("length")?.unwrap_or(8.0 / mu);
    let points = cfg.get_usize("points")?.unwrap_or(256);

    let profile = measure::london_profile(mu, length, points)?;

    std::fs::create_dir_all(out_dir)?;
    let hash = cfg.hash_hex();
    let mut csv = String::new();
    csv.push_str(&format!("# proca {VERSION}\n# config_hash: {hash}\n"));
    csv.push_str("x,b\n");
    for (x, b) in profile.x.iter().zip(&profile.b) {
        csv.push_str(&format!("{},{}\n", fmt_f64(*x), fmt_f64(*b)));
    }
    let csv_path = out_dir.join("london_profile.csv");
    write_text(&csv_path, &csv)?;

    let summary = LondonSummary {
        version: VERSION.into(),
        config_hash: hash,
        mu,
        length,
        points,
        lambda_fit: profile.lambda_fit,
        lambda_analytic: profile.lambda_analytic,
        rel_err: profile.rel_err,
    };
    let json_path = out_dir.join("london_summary.json");
    write_text(&json_path, &serde_json::to_string_pretty(&summary).unwrap())?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    println!(
        "london: lambda_fit {} vs 1/mu {} (rel err {})",
        fmt_f64(profile.lambda_fit),
        fmt_f64(profile.lambda_analytic),
        fmt_f64(profile.rel_err)
    );
    Ok(CmdOutcome::Success)
}

// ---------------------------------------------------------------------------
// convergence
// ---------------------------------------------------------------------------

pub const CONVERGENCE_KEYS: &[&str] = &[
    "dts",
    "grid",
    "spacing",
    "mu",
    "order",
    "mode_number",
    "out_dir",
];

#[derive(Serialize)]
struct ConvergenceSummary {
    version: String,
    config_hash: String,
    slope: Option<f64>,
    pass: bool,
}

pub const CONVERGENCE_SLOPE_BAND: (f64, f64) = (3.8, 4.2);

pub fn cmd_convergence(cfg: &KvConfig, out_dir: &Path) -> Result<CmdOutcome> {
    let dts_spec = cfg
        .get("dts")
        .ok_or_else(|| Error::InvalidConfig("missing 'dts' (e.g. dts = 0.04,0.02,0.01)".into()))?;
    let dts: Vec<f64> = dts_spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidConfig(format!("dts entry '{t}': {e}")))
        })
        .collect::<Result<_>>()?;
    if dts.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "need at least 3 dt values, got {}",
            dts.len()
        )));
    }
    let grid = match cfg.get("grid") {
        Some(_) => parse_grid(cfg)?,
        None => Grid::line(64, std::f64::consts::TAU / 64.0).unwrap(),
    };
    let mu = cfg.get_f64("mu")?.unwrap_or(0.5);
    let order = parse_order(cfg)?;
    let mode_number = cfg.get_i64("mode_number")?.unwrap_or(1);

    let study = measure::rk4_convergence(&grid, mode_number, mu, order, &dts)?;

    std::fs::create_dir_all(out_dir)?;
    let hash = cfg.hash_hex();
    let mut csv = String::new();
    csv.push_str(&format!("# proca {VERSION}\n# config_hash: {hash}\n"));
    csv.push_str("dt,phase_error,status\n");
    for p in &study.points {
        if p.stable {
            csv.push_str(&format!(
                "{},{},ok\n",
                fmt_f64(p.dt),
                fmt_f64(p.phase_error)
            ));
        } else {
            csv.push_str(&format!("{},,unstable\n", fmt_f64(p.dt)));
        }
    }
    let csv_path = out_dir.join("convergence.csv");
    write_text(&csv_path, &csv)?;

    let (lo, hi) = CONVERGENCE_SLOPE_BAND;
    let pass = study.slope.map(|s| s >= lo && s <= hi).unwrap_or(false);
    let summary = ConvergenceSummary {
        version: VERSION.into(),
        config_hash: hash,
        slope: study.slope,
        pass,
    };
    let json_path = out_dir.join("convergence_summary.json");
    write_text(&json_path, &serde_json::to_string_pretty(&summary).unwrap())?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    match study.slope {
        Some(s) => println!(
            "convergence: slope {} ({})",
            fmt_f64(s),
            if pass { "PASS" } else { "FAIL" }
        ),
        None => println!("convergence: no stable points to fit (FAIL)"),
    }
    Ok(if pass {
        CmdOutcome::Success
    } else {
        CmdOutcome::VerificationFailed
    })
}
