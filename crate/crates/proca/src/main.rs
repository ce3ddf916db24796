//! `proca` command-line entry point. Argument handling only; the command
//! implementations live in [`proca::cli`].

use clap::{Args, Parser, Subcommand};
use proca::cli::{self, CmdOutcome};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "proca",
    version,
    about = "Massive vector field toolkit: exact spin-1 operator algebra and a constraint-preserving periodic-grid solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat `key = value` configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (falls back to config `out_dir`, then PROCA_OUT_DIR, then `.`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every operator-algebra identity, exactly and in floats.
    Algebra {
        #[command(flatten)]
        common: Common,
        /// Random trials per parameterized identity.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Test hook: flip one spin-matrix sign to prove failures are caught.
        #[arg(long, hide = true)]
        tamper_spin_sign: bool,
    },
    /// Measure oscillation frequencies of grid modes against sqrt(k^2 + mu^2).
    Dispersion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mu: Option<f64>,
        /// Grid extents, e.g. "128" or "64,64".
        #[arg(long)]
        grid: Option<String>,
        /// Uniform spacing of active axes (default: box length 2 pi per axis).
        #[arg(long)]
        spacing: Option<f64>,
        /// Stencil order, 2 or 4.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long)]
        periods: Option<f64>,
        /// Wavevectors "kx,ky,kz;kx,ky,kz;..." (radians per unit length).
        #[arg(long)]
        modes: Option<String>,
    },
    /// Evolve a plane-wave mode and record diagnostics and snapshots.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        spacing: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        order: Option<usize>,
        /// Explicit time step (otherwise cfl * stability limit).
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        cfl: Option<f64>,
        /// Enforce the stability bound on dt (default true).
        #[arg(long)]
        cfl_check: Option<bool>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        output_every: Option<usize>,
        #[arg(long)]
        snapshot_every: Option<usize>,
        /// transverse1 | transverse2 | longitudinal
        #[arg(long)]
        kind: Option<String>,
        /// Integer mode numbers per axis, e.g. "2" or "1,1,0".
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        amp_re: Option<f64>,
        #[arg(long)]
        amp_im: Option<f64>,
    },
    /// Solve the static screening profile and fit the penetration depth.
    London {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        length: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Fit the time-integrator convergence order over a list of steps.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Comma-separated dt values, at least three.
        #[arg(long)]
        dts: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        spacing: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        mode_number: Option<i64>,
    },
}

fn opt_string<T: ToString>(v: &Option<T>) -> Option<String> {
    v.as_ref().map(T::to_string)
}

fn run() -> proca::Result<CmdOutcome> {
    let cli = Cli::parse();
    match cli.command {
        Command::Algebra {
            common,
            trials,
            seed,
            tamper_spin_sign,
        } => {
            let cfg = cli::merged_config(
                common.config.as_deref(),
                &[("trials", opt_string(&trials)), ("seed", opt_string(&seed))],
                cli::ALGEBRA_KEYS,
            )?;
            let out = cli::resolve_out_dir(common.out, &cfg);
            cli::cmd_algebra(&cfg, &out, tamper_spin_sign)
        }
        Command::Dispersion {
            common,
            mu,
            grid,
            spacing,
            order,
            cfl,
            periods,
            modes,
        } => {
            let cfg = cli::merged_config(
                common.config.as_deref(),
                &[
                    ("mu", opt_string(&mu)),
                    ("grid", grid),
                    ("spacing", opt_string(&spacing)),
                    ("order", opt_string(&order)),
                    ("cfl", opt_string(&cfl)),
                    ("periods", opt_string(&periods)),
                    ("modes", modes),
                ],
                cli::DISPERSION_KEYS,
            )?;
            let out = cli::resolve_out_dir(common.out, &cfg);
            cli::cmd_dispersion(&cfg, &out)
        }
        Command::Evolve {
            common,
            grid,
            spacing,
            mu,
            order,
            dt,
            cfl,
            cfl_check,
            steps,
            output_every,
            snapshot_every,
            kind,
            mode,
            amp_re,
            amp_im,
        } => {
            let cfg = cli::merged_config(
                common.config.as_deref(),
                &[
                    ("grid", grid),
                    ("spacing", opt_string(&spacing)),
                    ("mu", opt_string(&mu)),
                    ("order", opt_string(&order)),
                    ("dt", opt_string(&dt)),
                    ("cfl", opt_string(&cfl)),
                    ("cfl_check", opt_string(&cfl_check)),
                    ("steps", opt_string(&steps)),
                    ("output_every", opt_string(&output_every)),
                    ("snapshot_every", opt_string(&snapshot_every)),
                    ("kind", kind),
                    ("mode", mode),
                    ("amp_re", opt_string(&amp_re)),
                    ("amp_im", opt_string(&amp_im)),
                ],
                cli::EVOLVE_KEYS,
            )?;
            let out = cli::resolve_out_dir(common.out, &cfg);
            cli::cmd_evolve(&cfg, &out)
        }
        Command::London {
            common,
            mu,
            length,
            points,
        } => {
            let cfg = cli::merged_config(
                common.config.as_deref(),
                &[
                    ("mu", opt_string(&mu)),
                    ("length", opt_string(&length)),
                    ("points", opt_string(&points)),
                ],
                cli::LONDON_KEYS,
            )?;
            let out = cli::resolve_out_dir(common.out, &cfg);
            cli::cmd_london(&cfg, &out)
        }
        Command::Convergence {
            common,
            dts,
            grid,
            spacing,
            mu,
            order,
            mode_number,
        } => {
            let cfg = cli::merged_config(
                common.config.as_deref(),
                &[
                    ("dts", dts),
                    ("grid", grid),
                    ("spacing", opt_string(&spacing)),
                    ("mu", opt_string(&mu)),
                    ("order", opt_string(&order)),
                    ("mode_number", opt_string(&mode_number)),
                ],
                cli::CONVERGENCE_KEYS,
            )?;
            let out = cli::resolve_out_dir(common.out, &cfg);
            cli::cmd_convergence(&cfg, &out)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(CmdOutcome::Success) => ExitCode::SUCCESS,
        Ok(CmdOutcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code_for_error(&e) as u8)
        }
    }
}
