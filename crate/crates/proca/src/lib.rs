//! Toolkit for the massive vector (Proca) field and its massless Maxwell
//! limit, built around two pillars:
//!
//! * **Exact operator algebra** ([`algebra`]): the spin-1 and Pauli
//!   generator matrices and the first-order decompositions of the
//!   relativistic energy-momentum condition, verified by direct
//!   multiplication over arbitrary-precision rational complex scalars.
//! * **A constraint-preserving grid solver** ([`solver`]): method-of-lines
//!   evolution of E, B, A, phi on a periodic collocated grid with
//!   centered stencils (orders 2 and 4) and classical RK4, plus the
//!   measurements that tie the dynamics back to the algebra — dispersion
//!   scans ([`measure`]), the Riemann-Silberstein complex form
//!   ([`riemann_silberstein`]), and the static London screening profile.
//!
//! Everything is deterministic: seeded randomness only, no threads, and
//! text output formats that round-trip 64-bit floats exactly.

pub mod algebra;
pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod measure;
pub mod planewave;
pub mod riemann_silberstein;
pub mod snapshot;
pub mod solver;
pub mod stencil;

pub use error::{Error, Result};

/// Toolkit version embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
