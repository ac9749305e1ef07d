//! Reduced density matrix spectra and block von Neumann entropy for
//! hard-core bosons on the complete graph, from `T = 0` through the
//! Bose-Einstein condensation transition.
//!
//! - [`arith`]: exact and log-space combinatorics.
//! - [`finite`]: finite-`L` sector spectra, block eigenvalues, thermal entropy.
//! - [`thermo`]: thermodynamic-limit quantities and the entropy decomposition.
//! - [`oracle`]: brute-force exact diagonalization for small systems.
//! - [`cli`]: the command-line front end.

pub mod arith;
pub mod cli;
pub mod error;
pub mod finite;
pub mod oracle;
pub mod thermo;

pub use arith::{Backend, ExactRational, LogWeight};
pub use error::{Error, Result};
pub use finite::{SectorSpectrum, SystemShape, ThermalMode};
