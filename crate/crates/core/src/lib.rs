//! Two executable formalisms for systems of identical quantum particles.
//!
//! The labeled formalism ([`hilbert`], [`exchange`]) stores dense amplitudes
//! over N particle slots and symmetrizes or antisymmetrizes them. The
//! label-free formalism ([`fock`]) stores occupation numbers only. The
//! remaining modules build analyses on top of the two:
//!
//! * [`statistics`]: exact Boltzmann / Bose-Einstein / Fermi-Dirac counting
//!   and the Planck symbol-string enumeration.
//! * [`emergence`]: decides whether a sector state describes individual
//!   particles, one condensed object, or neither.
//! * [`interferometry`]: the two-electron beam-splitter experiment and the
//!   two-packet joint spatial density.
//! * [`cli`]: the batch front end behind the `qparticles` binary.

pub mod cli;
pub mod emergence;
pub mod error;
pub mod exchange;
pub mod fock;
pub mod hilbert;
pub mod interferometry;
mod linalg;
pub mod statistics;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Dense complex d×d matrix used for one-particle operators and reduced
/// density matrices.
pub type Matrix = nalgebra::DMatrix<Complex64>;

/// Numerical tolerances shared across modules.
pub mod tol {
    /// Allowed deviation of a state norm from 1.
    pub const NORM: f64 = 1e-10;
    /// Allowed max-entry deviation of `u†u` from the identity.
    pub const UNITARY: f64 = 1e-10;
    /// Hermiticity / positivity slack for reduced density matrices.
    pub const PSD: f64 = 1e-10;
    /// Orthogonality threshold for one-particle states.
    pub const ORTH: f64 = 1e-10;
    /// Distance below which a state counts as lying in an exchange sector.
    pub const SECTOR: f64 = 1e-9;
    /// Scaled projection norm below which an antisymmetrized product is
    /// treated as a Pauli violation.
    pub const ILL_CONDITIONED: f64 = 1e-6;
    /// Guard on |N·λ − round(N·λ)| when reading occupations off a 1-RDM.
    pub const OCCUPATION: f64 = 0.05;
    /// Infidelity tolerated when accepting a particle decomposition.
    pub const FIDELITY: f64 = 1e-8;
    /// Singular values below this count as zero in the Slater rank.
    pub const SLATER_RANK: f64 = 1e-9;
    /// Normalization slack of a joint spatial density grid.
    pub const GRID: f64 = 1e-6;
    /// Coincidence probability below which the conditional spin state is
    /// not normalizable.
    pub const COINCIDENCE: f64 = 1e-12;
}
