//! Ising spin glasses embedded into translationally invariant Hartree-Fock
//! problems, with the self-consistent field machinery to attack them and
//! brute-force oracles (spin enumeration, Fock-space diagonalization) to
//! check every step.
//!
//! Module map:
//!
//! - [`ising`]: spin glasses, the `L×L×2` lattice family, enumeration and the
//!   zero-magnetization pairing gadget.
//! - [`embedding`]: the momentum-pair Hamiltonian (construction 1) and the
//!   Fourier-built translationally invariant integrals (construction 2).
//! - [`scf`]: density matrices, Fock builds, aufbau, Haar starts and the
//!   fixed-point loop with its diagnostics.
//! - [`oracle`]: Jordan-Wigner Fock-space operators and a Wick evaluator.
//! - [`harness`]: the randomized SCF experiment and its CSV/JSON outputs.

pub mod embedding;
pub mod error;
pub mod harness;
pub mod ising;
pub mod linalg;
pub mod oracle;
pub mod scf;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
