//! Hartree-Fock machinery: density matrices, mean-field and Fock builds, the
//! energy functional, aufbau occupation and the plain fixed-point SCF loop.

mod density;
mod fock;
mod run;

pub use density::{
    density_from_spins, haar_random_density, haar_unitary, momentum_occupation_density,
    shift_invariance_norm, DensityMatrix, HERMITICITY_TOL, IDEMPOTENCY_TOL, TRACE_TOL,
};
pub use fock::{commutator_norm, fock_matrix, hf_energy, mean_field_g};
pub(crate) use run::full_precision;
pub use run::{aufbau_density, scf_run, ScfConfig, ScfRecord, ScfResult, ScfTrace};
