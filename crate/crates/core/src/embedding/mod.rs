//! Fermionic embeddings of Ising spin glasses.
//!
//! Two constructions live here. [`build_construction1`] produces a
//! Hamiltonian written directly in momentum modes whose exact eigenstates are
//! products of gerade/ungerade orbital occupations; its translationally
//! invariant determinants are all trivial while the symmetry-broken ones
//! encode the glass. [`build_construction2`] produces dense translationally
//! invariant integrals whose Hartree-Fock energy on plane-wave determinants
//! equals the Ising energy up to a constant.

mod fourier;
mod integrals;
mod momentum_pair;
mod plane_wave;

pub use fourier::{fourier_matrix, FourierMatrix};
pub use integrals::{translation_invariance_residual, FermionIntegrals};
pub use momentum_pair::{
    build_construction1, build_construction1_with, paired_energy_as_ising, paired_ground_state,
    pm_eigenstate_energy, ModePairing, MomentumPairHamiltonian, MomentumTerm, PMOccupation,
};
pub use plane_wave::{
    build_construction2, integrals_from_glass, MAX_DENSE_MODES, PAIR_TENSOR_PREFACTOR,
};
