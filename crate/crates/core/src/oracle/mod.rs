//! Ground truth for the embeddings: exact Fock-space operators over
//! occupation bitstrings and a pair-contraction (Wick) energy evaluator that
//! shares no code with the SCF energy path.

mod fock_space;
mod wick;

pub use fock_space::{
    assemble, determinant_state, sector_basis, sector_ground_energy, AsIntegrals,
    FockSpaceOperator, SectorSpectrum, MAX_ORACLE_MODES,
};
pub use wick::{calibrate_pairing_constant, wick_expectation, wick_zero_residual};
