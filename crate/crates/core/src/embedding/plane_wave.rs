//! Construction 2: translationally invariant integrals whose Hartree-Fock
//! energy on the plane-wave determinant selected by spins `S` is
//! `H_I(S) + Σ_{m<n} J_mn`.

use rayon::prelude::*;

use crate::embedding::{fourier_matrix, FermionIntegrals};
use crate::ising::{GadgetInstance, SpinGlass};
use crate::linalg::CMatrix;
use crate::{Error, Result, C64};

/// Largest mode count for which the dense `M⁴` tensor is built.
pub const MAX_DENSE_MODES: usize = 16;

/// Overall factor in
/// `A_pqrs = λ Σ_{t,u} C_pt C_qu (C_ru C_st − C_su C_rt)* J_tu`.
///
/// With `λ = −4` the quadratic part of the plane-wave energy is exactly
/// `−Σ_{t<u} J_tu S_t S_u`; a prefactor of `−8/M` would scale it by `2/M`.
pub const PAIR_TENSOR_PREFACTOR: f64 = -4.0;

/// Integrals for the doubled glass of a gadget instance.
pub fn build_construction2(gi: &GadgetInstance) -> Result<FermionIntegrals> {
    integrals_from_glass(&gi.doubled)
}

/// Integrals for an arbitrary glass, one mode per spin. Used directly this
/// skips the zero-magnetization gadget.
pub fn integrals_from_glass(g: &SpinGlass) -> Result<FermionIntegrals> {
    let m = g.num_spins();
    if m > MAX_DENSE_MODES {
        return Err(Error::SizeGuard {
            what: "num_modes",
            limit: MAX_DENSE_MODES,
            got: m,
        });
    }
    let c = fourier_matrix(m);
    let c = c.matrix();
    // both orientations of every coupling: J is summed as a full symmetric matrix
    let pairs: Vec<(usize, usize, f64)> = g
        .couplings()
        .flat_map(|(t, u, v)| [(t, u, v as f64), (u, t, v as f64)])
        .collect();

    let blocks: Vec<Vec<C64>> = (0..m)
        .into_par_iter()
        .map(|p| {
            let mut block = vec![C64::new(0.0, 0.0); m * m * m];
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        let mut acc = C64::new(0.0, 0.0);
                        for &(t, u, v) in &pairs {
                            let exchange = (c[(r, u)] * c[(s, t)] - c[(s, u)] * c[(r, t)]).conj();
                            acc += c[(p, t)] * c[(q, u)] * exchange * v;
                        }
                        block[(q * m + r) * m + s] = acc * PAIR_TENSOR_PREFACTOR;
                    }
                }
            }
            block
        })
        .collect();
    let two_body: Vec<C64> = blocks.into_iter().flatten().collect();

    // h_pq = −½ Σ_r A_prrq cancels the linear-in-S part of the energy
    let one_body = CMatrix::from_fn(m, m, |p, q| {
        let sum: C64 = (0..m)
            .map(|r| two_body[((p * m + r) * m + r) * m + q])
            .sum();
        sum * -0.5
    });
    FermionIntegrals::new(one_body, two_body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::translation_invariance_residual;
    use crate::ising::{apply_gadget, six_spin_reference};

    #[test]
    fn gadget_integrals_are_translation_invariant_and_antisymmetric() {
        let gi = apply_gadget(&SpinGlass::from_couplings(2, [(0, 1, 1)]).unwrap()).unwrap();
        let fi = build_construction2(&gi).unwrap();
        assert_eq!(fi.num_modes(), 4);
        assert!(translation_invariance_residual(&fi) < 1e-10);
        assert!(fi.antisymmetry_residual() < 1e-12);
    }

    #[test]
    fn one_body_part_is_hermitian() {
        let fi = build_construction2(&apply_gadget(&six_spin_reference()).unwrap()).unwrap();
        assert!(crate::linalg::hermiticity_residual(fi.one_body()) < 1e-10);
    }

    #[test]
    fn dense_guard() {
        let g = SpinGlass::new(17).unwrap();
        assert!(matches!(
            integrals_from_glass(&g),
            Err(Error::SizeGuard { .. })
        ));
    }
}
