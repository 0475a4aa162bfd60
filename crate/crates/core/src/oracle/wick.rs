use crate::embedding::{build_construction1, FermionIntegrals, MomentumPairHamiltonian};
use crate::ising::{brute_force_ground, SpinGlass};
use crate::oracle::{assemble, sector_ground_energy, MAX_ORACLE_MODES};
use crate::scf::{momentum_occupation_density, DensityMatrix};
use crate::{Error, Result, C64};

/// `Σ P_qp h_pq + ½ Σ P_qp P_sr (h_prsq − h_prqs)` with the representative
/// `h_pqrs = ½ A_pqrs`: the determinant expectation value by pair
/// contractions.
pub fn wick_expectation(p: &DensityMatrix, fi: &FermionIntegrals) -> Result<f64> {
    let m = fi.num_modes();
    if p.num_modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: p.num_modes(),
        });
    }
    let pm = p.matrix();
    let h = fi.one_body();
    let mut one = C64::new(0.0, 0.0);
    for a in 0..m {
        for b in 0..m {
            one += pm[(b, a)] * h[(a, b)];
        }
    }
    let mut two = C64::new(0.0, 0.0);
    for a in 0..m {
        for b in 0..m {
            let pba = pm[(b, a)];
            if pba == C64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..m {
                for s in 0..m {
                    let direct = fi.h_representative(a, r, s, b);
                    let exchange = fi.h_representative(a, r, b, s);
                    two += pba * pm[(s, r)] * (direct - exchange);
                }
            }
        }
    }
    let e = one + two * 0.5;
    if e.im.abs() > 1e-6 * e.re.abs().max(1.0) {
        return Err(Error::ImaginaryEnergy(e.im));
    }
    Ok(e.re)
}

/// Largest `|⟨Ψ|H|Ψ⟩|` over every determinant built from momentum modes
/// (all subsets, every filling), with `H` expressed on the sites.
pub fn wick_zero_residual(h: &MomentumPairHamiltonian) -> Result<f64> {
    let m = h.num_modes();
    if m > MAX_ORACLE_MODES {
        return Err(Error::SizeGuard {
            what: "num_modes",
            limit: MAX_ORACLE_MODES,
            got: m,
        });
    }
    let fi = h.site_integrals();
    let mut worst: f64 = 0.0;
    for mask in 0..1u32 << m {
        let occupied: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
        let p = momentum_occupation_density(m, &occupied)?;
        worst = worst.max(wick_expectation(&p, &fi)?.abs());
    }
    Ok(worst)
}

/// Ratio between the exact half-filling ground energy of construction 1 and
/// the Ising ground energy, measured on a single ferromagnetic bond.
pub fn calibrate_pairing_constant() -> Result<f64> {
    let g = SpinGlass::from_couplings(2, [(0, 1, 1)])?;
    let h = build_construction1(&g);
    let op = assemble(&h)?;
    let exact = sector_ground_energy(&op, h.num_modes() / 2)?;
    Ok(exact / brute_force_ground(&g)?.energy as f64)
}
