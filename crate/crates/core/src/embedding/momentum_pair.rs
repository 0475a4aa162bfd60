//! Construction 1: `H = Σ_{i<j} J_ij X_i X_j` with
//! `X_t = F†_t F_{t'} + F†_{t'} F_t`, where `F_k` are momentum modes and `t'`
//! is the partner of the mode carrying spin `t`.
//!
//! `X_t = n⁺_t − n⁻_t` for the gerade/ungerade orbitals
//! `c^(±)_t = (F_t ± F_{t'})/√2`, so every product of those orbital
//! occupations is an eigenstate.

use crate::embedding::{fourier_matrix, FermionIntegrals};
use crate::ising::{self, bipartition, brute_force_ground, flip_even_class, SpinGlass};
use crate::{Error, Result, C64};

/// How spin `t` picks the partner mode it is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModePairing {
    /// Partner `t + M/2`. Every interaction term then transfers momentum
    /// `0 mod M`, so the Hamiltonian is translation invariant.
    #[default]
    HalfShift,
    /// Partner `M − t`. Terms transfer `±2(i ± j)`, which breaks translation
    /// invariance for most couplings; kept for comparison.
    Reflection,
}

/// One operator string `J · F†_{k1} F_{k2} F†_{k3} F_{k4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentumTerm {
    pub coefficient: i64,
    pub modes: [usize; 4],
}

impl MomentumTerm {
    /// `k1 + k3 − k2 − k4 mod M`
    pub fn momentum_transfer(&self, num_modes: usize) -> usize {
        let [k1, k2, k3, k4] = self.modes;
        (k1 + k3 + 2 * num_modes - k2 - k4) % num_modes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumPairHamiltonian {
    source: SpinGlass,
    num_modes: usize,
    pairing: ModePairing,
    /// Spin `t` (0-based) → `(mode, partner mode)`.
    spin_modes: Vec<(usize, usize)>,
}

pub fn build_construction1(g: &SpinGlass) -> MomentumPairHamiltonian {
    build_construction1_with(g, ModePairing::default())
}

/// Uses `M = 2K + 2` modes: spin `t` (1-based) sits on mode `t`, and modes
/// `0` and `K + 1` are spectators that appear in no term.
pub fn build_construction1_with(g: &SpinGlass, pairing: ModePairing) -> MomentumPairHamiltonian {
    let k = g.num_spins();
    let m = 2 * k + 2;
    let spin_modes = (1..=k)
        .map(|t| match pairing {
            ModePairing::HalfShift => (t, t + m / 2),
            ModePairing::Reflection => (t, m - t),
        })
        .collect();
    MomentumPairHamiltonian {
        source: g.clone(),
        num_modes: m,
        pairing,
        spin_modes,
    }
}

impl MomentumPairHamiltonian {
    pub fn source(&self) -> &SpinGlass {
        &self.source
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn pairing(&self) -> ModePairing {
        self.pairing
    }

    pub fn spin_modes(&self) -> &[(usize, usize)] {
        &self.spin_modes
    }

    pub fn spectator_modes(&self) -> Vec<usize> {
        let used: Vec<usize> = self.spin_modes.iter().flat_map(|&(a, b)| [a, b]).collect();
        (0..self.num_modes).filter(|k| !used.contains(k)).collect()
    }

    /// Every operator string in `Σ_{i<j} J_ij X_i X_j`.
    pub fn terms(&self) -> Vec<MomentumTerm> {
        let mut out = Vec::new();
        for (i, j, v) in self.source.couplings() {
            let (ai, bi) = self.spin_modes[i];
            let (aj, bj) = self.spin_modes[j];
            for (k1, k2) in [(ai, bi), (bi, ai)] {
                for (k3, k4) in [(bj, aj), (aj, bj)] {
                    out.push(MomentumTerm {
                        coefficient: v,
                        modes: [k1, k2, k3, k4],
                    });
                }
            }
        }
        out
    }

    /// Number of terms whose momentum transfer is nonzero.
    pub fn momentum_violations(&self) -> usize {
        self.terms()
            .iter()
            .filter(|t| t.momentum_transfer(self.num_modes) != 0)
            .count()
    }

    /// Integrals with the momentum modes `F_k` as the mode basis.
    pub fn momentum_integrals(&self) -> FermionIntegrals {
        let m = self.num_modes;
        let idx = |p: usize, q: usize, r: usize, s: usize| ((p * m + q) * m + r) * m + s;
        // W_pqrs: coefficient of F†_p F†_q F_r F_s
        let mut w = vec![0.0f64; m.pow(4)];
        for term in self.terms() {
            let [k1, k2, k3, k4] = term.modes;
            // F†_{k1} F_{k2} F†_{k3} F_{k4} = F†_{k1} F†_{k3} F_{k4} F_{k2} since k2 ≠ k3
            debug_assert_ne!(k2, k3);
            w[idx(k1, k3, k4, k2)] += term.coefficient as f64;
        }
        let mut fi = FermionIntegrals::zeros(m);
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        let a = w[idx(p, q, r, s)] - w[idx(p, q, s, r)] - w[idx(q, p, r, s)]
                            + w[idx(q, p, s, r)];
                        if a != 0.0 {
                            fi.set_a(p, q, r, s, C64::new(a, 0.0));
                        }
                    }
                }
            }
        }
        fi
    }

    /// Integrals over the lattice sites `a_x`, using `F_k = Σ_x C_kx a_x`.
    pub fn site_integrals(&self) -> FermionIntegrals {
        let u = fourier_matrix(self.num_modes);
        self.momentum_integrals()
            .transform(u.matrix())
            .expect("Fourier matrix matches mode count")
    }

    /// Sorted multiset of eigenvalues over the whole Fock space, read off the
    /// gerade/ungerade occupation formula. Spectator modes multiply every
    /// level by `2^(#spectators)`.
    pub fn predicted_fock_spectrum(&self) -> Result<Vec<i64>> {
        let k = self.source.num_spins();
        if k > 10 {
            return Err(Error::SizeGuard {
                what: "num_spins",
                limit: 10,
                got: k,
            });
        }
        let copies = 1usize << self.spectator_modes().len();
        let mut levels = Vec::with_capacity(copies << (2 * k));
        for sigma in 0..1u32 << k {
            for tau in 0..1u32 << k {
                let occ = PMOccupation::from_masks(sigma, tau, k);
                let e = pm_eigenstate_energy(&self.source, &occ)?;
                levels.extend(std::iter::repeat_n(e, copies));
            }
        }
        levels.sort_unstable();
        Ok(levels)
    }
}

/// Occupations `σ` of the gerade and `τ` of the ungerade orbitals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMOccupation {
    pub sigma: Vec<u8>,
    pub tau: Vec<u8>,
}

impl PMOccupation {
    pub fn new(sigma: Vec<u8>, tau: Vec<u8>) -> Result<Self> {
        if sigma.len() != tau.len() {
            return Err(Error::DimensionMismatch {
                expected: sigma.len(),
                found: tau.len(),
            });
        }
        if sigma.iter().chain(&tau).any(|&x| x > 1) {
            return Err(Error::InvalidArgument("occupations must be 0 or 1".into()));
        }
        Ok(Self { sigma, tau })
    }

    pub fn from_masks(sigma: u32, tau: u32, len: usize) -> Self {
        let bits = |m: u32| (0..len).map(|i| (m >> i & 1) as u8).collect();
        Self {
            sigma: bits(sigma),
            tau: bits(tau),
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn particle_number(&self) -> usize {
        self.sigma
            .iter()
            .chain(&self.tau)
            .map(|&x| x as usize)
            .sum()
    }

    /// `σ_t − τ_t ∈ {−1, 0, 1}`
    pub fn imbalance(&self) -> Vec<i64> {
        self.sigma
            .iter()
            .zip(&self.tau)
            .map(|(&s, &t)| s as i64 - t as i64)
            .collect()
    }
}

/// `Σ_{i<j} J_ij (σ_i − τ_i)(σ_j − τ_j)`, the eigenvalue of the product state.
pub fn pm_eigenstate_energy(g: &SpinGlass, occ: &PMOccupation) -> Result<i64> {
    if occ.len() != g.num_spins() {
        return Err(Error::DimensionMismatch {
            expected: g.num_spins(),
            found: occ.len(),
        });
    }
    let d = occ.imbalance();
    Ok(g.couplings().map(|(i, j, v)| v * d[i] * d[j]).sum())
}

/// Orbital-paired state `τ = 1 − σ` built from an Ising minimizer.
///
/// The eigenvalue is `−H_I(σ-spins)`, so the minimizer is first mapped to a
/// maximizer by flipping one bipartition class; the resulting state sits at
/// `E_min` of the glass. It holds one particle per spin; adding one spectator
/// particle puts it at half filling.
pub fn paired_ground_state(g: &SpinGlass) -> Result<(PMOccupation, i64)> {
    let labels = bipartition(g)?;
    let ground = brute_force_ground(g)?;
    let s = flip_even_class(&ground.minimizers[0], &labels);
    let sigma: Vec<u8> = s.spins().iter().map(|&v| ((v + 1) / 2) as u8).collect();
    let tau = sigma.iter().map(|&x| 1 - x).collect();
    let occ = PMOccupation { sigma, tau };
    let e = pm_eigenstate_energy(g, &occ)?;
    debug_assert_eq!(e, ground.energy);
    Ok((occ, e))
}

/// `−H_I` evaluated on the spins encoded by `σ` when `τ = 1 − σ`.
pub fn paired_energy_as_ising(g: &SpinGlass, occ: &PMOccupation) -> Result<i64> {
    let s = ising::SpinConfig::new(occ.imbalance().iter().map(|&d| d as i8).collect())?;
    Ok(-ising::ising_energy(g, &s)?)
}
