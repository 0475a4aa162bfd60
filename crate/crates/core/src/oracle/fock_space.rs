use std::borrow::Cow;
use std::collections::HashMap;

use rayon::prelude::*;

use crate::embedding::{FermionIntegrals, MomentumPairHamiltonian};
use crate::linalg::{hermitian_eigh, CMatrix};
use crate::scf::DensityMatrix;
use crate::{Error, Result, C64};

/// Largest mode count the exact oracle will assemble.
pub const MAX_ORACLE_MODES: usize = 14;

/// Matrix entries at or below this magnitude are dropped during assembly.
const DROP_TOL: f64 = 1e-14;

/// Anything the oracle can turn into a second-quantized Hamiltonian.
pub trait AsIntegrals {
    fn as_integrals(&self) -> Cow<'_, FermionIntegrals>;
}

impl AsIntegrals for FermionIntegrals {
    fn as_integrals(&self) -> Cow<'_, FermionIntegrals> {
        Cow::Borrowed(self)
    }
}

/// Assembled over the momentum modes themselves.
impl AsIntegrals for MomentumPairHamiltonian {
    fn as_integrals(&self) -> Cow<'_, FermionIntegrals> {
        Cow::Owned(self.momentum_integrals())
    }
}

// Jordan-Wigner: mode 0 is the least significant bit and a_j picks up
// (−1)^(number of occupied modes below j).
#[inline]
fn jw_sign(state: u64, j: usize) -> f64 {
    if (state & ((1u64 << j) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn annihilate(state: u64, j: usize) -> Option<(u64, f64)> {
    (state >> j & 1 == 1).then(|| (state ^ 1 << j, jw_sign(state, j)))
}

#[inline]
fn create(state: u64, j: usize) -> Option<(u64, f64)> {
    (state >> j & 1 == 0).then(|| (state | 1 << j, jw_sign(state, j)))
}

/// Sparse `2^M × 2^M` Hamiltonian on occupation bitstrings.
#[derive(Debug, Clone)]
pub struct FockSpaceOperator {
    num_modes: usize,
    /// `columns[n]` lists the nonzero `(m, ⟨m|H|n⟩)`, sorted by `m`.
    columns: Vec<Vec<(u64, C64)>>,
}

/// `Σ h_pq a†_p a_q + ¼ Σ A_pqrs a†_p a†_q a_r a_s`, i.e. the two-body part
/// `½ Σ h_pqrs a†_p a†_q a_r a_s` with `h_pqrs = ½ A_pqrs`.
pub fn assemble<H: AsIntegrals + ?Sized>(h: &H) -> Result<FockSpaceOperator> {
    let fi = h.as_integrals();
    let m = fi.num_modes();
    if m > MAX_ORACLE_MODES {
        return Err(Error::SizeGuard {
            what: "num_modes",
            limit: MAX_ORACLE_MODES,
            got: m,
        });
    }
    let one = fi.one_body();
    let columns = (0..1u64 << m)
        .into_par_iter()
        .map(|n| {
            let mut acc: HashMap<u64, C64> = HashMap::new();
            for q in 0..m {
                let Some((n1, s1)) = annihilate(n, q) else {
                    continue;
                };
                for p in 0..m {
                    let v = one[(p, q)];
                    if v == C64::new(0.0, 0.0) {
                        continue;
                    }
                    if let Some((n2, s2)) = create(n1, p) {
                        *acc.entry(n2).or_default() += v * (s1 * s2);
                    }
                }
            }
            for s in 0..m {
                let Some((n1, s1)) = annihilate(n, s) else {
                    continue;
                };
                for r in 0..m {
                    let Some((n2, s2)) = annihilate(n1, r) else {
                        continue;
                    };
                    for q in 0..m {
                        let Some((n3, s3)) = create(n2, q) else {
                            continue;
                        };
                        for p in 0..m {
                            let v = fi.a(p, q, r, s);
                            if v == C64::new(0.0, 0.0) {
                                continue;
                            }
                            if let Some((n4, s4)) = create(n3, p) {
                                *acc.entry(n4).or_default() += v * (0.25 * s1 * s2 * s3 * s4);
                            }
                        }
                    }
                }
            }
            let mut col: Vec<(u64, C64)> = acc
                .into_iter()
                .filter(|(_, v)| v.norm() > DROP_TOL)
                .collect();
            col.sort_by_key(|&(row, _)| row);
            col
        })
        .collect();
    Ok(FockSpaceOperator {
        num_modes: m,
        columns,
    })
}

/// Ascending bitstrings with exactly `n` occupied modes.
pub fn sector_basis(num_modes: usize, n: usize) -> Vec<u64> {
    (0..1u64 << num_modes)
        .filter(|s| s.count_ones() as usize == n)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpectrum {
    pub num_particles: usize,
    pub eigenvalues: Vec<f64>,
}

impl FockSpaceOperator {
    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn dim(&self) -> usize {
        1 << self.num_modes
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `⟨row|H|col⟩`
    pub fn entry(&self, row: u64, col: u64) -> C64 {
        let column = &self.columns[col as usize];
        column
            .binary_search_by_key(&row, |&(r, _)| r)
            .map(|i| column[i].1)
            .unwrap_or_default()
    }

    /// `max |H_mn − H*_nm|`
    pub fn hermiticity_residual(&self) -> f64 {
        self.columns
            .par_iter()
            .enumerate()
            .map(|(n, col)| {
                col.iter()
                    .map(|&(m, v)| (v - self.entry(n as u64, m).conj()).norm())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// `‖[H, N̂]‖_F`
    pub fn number_commutator_norm(&self) -> f64 {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(n, col)| {
                let pn = (n as u64).count_ones() as f64;
                col.iter()
                    .map(move |&(m, v)| v.norm_sqr() * (m.count_ones() as f64 - pn).powi(2))
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply(&self, psi: &[C64]) -> Result<Vec<C64>> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (n, col) in self.columns.iter().enumerate() {
            let amp = psi[n];
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            for &(m, v) in col {
                out[m as usize] += v * amp;
            }
        }
        Ok(out)
    }

    /// `⟨ψ|H|ψ⟩` for a normalized state.
    pub fn expectation(&self, psi: &[C64]) -> Result<C64> {
        let h_psi = self.apply(psi)?;
        Ok(psi.iter().zip(&h_psi).map(|(a, b)| a.conj() * b).sum())
    }

    /// Dense block of `H` on the `n`-particle sector, basis from [`sector_basis`].
    pub fn sector_matrix(&self, n: usize) -> Result<CMatrix> {
        if n > self.num_modes {
            return Err(Error::InvalidArgument(format!(
                "sector {n} exceeds mode count {}",
                self.num_modes
            )));
        }
        let basis = sector_basis(self.num_modes, n);
        let position: HashMap<u64, usize> =
            basis.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut block = CMatrix::zeros(basis.len(), basis.len());
        for (j, &state) in basis.iter().enumerate() {
            for &(row, v) in &self.columns[state as usize] {
                // entries leaving the sector would break number conservation;
                // number_commutator_norm reports them
                if let Some(&i) = position.get(&row) {
                    block[(i, j)] = v;
                }
            }
        }
        Ok(block)
    }

    pub fn sector_spectrum(&self, n: usize) -> Result<SectorSpectrum> {
        let block = self.sector_matrix(n)?;
        let (eigenvalues, _) = hermitian_eigh(&block)?;
        Ok(SectorSpectrum {
            num_particles: n,
            eigenvalues,
        })
    }

    /// All `2^M` eigenvalues, ascending, assembled sector by sector.
    pub fn full_spectrum(&self) -> Result<Vec<f64>> {
        let mut all = Vec::with_capacity(self.dim());
        for n in 0..=self.num_modes {
            all.extend(self.sector_spectrum(n)?.eigenvalues);
        }
        all.sort_by(f64::total_cmp);
        Ok(all)
    }
}

pub fn sector_ground_energy(op: &FockSpaceOperator, n: usize) -> Result<f64> {
    Ok(op.sector_spectrum(n)?.eigenvalues[0])
}

/// State vector of `b†_1 ⋯ b†_N |vac⟩` with `b†_i = Σ_j a†_j C_ji`, where the
/// columns of `orbitals` hold `C_·i`.
pub fn determinant_state(orbitals: &CMatrix) -> Result<Vec<C64>> {
    let m = orbitals.nrows();
    if m > MAX_ORACLE_MODES {
        return Err(Error::SizeGuard {
            what: "num_modes",
            limit: MAX_ORACLE_MODES,
            got: m,
        });
    }
    let mut psi = vec![C64::new(0.0, 0.0); 1 << m];
    psi[0] = C64::new(1.0, 0.0);
    for i in (0..orbitals.ncols()).rev() {
        let mut next = vec![C64::new(0.0, 0.0); 1 << m];
        for (state, &amp) in psi.iter().enumerate() {
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..m {
                if let Some((to, sign)) = create(state as u64, j) {
                    next[to as usize] += orbitals[(j, i)] * amp * sign;
                }
            }
        }
        psi = next;
    }
    Ok(psi)
}

impl DensityMatrix {
    /// Occupied orbitals of a projector: eigenvectors with the `N` largest
    /// eigenvalues.
    pub fn occupied_orbitals(&self) -> Result<CMatrix> {
        let (_, vecs) = hermitian_eigh(&-self.matrix().clone())?;
        Ok(vecs.columns(0, self.num_particles()).into_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_wigner_anticommutation() {
        // {a_i, a†_j} = δ_ij on every basis state of 4 modes
        for state in 0..16u64 {
            for i in 0..4 {
                for j in 0..4 {
                    let mut acc: HashMap<u64, f64> = HashMap::new();
                    if let Some((s1, g1)) = create(state, j) {
                        if let Some((s2, g2)) = annihilate(s1, i) {
                            *acc.entry(s2).or_default() += g1 * g2;
                        }
                    }
                    if let Some((s1, g1)) = annihilate(state, i) {
                        if let Some((s2, g2)) = create(s1, j) {
                            *acc.entry(s2).or_default() += g1 * g2;
                        }
                    }
                    acc.retain(|_, v| *v != 0.0);
                    if i == j {
                        assert_eq!(acc, HashMap::from([(state, 1.0)]));
                    } else {
                        assert!(acc.is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn zero_integrals_give_zero_operator() {
        let op = assemble(&FermionIntegrals::zeros(4)).unwrap();
        assert_eq!(op.nnz(), 0);
        for n in 0..=4 {
            assert_eq!(sector_ground_energy(&op, n).unwrap(), 0.0);
        }
    }

    #[test]
    fn identity_one_body_is_number_operator() {
        let mut fi = FermionIntegrals::zeros(5);
        *fi.one_body_mut() = CMatrix::identity(5, 5);
        let op = assemble(&fi).unwrap();
        for n in 0..32u64 {
            assert_eq!(op.entry(n, n), C64::new(n.count_ones() as f64, 0.0));
        }
        assert_eq!(op.nnz(), 31);
    }

    #[test]
    fn diagonal_levels_fill_from_the_bottom() {
        let mut fi = FermionIntegrals::zeros(5);
        for k in 0..5 {
            fi.one_body_mut()[(k, k)] = C64::new((k + 1) as f64, 0.0);
        }
        let op = assemble(&fi).unwrap();
        assert!((sector_ground_energy(&op, 2).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sector_dimensions_add_up() {
        let total: usize = (0..=6).map(|n| sector_basis(6, n).len()).sum();
        assert_eq!(total, 64);
        assert_eq!(sector_basis(6, 3).len(), 20);
    }

    #[test]
    fn determinant_state_is_normalized() {
        let p = crate::scf::haar_random_density(6, 3, 9).unwrap();
        let psi = determinant_state(&p.occupied_orbitals().unwrap()).unwrap();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(psi
            .iter()
            .enumerate()
            .all(|(s, z)| z.norm() < 1e-14 || s.count_ones() == 3));
    }

    #[test]
    fn guard_rejects_large_mode_counts() {
        let fi = FermionIntegrals::zeros(15);
        assert!(matches!(assemble(&fi), Err(Error::SizeGuard { .. })));
    }
}
