use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::embedding::fourier_matrix;
use crate::ising::SpinConfig;
use crate::linalg::{frobenius, hermiticity_residual, shift_matrix, CMatrix};
use crate::{Error, Result, C64};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const IDEMPOTENCY_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-8;

/// One-body density `P_pq = ⟨a†_q a_p⟩` of an `N`-particle determinant:
/// Hermitian, idempotent, trace `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    num_particles: usize,
}

impl DensityMatrix {
    /// Validates the projector invariants.
    pub fn new(matrix: CMatrix, num_particles: usize) -> Result<Self> {
        let p = Self::unchecked(matrix, num_particles);
        p.check()?;
        Ok(p)
    }

    /// Skips validation; damped SCF iterates are not projectors.
    pub fn unchecked(matrix: CMatrix, num_particles: usize) -> Self {
        Self {
            matrix,
            num_particles,
        }
    }

    /// `P = Σ_i v_i v_i†` over the columns of `orbitals`.
    pub fn from_orbitals(orbitals: &CMatrix) -> Self {
        Self {
            matrix: orbitals * orbitals.adjoint(),
            num_particles: orbitals.ncols(),
        }
    }

    pub fn zeros(num_modes: usize) -> Self {
        Self::unchecked(CMatrix::zeros(num_modes, num_modes), 0)
    }

    pub fn check(&self) -> Result<()> {
        let m = &self.matrix;
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let herm = hermiticity_residual(m);
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "density not Hermitian ({herm:e})"
            )));
        }
        let idem = self.idempotency_residual();
        if idem > IDEMPOTENCY_TOL {
            return Err(Error::InvalidArgument(format!(
                "density not idempotent ({idem:e})"
            )));
        }
        let tr = self.trace_residual();
        if tr > TRACE_TOL {
            return Err(Error::InvalidArgument(format!(
                "density trace off from {} by {tr:e}",
                self.num_particles
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn num_modes(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_particles(&self) -> usize {
        self.num_particles
    }

    /// `‖P² − P‖_F`
    pub fn idempotency_residual(&self) -> f64 {
        frobenius(&(&self.matrix * &self.matrix - &self.matrix))
    }

    /// `|Tr P − N|`
    pub fn trace_residual(&self) -> f64 {
        (self.matrix.trace() - C64::new(self.num_particles as f64, 0.0)).norm()
    }
}

/// `P_pq = ½ Σ_i S_i C_pi C*_qi + ½ δ_pq`: occupies plane wave `i` exactly
/// when `S_i = +1`.
pub fn density_from_spins(s: &SpinConfig) -> Result<DensityMatrix> {
    let m = s.len();
    if m == 0 {
        return Err(Error::InvalidArgument("empty spin configuration".into()));
    }
    let up = s.spins().iter().filter(|&&v| v == 1).count();
    let c = fourier_matrix(m);
    let c = c.matrix();
    let matrix = CMatrix::from_fn(m, m, |p, q| {
        let wave: C64 = s
            .spins()
            .iter()
            .enumerate()
            .map(|(i, &si)| c[(p, i)] * c[(q, i)].conj() * si as f64)
            .sum();
        let diag = if p == q { 0.5 } else { 0.0 };
        wave * 0.5 + diag
    });
    Ok(DensityMatrix::unchecked(matrix, up))
}

/// Determinant occupying the momentum modes `F_k = Σ_x C_kx a_x` for every
/// `k` in `occupied`, written in the site basis.
pub fn momentum_occupation_density(num_modes: usize, occupied: &[usize]) -> Result<DensityMatrix> {
    if let Some(&k) = occupied.iter().find(|&&k| k >= num_modes) {
        return Err(Error::InvalidArgument(format!("mode {k} out of range")));
    }
    let c = fourier_matrix(num_modes);
    // F†_k = Σ_x C*_kx a†_x, so orbital k has site amplitudes C*_kx
    let orbitals = CMatrix::from_fn(num_modes, occupied.len(), |x, j| {
        c.entry(occupied[j], x).conj()
    });
    Ok(DensityMatrix::from_orbitals(&orbitals))
}

/// Haar-distributed `M×M` unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(m: usize, rng: &mut impl rand::Rng) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = Vec::with_capacity(m * m);
    for _ in 0..m * m {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        entries.push(C64::new(re, im) * scale);
    }
    let z = CMatrix::from_row_slice(m, m, &entries);
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..m {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for row in 0..m {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// `P = U diag(1×N, 0×(M−N)) U†` for a Haar unitary drawn from `seed`.
pub fn haar_random_density(m: usize, n: usize, seed: u64) -> Result<DensityMatrix> {
    if n > m {
        return Err(Error::InvalidArgument(format!(
            "particle number {n} exceeds mode count {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = haar_unitary(m, &mut rng);
    Ok(DensityMatrix::from_orbitals(&u.columns(0, n).into_owned()))
}

/// `‖P − S P S†‖_F` with `S` the cyclic one-site shift.
pub fn shift_invariance_norm(p: &CMatrix) -> f64 {
    let s = shift_matrix(p.nrows());
    frobenius(&(p - &s * p * s.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn full_and_empty_spin_densities() {
        let p = density_from_spins(&SpinConfig::all_up(5)).unwrap();
        assert_eq!(p.num_particles(), 5);
        assert!(max_abs(&(p.matrix() - CMatrix::identity(5, 5))) < 1e-14);
        let p = density_from_spins(&SpinConfig::all_up(5).flipped()).unwrap();
        assert_eq!(p.num_particles(), 0);
        assert!(max_abs(p.matrix()) < 1e-14);
    }

    #[test]
    fn zero_magnetization_density_is_shift_invariant_projector() {
        let s = SpinConfig::new(vec![1, -1, -1, 1, 1, -1, 1, -1]).unwrap();
        let p = density_from_spins(&s).unwrap();
        p.check().unwrap();
        assert_eq!(p.num_particles(), 4);
        assert!(shift_invariance_norm(p.matrix()) < 1e-10);
    }

    #[test]
    fn shift_norm_examples() {
        let m = 5;
        let mut single = CMatrix::zeros(m, m);
        single[(0, 0)] = C64::new(1.0, 0.0);
        assert!((shift_invariance_norm(&single) - 2f64.sqrt()).abs() < 1e-15);
        let uniform = CMatrix::from_element(m, m, C64::new(1.0 / m as f64, 0.0));
        assert!(shift_invariance_norm(&uniform) < 1e-15);
    }

    #[test]
    fn haar_density_edge_fillings() {
        for seed in 0..5 {
            assert!(max_abs(haar_random_density(6, 0, seed).unwrap().matrix()) < 1e-15);
            let full = haar_random_density(6, 6, seed).unwrap();
            assert!(max_abs(&(full.matrix() - CMatrix::identity(6, 6))) < 1e-12);
        }
        assert!(haar_random_density(3, 4, 0).is_err());
    }

    #[test]
    fn haar_density_is_a_valid_projector_and_seeded() {
        let a = haar_random_density(12, 6, 42).unwrap();
        a.check().unwrap();
        assert_eq!(a, haar_random_density(12, 6, 42).unwrap());
        assert_ne!(a, haar_random_density(12, 6, 43).unwrap());
    }

    #[test]
    fn momentum_density_is_translation_invariant() {
        let p = momentum_occupation_density(6, &[0, 2, 5]).unwrap();
        p.check().unwrap();
        assert!(shift_invariance_norm(p.matrix()) < 1e-12);
        assert!(momentum_occupation_density(3, &[3]).is_err());
    }
}
