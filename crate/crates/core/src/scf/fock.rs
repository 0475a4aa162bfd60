use crate::embedding::FermionIntegrals;
use crate::linalg::{self, CMatrix};
use crate::scf::DensityMatrix;
use crate::{Error, Result, C64};

/// Imaginary residue above which [`hf_energy`] reports a broken invariant.
const IMAGINARY_ENERGY_LIMIT: f64 = 1e-6;

fn check_dims(p: &CMatrix, fi: &FermionIntegrals) -> Result<()> {
    if p.nrows() != fi.num_modes() || p.ncols() != fi.num_modes() {
        return Err(Error::DimensionMismatch {
            expected: fi.num_modes(),
            found: p.nrows(),
        });
    }
    Ok(())
}

pub(crate) fn mean_field_raw(p: &CMatrix, fi: &FermionIntegrals) -> CMatrix {
    let m = fi.num_modes();
    let a = fi.two_body();
    // transpose once so the inner loop walks P_sr contiguously over s
    let pt: Vec<C64> = (0..m * m).map(|i| p[(i % m, i / m)]).collect();
    CMatrix::from_fn(m, m, |pp, q| {
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..m {
            let base = ((pp * m + r) * m) * m + q;
            for s in 0..m {
                // A_{p r s q} · P_{s r}
                acc += a[base + s * m] * pt[r * m + s];
            }
        }
        acc
    })
}

/// `G_pq = Σ_rs P_sr A_prsq`
pub fn mean_field_g(p: &DensityMatrix, fi: &FermionIntegrals) -> Result<CMatrix> {
    check_dims(p.matrix(), fi)?;
    Ok(mean_field_raw(p.matrix(), fi))
}

/// `F = h + G(P)`
pub fn fock_matrix(p: &DensityMatrix, fi: &FermionIntegrals) -> Result<CMatrix> {
    Ok(fi.one_body() + mean_field_g(p, fi)?)
}

pub(crate) fn energy_from_fock(p: &CMatrix, fock: &CMatrix, h: &CMatrix) -> Result<f64> {
    let e = (p * (fock + h)).trace() * 0.5;
    if e.im.abs() > IMAGINARY_ENERGY_LIMIT * e.re.abs().max(1.0) {
        return Err(Error::ImaginaryEnergy(e.im));
    }
    Ok(e.re)
}

/// `E = ½ Tr[P (F(P) + h)]`
pub fn hf_energy(p: &DensityMatrix, fi: &FermionIntegrals) -> Result<f64> {
    let f = fock_matrix(p, fi)?;
    energy_from_fock(p.matrix(), &f, fi.one_body())
}

/// `‖PF − FP‖_F`
pub fn commutator_norm(p: &CMatrix, f: &CMatrix) -> Result<f64> {
    if p.shape() != f.shape() {
        return Err(Error::DimensionMismatch {
            expected: p.nrows(),
            found: f.nrows(),
        });
    }
    Ok(linalg::commutator_norm(p, f))
}
