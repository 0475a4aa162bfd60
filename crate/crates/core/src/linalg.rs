//! Small dense complex helpers on top of nalgebra.

use nalgebra::DMatrix;

use crate::{Error, Result, C64};

pub type CMatrix = DMatrix<C64>;

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖A − A†‖_F`
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

/// `‖AB − BA‖_F`
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    frobenius(&(a * b - b * a))
}

/// Cyclic one-site shift `S` with `S e_k = e_{k+1 mod M}`.
pub fn shift_matrix(m: usize) -> CMatrix {
    let mut s = CMatrix::zeros(m, m);
    for k in 0..m {
        s[((k + 1) % m, k)] = C64::new(1.0, 0.0);
    }
    s
}

/// Eigen-decomposition of a Hermitian matrix, eigenpairs in ascending order.
///
/// Eigenvalues closer than `DEGENERACY_TOL` are treated as tied and ordered
/// by their phase-fixed eigenvectors so the result does not depend on the
/// order the solver happens to return them in.
pub fn hermitian_eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    const DEGENERACY_TOL: f64 = 1e-10;
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigensolver("non-finite matrix entry".into()));
    }
    // symmetrize so round-off in the input cannot leak into the solver
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigensolver("symmetric eigensolver did not converge".into()))?;

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            (eig.eigenvalues[k], phase_fix(v))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // insertion pass over tied runs only
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && (pairs[j].0 - pairs[i].0).abs() < DEGENERACY_TOL {
            j += 1;
        }
        if j - i > 1 {
            pairs[i..j].sort_by(|a, b| lex_cmp(&a.1, &b.1));
        }
        i = j;
    }
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| pairs[c].1[r]);
    Ok((values, vectors))
}

fn phase_fix(mut v: Vec<C64>) -> Vec<C64> {
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let phase = first.conj() / first.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
    v
}

// descending by real part then imaginary part, so the vector with the
// largest leading weight comes first
fn lex_cmp(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if (x - y).norm() > 1e-12 && ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_reconstructs_hermitian_matrix() {
        let m = CMatrix::from_fn(4, 4, |r, c| {
            let (r, c) = (r as f64, c as f64);
            if r == c {
                C64::new(r, 0.0)
            } else {
                C64::new(r + c, r - c) * 0.3
            }
        });
        let (vals, vecs) = hermitian_eigh(&m).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            4,
            vals.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let back = &vecs * diag * vecs.adjoint();
        assert!(max_abs(&(back - m)) < 1e-12);
    }

    #[test]
    fn shift_is_a_cyclic_permutation() {
        let s = shift_matrix(3);
        let e0 = CMatrix::from_fn(3, 1, |r, _| C64::new(if r == 0 { 1.0 } else { 0.0 }, 0.0));
        let moved = &s * e0;
        assert_eq!(moved[(1, 0)], C64::new(1.0, 0.0));
        assert!(max_abs(&(&s * s.adjoint() - CMatrix::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn degenerate_eigenvectors_are_ordered_deterministically() {
        let id = CMatrix::identity(3, 3);
        let (_, a) = hermitian_eigh(&id).unwrap();
        let (_, b) = hermitian_eigh(&id).unwrap();
        assert_eq!(a, b);
    }
}
