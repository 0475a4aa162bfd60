use std::f64::consts::PI;

use crate::linalg::{max_abs, CMatrix};
use crate::C64;

/// Unitary discrete Fourier matrix `C_kn = exp(−2πi·k·n/M)/√M`.
///
/// Column `n` holds the site amplitudes of the `n`-th plane-wave orbital.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMatrix {
    matrix: CMatrix,
}

impl FourierMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn entry(&self, k: usize, n: usize) -> C64 {
        self.matrix[(k, n)]
    }

    /// `max |C C† − 1|`
    pub fn unitarity_residual(&self) -> f64 {
        let m = self.dim();
        max_abs(&(&self.matrix * self.matrix.adjoint() - CMatrix::identity(m, m)))
    }
}

pub fn fourier_matrix(m: usize) -> FourierMatrix {
    assert!(m >= 1, "Fourier matrix needs at least one mode");
    let norm = (m as f64).sqrt().recip();
    let matrix = CMatrix::from_fn(m, m, |k, n| {
        // reduce k·n mod M first so large products keep full phase accuracy
        let phase = -2.0 * PI * ((k * n) % m) as f64 / m as f64;
        C64::from_polar(norm, phase)
    });
    FourierMatrix { matrix }
}
