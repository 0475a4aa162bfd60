use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::linalg::CMatrix;
use crate::{Error, Result, C64};

/// One-body matrix `h_pq` and antisymmetrized two-body tensor
/// `A_pqrs = h_pqrs − h_pqsr` over `M` orthonormal modes.
///
/// The second-quantized Hamiltonian they stand for is
/// `Σ h_pq a†_p a_q + ¼ Σ A_pqrs a†_p a†_q a_r a_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionIntegrals {
    num_modes: usize,
    one_body: CMatrix,
    /// Row-major `M⁴` storage.
    two_body: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegralsFile {
    num_modes: usize,
    one_body: Vec<[f64; 2]>,
    two_body_antisym: Vec<[f64; 2]>,
}

impl FermionIntegrals {
    pub fn zeros(num_modes: usize) -> Self {
        Self {
            num_modes,
            one_body: CMatrix::zeros(num_modes, num_modes),
            two_body: vec![C64::new(0.0, 0.0); num_modes.pow(4)],
        }
    }

    pub fn new(one_body: CMatrix, two_body: Vec<C64>) -> Result<Self> {
        let m = one_body.nrows();
        if one_body.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: one_body.ncols(),
            });
        }
        if two_body.len() != m.pow(4) {
            return Err(Error::DimensionMismatch {
                expected: m.pow(4),
                found: two_body.len(),
            });
        }
        Ok(Self {
            num_modes: m,
            one_body,
            two_body,
        })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn one_body(&self) -> &CMatrix {
        &self.one_body
    }

    pub fn one_body_mut(&mut self) -> &mut CMatrix {
        &mut self.one_body
    }

    #[inline]
    pub fn index(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        let m = self.num_modes;
        ((p * m + q) * m + r) * m + s
    }

    /// `A_pqrs`
    #[inline]
    pub fn a(&self, p: usize, q: usize, r: usize, s: usize) -> C64 {
        self.two_body[self.index(p, q, r, s)]
    }

    pub fn set_a(&mut self, p: usize, q: usize, r: usize, s: usize, value: C64) {
        let i = self.index(p, q, r, s);
        self.two_body[i] = value;
    }

    pub fn two_body(&self) -> &[C64] {
        &self.two_body
    }

    /// A two-index representative `h_pqrs = ½ A_pqrs`; it is antisymmetric in
    /// `r ↔ s` and satisfies `h_pqrs − h_pqsr = A_pqrs` exactly.
    #[inline]
    pub fn h_representative(&self, p: usize, q: usize, r: usize, s: usize) -> C64 {
        self.a(p, q, r, s) * 0.5
    }

    /// `max |A_pqrs + A_pqsr|`
    pub fn antisymmetry_residual(&self) -> f64 {
        let m = self.num_modes;
        let mut worst: f64 = 0.0;
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        worst = worst.max((self.a(p, q, r, s) + self.a(p, q, s, r)).norm());
                    }
                }
            }
        }
        worst
    }

    /// Re-expresses the integrals in new modes `d_x`, where the current modes
    /// are `c_k = Σ_x U_kx d_x`.
    pub fn transform(&self, u: &CMatrix) -> Result<Self> {
        let m = self.num_modes;
        if u.nrows() != m || u.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: u.nrows().max(u.ncols()),
            });
        }
        let one_body = u.adjoint() * &self.one_body * u;

        // four quarter transforms, each contracting one index
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * m + b) * m + c) * m + d;
        let mut cur = self.two_body.clone();
        for slot in 0..4 {
            let mut next = vec![C64::new(0.0, 0.0); m.pow(4)];
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        for d in 0..m {
                            let mut acc = C64::new(0.0, 0.0);
                            for k in 0..m {
                                let (src, coeff) = match slot {
                                    0 => (idx(k, b, c, d), u[(k, a)].conj()),
                                    1 => (idx(a, k, c, d), u[(k, b)].conj()),
                                    2 => (idx(a, b, k, d), u[(k, c)]),
                                    _ => (idx(a, b, c, k), u[(k, d)]),
                                };
                                acc += coeff * cur[src];
                            }
                            next[idx(a, b, c, d)] = acc;
                        }
                    }
                }
            }
            cur = next;
        }
        Self::new(one_body, cur)
    }

    pub fn to_json(&self) -> String {
        let pair = |z: &C64| [z.re, z.im];
        // nalgebra is column-major; the file is row-major
        let one_body = (0..self.num_modes)
            .flat_map(|p| (0..self.num_modes).map(move |q| (p, q)))
            .map(|(p, q)| pair(&self.one_body[(p, q)]))
            .collect();
        let file = IntegralsFile {
            num_modes: self.num_modes,
            one_body,
            two_body_antisym: self.two_body.iter().map(pair).collect(),
        };
        serde_json::to_string(&file).expect("integrals serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: IntegralsFile = serde_json::from_str(text)?;
        let m = file.num_modes;
        if file.one_body.len() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                found: file.one_body.len(),
            });
        }
        let one_body = CMatrix::from_fn(m, m, |p, q| {
            let [re, im] = file.one_body[p * m + q];
            C64::new(re, im)
        });
        let two_body = file
            .two_body_antisym
            .into_iter()
            .map(|[re, im]| C64::new(re, im))
            .collect();
        Self::new(one_body, two_body)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// `max |h_{p+1,q+1} − h_pq|` and `max |A_{p+1,q+1,r+1,s+1} − A_pqrs|` over
/// cyclic indices, whichever is larger.
pub fn translation_invariance_residual(fi: &FermionIntegrals) -> f64 {
    let m = fi.num_modes();
    let up = |i: usize| (i + 1) % m;
    let mut worst: f64 = 0.0;
    for p in 0..m {
        for q in 0..m {
            worst = worst.max((fi.one_body()[(up(p), up(q))] - fi.one_body()[(p, q)]).norm());
            for r in 0..m {
                for s in 0..m {
                    let d = fi.a(up(p), up(q), up(r), up(s)) - fi.a(p, q, r, s);
                    worst = worst.max(d.norm());
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::fourier_matrix;

    #[test]
    fn residual_of_zero_and_perturbed_integrals() {
        let mut fi = FermionIntegrals::zeros(4);
        assert_eq!(translation_invariance_residual(&fi), 0.0);
        fi.one_body_mut()[(1, 2)] = C64::new(0.5, 0.0);
        assert!((translation_invariance_residual(&fi) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn json_layout_is_row_major() {
        let mut fi = FermionIntegrals::zeros(2);
        fi.one_body_mut()[(0, 1)] = C64::new(1.0, 2.0);
        fi.set_a(0, 0, 0, 1, C64::new(3.0, 0.0));
        let v: serde_json::Value = serde_json::from_str(&fi.to_json()).unwrap();
        assert_eq!(v["num_modes"], 2);
        assert_eq!(v["one_body"][1], serde_json::json!([1.0, 2.0]));
        assert_eq!(v["two_body_antisym"][1], serde_json::json!([3.0, 0.0]));
        assert_eq!(FermionIntegrals::from_json(&fi.to_json()).unwrap(), fi);
        assert!(FermionIntegrals::from_json(
            r#"{"num_modes":1,"one_body":[[0,0]],"two_body_antisym":[]}"#
        )
        .is_err());
    }

    #[test]
    fn transform_round_trips_through_unitary() {
        let mut fi = FermionIntegrals::zeros(3);
        fi.one_body_mut()[(0, 1)] = C64::new(1.0, 0.5);
        fi.one_body_mut()[(1, 0)] = C64::new(1.0, -0.5);
        fi.set_a(0, 1, 2, 0, C64::new(0.25, 0.1));
        fi.set_a(0, 1, 0, 2, C64::new(-0.25, -0.1));
        let u = fourier_matrix(3).matrix().clone();
        let back = fi.transform(&u).unwrap().transform(&u.adjoint()).unwrap();
        let diff = back
            .two_body()
            .iter()
            .zip(fi.two_body())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-14);
        assert!((back.one_body() - fi.one_body()).norm() < 1e-14);
    }
}
