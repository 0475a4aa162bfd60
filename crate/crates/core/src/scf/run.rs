use std::io::Write;

use crate::embedding::FermionIntegrals;
use crate::linalg::{self, frobenius, hermitian_eigh, CMatrix};
use crate::scf::fock::{energy_from_fock, mean_field_raw};
use crate::scf::{shift_invariance_norm, DensityMatrix};
use crate::{Error, Result, C64};

/// Projector onto the `N` lowest eigenvectors of `F`. Degenerate levels are
/// ordered by [`hermitian_eigh`]'s deterministic tie-break.
pub fn aufbau_density(fock: &CMatrix, n: usize) -> Result<DensityMatrix> {
    let m = fock.nrows();
    if n > m {
        return Err(Error::InvalidArgument(format!(
            "particle number {n} exceeds mode count {m}"
        )));
    }
    let (_, vectors) = hermitian_eigh(fock)?;
    Ok(DensityMatrix::from_orbitals(
        &vectors.columns(0, n).into_owned(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScfConfig {
    pub max_cycles: usize,
    /// Converged once `‖P_{k+1} − P_k‖_F` drops below this.
    pub delta_p_tolerance: f64,
    /// Fraction of the previous density mixed into each update.
    pub damping: f64,
    pub seed: u64,
}

impl Default for ScfConfig {
    fn default() -> Self {
        Self {
            max_cycles: 128,
            delta_p_tolerance: 1e-8,
            damping: 0.0,
            seed: 0,
        }
    }
}

impl ScfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_cycles == 0 {
            return Err(Error::InvalidArgument(
                "max_cycles must be at least 1".into(),
            ));
        }
        if self.delta_p_tolerance.is_nan() || self.delta_p_tolerance <= 0.0 {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::InvalidArgument("damping must lie in [0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScfRecord {
    pub iteration: usize,
    pub energy: f64,
    /// `‖P_k − P_{k−1}‖_F`; absent for the starting density.
    pub delta_p_norm: Option<f64>,
    /// `‖P_k − S P_k S†‖_F`
    pub shift_norm: f64,
    /// `‖[P_k, F(P_k)]‖_F`
    pub commutator_norm: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScfTrace {
    pub records: Vec<ScfRecord>,
}

impl ScfTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&ScfRecord> {
        self.records.last()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }

    pub fn delta_p_norms(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.delta_p_norm).collect()
    }

    /// Columns `iter,energy,delta_p_norm,shift_norm,commutator_norm`, 17
    /// significant digits; the starting row leaves `delta_p_norm` empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "iter",
            "energy",
            "delta_p_norm",
            "shift_norm",
            "commutator_norm",
        ])?;
        for r in &self.records {
            w.write_record([
                r.iteration.to_string(),
                full_precision(r.energy),
                r.delta_p_norm.map(full_precision).unwrap_or_default(),
                full_precision(r.shift_norm),
                full_precision(r.commutator_norm),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScfResult {
    pub final_density: DensityMatrix,
    pub final_energy: f64,
    pub converged: bool,
    pub cycles_used: usize,
    pub trace: ScfTrace,
}

struct Evaluated {
    fock: CMatrix,
    energy: f64,
    shift_norm: f64,
    commutator_norm: f64,
}

fn evaluate(p: &CMatrix, fi: &FermionIntegrals) -> Result<Evaluated> {
    let fock = fi.one_body() + mean_field_raw(p, fi);
    let energy = energy_from_fock(p, &fock, fi.one_body())?;
    Ok(Evaluated {
        energy,
        shift_norm: shift_invariance_norm(p),
        commutator_norm: linalg::commutator_norm(p, &fock),
        fock,
    })
}

/// Plain Roothaan iteration `P_{k+1} = (1−d)·aufbau(F(P_k)) + d·P_k`.
///
/// Record 0 describes `P0`; record `k` describes the density after cycle `k`.
pub fn scf_run(
    fi: &FermionIntegrals,
    n: usize,
    p0: &DensityMatrix,
    cfg: &ScfConfig,
) -> Result<ScfResult> {
    cfg.validate()?;
    let m = fi.num_modes();
    if p0.num_modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: p0.num_modes(),
        });
    }
    if p0.num_particles() != n {
        return Err(Error::InvalidArgument(format!(
            "starting density holds {} particles, expected {n}",
            p0.num_particles()
        )));
    }

    let mut p = p0.matrix().clone();
    let mut current = evaluate(&p, fi)?;
    let mut trace = ScfTrace::default();
    trace.records.push(ScfRecord {
        iteration: 0,
        energy: current.energy,
        delta_p_norm: None,
        shift_norm: current.shift_norm,
        commutator_norm: current.commutator_norm,
    });

    let mut converged = false;
    let mut cycles_used = 0;
    for cycle in 1..=cfg.max_cycles {
        let occupied = aufbau_density(&current.fock, n)?.into_matrix();
        let next = if cfg.damping > 0.0 {
            occupied * C64::new(1.0 - cfg.damping, 0.0) + &p * C64::new(cfg.damping, 0.0)
        } else {
            occupied
        };
        let delta = frobenius(&(&next - &p));
        p = next;
        current = evaluate(&p, fi)?;
        trace.records.push(ScfRecord {
            iteration: cycle,
            energy: current.energy,
            delta_p_norm: Some(delta),
            shift_norm: current.shift_norm,
            commutator_norm: current.commutator_norm,
        });
        cycles_used = cycle;
        if delta < cfg.delta_p_tolerance {
            converged = true;
            break;
        }
    }

    Ok(ScfResult {
        final_density: DensityMatrix::unchecked(p, n),
        final_energy: current.energy,
        converged,
        cycles_used,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::C64;

    #[test]
    fn aufbau_on_diagonal_fock() {
        let f = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [3.0, -1.0, 2.0, 0.5].map(|x| C64::new(x, 0.0)).to_vec(),
        ));
        let p = aufbau_density(&f, 2).unwrap();
        let mut want = CMatrix::zeros(4, 4);
        want[(1, 1)] = C64::new(1.0, 0.0);
        want[(3, 3)] = C64::new(1.0, 0.0);
        assert!(max_abs(&(p.matrix() - want)) < 1e-12);
    }

    #[test]
    fn aufbau_on_identity_is_deterministic_rank_one() {
        let id = CMatrix::identity(4, 4);
        let a = aufbau_density(&id, 1).unwrap();
        a.check().unwrap();
        assert_eq!(a, aufbau_density(&id, 1).unwrap());
        assert!(aufbau_density(&id, 5).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(ScfConfig::default().validate().is_ok());
        let bad = [
            ScfConfig {
                max_cycles: 0,
                ..Default::default()
            },
            ScfConfig {
                delta_p_tolerance: 0.0,
                ..Default::default()
            },
            ScfConfig {
                damping: 1.0,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
    }

    #[test]
    fn csv_has_header_and_blank_first_delta() {
        let trace = ScfTrace {
            records: vec![ScfRecord {
                iteration: 0,
                energy: -1.5,
                delta_p_norm: None,
                shift_norm: 0.25,
                commutator_norm: 0.0,
            }],
        };
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("iter,energy,delta_p_norm,shift_norm,commutator_norm")
        );
        assert_eq!(
            lines.next(),
            Some("0,-1.5000000000000000e0,,2.5000000000000000e-1,0.0000000000000000e0")
        );
    }
}
