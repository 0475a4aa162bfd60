//! Oracle cross-checks bundled into a `{check: {pass, residual}}` report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embedding::{
    build_construction1, integrals_from_glass, paired_ground_state,
    translation_invariance_residual, FermionIntegrals,
};
use crate::ising::{apply_gadget, bipartition, ising_energy, SpinConfig, SpinGlass};
use crate::oracle::{
    assemble, determinant_state, sector_ground_energy, wick_expectation, wick_zero_residual,
    MAX_ORACLE_MODES,
};
use crate::scf::{density_from_spins, haar_random_density, hf_energy};
use crate::{Error, Result};

pub const OPERATOR_TOL: f64 = 1e-12;
pub const ENERGY_TOL: f64 = 1e-9;
pub const SPECTRUM_TOL: f64 = 1e-8;
pub const INVARIANCE_TOL: f64 = 1e-10;

/// Full-spectrum comparison is limited to this many modes.
const SPECTRUM_MODES: usize = 10;
/// Half-filling sector diagonalization is limited to this many modes.
const SECTOR_MODES: usize = 12;
/// State-vector expectation checks per instance.
const STATE_SAMPLES: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub pass: bool,
    pub residual: f64,
}

impl CheckOutcome {
    fn below(residual: f64, tol: f64) -> Self {
        Self {
            pass: residual.is_finite() && residual < tol,
            residual,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct VerifyReport {
    pub checks: BTreeMap<String, CheckOutcome>,
}

impl VerifyReport {
    fn add(&mut self, name: &str, outcome: CheckOutcome) {
        self.checks.insert(name.to_string(), outcome);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

fn random_density_checks(
    report: &mut VerifyReport,
    fi: &FermionIntegrals,
    samples: u64,
) -> Result<()> {
    let m = fi.num_modes();
    let op = if m <= MAX_ORACLE_MODES {
        Some(assemble(fi)?)
    } else {
        None
    };
    let mut wick_hf: f64 = 0.0;
    let mut wick_state: f64 = 0.0;
    for seed in 0..samples {
        let n = (seed as usize) % (m + 1);
        let p = haar_random_density(m, n, seed)?;
        let w = wick_expectation(&p, fi)?;
        wick_hf = wick_hf.max((w - hf_energy(&p, fi)?).abs());
        if let (Some(op), true) = (&op, seed < STATE_SAMPLES) {
            let psi = determinant_state(&p.occupied_orbitals()?)?;
            let exact = op.expectation(&psi)?;
            wick_state = wick_state.max((exact.re - w).abs()).max(exact.im.abs());
        }
    }
    report.add(
        "wick_equals_hf_energy",
        CheckOutcome::below(wick_hf, ENERGY_TOL),
    );
    if let Some(op) = op {
        report.add(
            "wick_equals_state_vector",
            CheckOutcome::below(wick_state, ENERGY_TOL),
        );
        report.add(
            "hermiticity",
            CheckOutcome::below(op.hermiticity_residual(), OPERATOR_TOL),
        );
        report.add(
            "number_conservation",
            CheckOutcome::below(op.number_commutator_norm(), OPERATOR_TOL),
        );
    }
    Ok(())
}

/// Checks for the momentum-pair Hamiltonian of `g`, assembled on the sites.
pub fn verify_construction1(g: &SpinGlass, samples: u64) -> Result<VerifyReport> {
    let h = build_construction1(g);
    let m = h.num_modes();
    if m > MAX_ORACLE_MODES {
        return Err(Error::SizeGuard {
            what: "num_modes",
            limit: MAX_ORACLE_MODES,
            got: m,
        });
    }
    let fi = h.site_integrals();
    let mut report = VerifyReport::default();
    report.add(
        "momentum_conservation",
        CheckOutcome {
            pass: h.momentum_violations() == 0,
            residual: h.momentum_violations() as f64,
        },
    );
    report.add(
        "translation_invariance",
        CheckOutcome::below(translation_invariance_residual(&fi), INVARIANCE_TOL),
    );
    report.add(
        "antisymmetry",
        CheckOutcome::below(fi.antisymmetry_residual(), OPERATOR_TOL),
    );
    report.add(
        "wick_zero_momentum_determinants",
        CheckOutcome::below(wick_zero_residual(&h)?, INVARIANCE_TOL),
    );
    random_density_checks(&mut report, &fi, samples)?;

    let op = assemble(&fi)?;
    if m <= SPECTRUM_MODES {
        let exact = op.full_spectrum()?;
        let predicted = h.predicted_fock_spectrum()?;
        let diff = exact
            .iter()
            .zip(&predicted)
            .map(|(a, &b)| (a - b as f64).abs())
            .fold(0.0, f64::max);
        report.add(
            "eigensystem_equivalence",
            CheckOutcome::below(diff, SPECTRUM_TOL),
        );
    }
    if m <= SECTOR_MODES && bipartition(g).is_ok() {
        let (_, paired) = paired_ground_state(g)?;
        let exact = sector_ground_energy(&op, m / 2)?;
        report.add(
            "paired_state_is_half_filling_ground",
            CheckOutcome::below((exact - paired as f64).abs(), SPECTRUM_TOL),
        );
    }
    Ok(report)
}

/// Checks for the plane-wave integrals of `g`, optionally after the gadget.
pub fn verify_construction2(g: &SpinGlass, use_gadget: bool, samples: u64) -> Result<VerifyReport> {
    let embedded = if use_gadget {
        apply_gadget(g)?.doubled
    } else {
        g.clone()
    };
    let fi = integrals_from_glass(&embedded)?;
    let m = fi.num_modes();
    let mut report = VerifyReport::default();
    report.add(
        "translation_invariance",
        CheckOutcome::below(translation_invariance_residual(&fi), INVARIANCE_TOL),
    );
    report.add(
        "antisymmetry",
        CheckOutcome::below(fi.antisymmetry_residual(), OPERATOR_TOL),
    );
    random_density_checks(&mut report, &fi, samples)?;

    // E_HF(S) − H_I(S) should not depend on S within a filling
    let offset = embedded.coupling_sum() as f64;
    let mut worst: f64 = 0.0;
    let filling = if use_gadget { Some(m / 2) } else { None };
    for mask in 0..1u64 << m {
        if filling.is_some_and(|n| mask.count_ones() as usize != n) {
            continue;
        }
        let s = SpinConfig::from_mask(mask, m);
        let e = hf_energy(&density_from_spins(&s)?, &fi)?;
        let target = ising_energy(&embedded, &s)? as f64 + offset;
        worst = worst.max((e - target).abs());
    }
    report.add(
        "affine_spin_energy_law",
        CheckOutcome::below(worst, ENERGY_TOL),
    );
    Ok(report)
}
