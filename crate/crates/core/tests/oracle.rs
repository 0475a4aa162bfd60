use glass2fock::embedding::{
    build_construction1, build_construction1_with, integrals_from_glass, paired_ground_state,
    ModePairing,
};
use glass2fock::ising::{
    brute_force_ground, generate_lattice_glass, six_spin_reference, SpinGlass,
};
use glass2fock::oracle::{
    assemble, calibrate_pairing_constant, determinant_state, sector_basis, wick_expectation,
    wick_zero_residual,
};
use glass2fock::scf::{haar_random_density, momentum_occupation_density};

fn chain(k: usize, signs: &[i64]) -> SpinGlass {
    SpinGlass::from_couplings(k, (0..k - 1).map(|i| (i, i + 1, signs[i % signs.len()]))).unwrap()
}

#[test]
fn momentum_pair_spectrum_matches_closed_form() {
    for g in [
        chain(1, &[1]),
        chain(2, &[-1]),
        chain(3, &[1, -1]),
        SpinGlass::from_couplings(3, [(0, 1, 1), (0, 2, 1), (1, 2, -1)]).unwrap(),
    ] {
        let h = build_construction1(&g);
        let exact = assemble(&h).unwrap().full_spectrum().unwrap();
        let predicted = h.predicted_fock_spectrum().unwrap();
        assert_eq!(exact.len(), 1 << h.num_modes());
        for (e, p) in exact.iter().zip(&predicted) {
            assert!((e - *p as f64).abs() < 1e-8, "{e} vs {p}");
        }
    }
}

#[test]
fn site_and_momentum_bases_give_the_same_operator_spectrum() {
    let h = build_construction1(&chain(3, &[1, 1]));
    let a = assemble(&h.site_integrals())
        .unwrap()
        .full_spectrum()
        .unwrap();
    let b = assemble(&h.momentum_integrals())
        .unwrap()
        .full_spectrum()
        .unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn momentum_determinants_have_zero_energy() {
    let g = generate_lattice_glass(1, 3).unwrap();
    let h = build_construction1(&g);
    assert!(wick_zero_residual(&h).unwrap() < 1e-10);
    // the state-vector oracle agrees on one of them
    let m = h.num_modes();
    let p = momentum_occupation_density(m, &[1, 2, 4]).unwrap();
    let psi = determinant_state(&p.occupied_orbitals().unwrap()).unwrap();
    let e = assemble(&h.site_integrals())
        .unwrap()
        .expectation(&psi)
        .unwrap();
    assert!(e.norm() < 1e-10);
}

#[test]
fn paired_state_energy_is_the_ising_minimum() {
    assert!((calibrate_pairing_constant().unwrap() - 1.0).abs() < 1e-10);
    let g = generate_lattice_glass(1, 0).unwrap();
    let (occ, e) = paired_ground_state(&g).unwrap();
    assert_eq!(occ.particle_number(), g.num_spins());
    assert_eq!(e, brute_force_ground(&g).unwrap().energy);
}

#[test]
fn reflection_pairing_breaks_momentum_conservation() {
    let g = six_spin_reference();
    assert_eq!(build_construction1(&g).momentum_violations(), 0);
    assert!(build_construction1_with(&g, ModePairing::Reflection).momentum_violations() > 0);
}

#[test]
fn sectors_partition_the_fock_space() {
    let op = assemble(&build_construction1(&chain(2, &[1]))).unwrap();
    let m = op.num_modes();
    let dims: usize = (0..=m).map(|n| sector_basis(m, n).len()).sum();
    assert_eq!(dims, 1 << m);
    let full_min = op.full_spectrum().unwrap()[0];
    let sector_min = (0..=m)
        .map(|n| op.sector_spectrum(n).unwrap().eigenvalues[0])
        .fold(f64::INFINITY, f64::min);
    assert!((full_min - sector_min).abs() < 1e-10);
}

#[test]
fn plane_wave_operator_expectations_match_wick() {
    let fi = integrals_from_glass(&six_spin_reference()).unwrap();
    let op = assemble(&fi).unwrap();
    assert!(op.hermiticity_residual() < 1e-12);
    assert!(op.number_commutator_norm() < 1e-12);
    for seed in 0..10 {
        let p = haar_random_density(6, 3, seed).unwrap();
        let psi = determinant_state(&p.occupied_orbitals().unwrap()).unwrap();
        let exact = op.expectation(&psi).unwrap();
        assert!((exact.re - wick_expectation(&p, &fi).unwrap()).abs() < 1e-9);
        assert!(exact.im.abs() < 1e-9);
    }
}
