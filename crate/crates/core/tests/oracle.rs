//! Second-quantized operations checked against the dense tensor oracle.

mod common;

use common::{gaussian, haar_unitary, Tensor};
use nrep_core::explorer::random_state;
use nrep_core::fermion::{
    contract_orbital, inner, partial_inner, rdm_matrix, rotate, wedge, FermionState, OrbitalIndex,
};
use nrep_core::numerics::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SHAPES: [(usize, usize); 7] = [(1, 4), (2, 4), (2, 6), (3, 5), (3, 6), (4, 7), (5, 8)];

#[test]
fn tensor_round_trip_and_antisymmetry() {
    for (k, &(n, r)) in SHAPES.iter().enumerate() {
        let psi = random_state(n, r, 100 + k as u64).unwrap();
        let t = Tensor::from_state(&psi);
        assert!(t.is_antisymmetric(1e-14), "({n},{r})");
        let norm: f64 = t.data.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(t.to_state().max_abs_diff(&psi).unwrap() < 1e-14);
    }
}

#[test]
fn rdm_matches_partial_trace() {
    for (k, &(n, r)) in SHAPES.iter().enumerate() {
        let psi = random_state(n, r, 200 + k as u64).unwrap();
        let want = Tensor::from_state(&psi).rdm();
        let got = rdm_matrix(&psi);
        assert!(
            got.max_abs_diff(&want) < 1e-13,
            "({n},{r}): {}",
            got.max_abs_diff(&want)
        );
    }
}

#[test]
fn rotation_matches_mode_wise_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (k, &(n, r)) in SHAPES.iter().enumerate() {
        let psi = random_state(n, r, 300 + k as u64).unwrap();
        let u = haar_unitary(r, &mut rng);
        let want = Tensor::from_state(&psi).apply(&u);
        let got = Tensor::from_state(&rotate(&psi, &u).unwrap());
        assert!(
            got.max_abs_diff(&want) < 1e-13,
            "({n},{r}): {}",
            got.max_abs_diff(&want)
        );
    }
}

#[test]
fn partial_inner_matches_first_slice() {
    for (k, &(n, r)) in SHAPES.iter().enumerate().filter(|(_, s)| s.0 >= 2) {
        let psi = random_state(n, r, 400 + k as u64).unwrap();
        let t = Tensor::from_state(&psi);
        for p in 0..r {
            let got = Tensor::from_state(&partial_inner(OrbitalIndex::new(p + 1, r).unwrap(), &psi).unwrap());
            let d = got.max_abs_diff(&t.first_slice(p));
            assert!(d < 1e-14, "({n},{r}) p={p}: {d}");
        }
    }
}

#[test]
fn contraction_is_linear_in_the_orbital() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let psi = random_state(3, 6, 5).unwrap();
    let t = Tensor::from_state(&psi);
    let phi: Vec<C64> = (0..6).map(|_| gaussian(&mut rng)).collect();
    let got = Tensor::from_state(&contract_orbital(&phi, &psi).unwrap());
    let block = 36;
    let want: Vec<C64> = (0..block)
        .map(|rest| (0..6).map(|p| phi[p].conj() * t.data[p * block + rest]).sum())
        .collect();
    let d = got
        .data
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(d < 1e-14, "{d}");
}

#[test]
fn wedge_is_adjoint_of_contraction() {
    // ⟨wedge(φ, Φ), Ψ⟩ = √n ⟨Φ, contract(φ, Ψ)⟩
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for &(n, r) in &[(2, 5), (3, 6), (4, 7)] {
        let psi = random_state(n, r, 17).unwrap();
        let small = random_state(n - 1, r, 19).unwrap();
        let phi: Vec<C64> = (0..r).map(|_| gaussian(&mut rng)).collect();
        let lhs = inner(&wedge(&phi, &small).unwrap(), &psi).unwrap();
        let rhs = inner(&small, &contract_orbital(&phi, &psi).unwrap()).unwrap() * (n as f64).sqrt();
        assert!((lhs - rhs).norm() < 1e-13, "({n},{r}): {lhs} vs {rhs}");
    }
}

#[test]
fn slater_tensor_is_normalized_determinant() {
    // [1,2] in two orbitals: T[0,1] = -T[1,0] = 1/√2
    let psi = FermionState::from_terms(2, 2, &[(vec![1, 2], C64::new(1.0, 0.0))]).unwrap();
    let t = Tensor::from_state(&psi);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((t.data[1] - C64::new(h, 0.0)).norm() < 1e-15);
    assert!((t.data[2] + C64::new(h, 0.0)).norm() < 1e-15);
    assert_eq!(t.data[0], C64::new(0.0, 0.0));
}
