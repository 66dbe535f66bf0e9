mod common;

use common::haar_unitary;
use nrep_core::explorer::random_state;
use nrep_core::fermion::{one_rdm, particle_hole_rdm, rdm_matrix, rotate, FermionState};
use nrep_core::numerics::{eigh, CMatrix, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=8).prop_flat_map(|r| (1..=r, Just(r)))
}

fn state() -> impl Strategy<Value = FermionState> {
    (shape(), any::<u64>()).prop_map(|((n, r), seed)| random_state(n, r, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rdm_is_hermitian_psd_with_trace_n(psi in state()) {
        let g = rdm_matrix(&psi);
        prop_assert!(g.hermiticity_residual() < 1e-13);
        prop_assert!((g.trace().re - psi.n() as f64).abs() < 1e-12);
        let e = eigh(&g).unwrap();
        prop_assert!(e.values.iter().all(|&l| l > -1e-12 && l < 1.0 + 1e-12));
    }

    #[test]
    fn diagonal_counts_occupation(psi in state()) {
        // γ_pp = Σ_{I ∋ p} |x_I|²
        let g = rdm_matrix(&psi);
        for p in 1..=psi.r() {
            let want: f64 = psi
                .basis()
                .iter()
                .zip(psi.amplitudes())
                .filter(|(det, _)| det.contains(p))
                .map(|(_, z)| z.norm_sqr())
                .sum();
            prop_assert!((g[(p - 1, p - 1)].re - want).abs() < 1e-13);
        }
    }

    #[test]
    fn rotation_preserves_norm_and_conjugates_rdm(psi in state(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(psi.r(), &mut rng);
        let rotated = rotate(&psi, &u).unwrap();
        prop_assert!((rotated.norm() - 1.0).abs() < 1e-12);
        let want = u.matmul(&rdm_matrix(&psi)).matmul(&u.adjoint());
        prop_assert!(rdm_matrix(&rotated).max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn rotations_compose(psi in state(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(psi.r(), &mut rng);
        let v = haar_unitary(psi.r(), &mut rng);
        let two_step = rotate(&rotate(&psi, &v).unwrap(), &u).unwrap();
        let one_step = rotate(&psi, &u.matmul(&v)).unwrap();
        prop_assert!(two_step.max_abs_diff(&one_step).unwrap() < 1e-12);
    }

    #[test]
    fn global_phase_leaves_rdm_unchanged(psi in state(), theta in 0.0f64..std::f64::consts::TAU) {
        let shifted = psi.scaled(C64::from_polar(1.0, theta));
        prop_assert!(rdm_matrix(&shifted).max_abs_diff(&rdm_matrix(&psi)) < 1e-13);
    }

    #[test]
    fn particle_hole_spectrum_is_reflected(psi in state()) {
        let g = one_rdm(&psi).unwrap();
        let l = g.spectrum().unwrap();
        let h = particle_hole_rdm(&g).unwrap();
        prop_assert_eq!(h.n(), psi.r() - psi.n());
        let mu = h.spectrum().unwrap();
        let r = psi.r();
        for k in 0..r {
            prop_assert!((mu.values()[k] - (1.0 - l.values()[r - 1 - k])).abs() < 1e-12);
        }
    }

    #[test]
    fn eigh_reconstructs(seed in any::<u64>(), dim in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CMatrix::from_fn(dim, dim, |_, _| common::gaussian(&mut rng));
        let h = a.add(&a.adjoint());
        let e = eigh(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-11 * (1.0 + h.max_abs()));
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(e.vectors.unitarity_residual() < 1e-12);
    }
}
