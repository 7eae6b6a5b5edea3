//! Property tests over seeded random instances. Heavy numeric objects are
//! built deterministically from generated seeds, which keeps shrinking
//! meaningful and failures reproducible.

use ivd::bounds::{gen_entropy_lower, mi_trace_bound_uniform};
use ivd::fm::{sigma_states, FunctionSpec, GroupLaw};
use ivd::info::{
    holevo_bound, measurement_mutual_info, shannon_entropy, ProbVector, QuantumSource,
};
use ivd::linalg::{
    max_abs_diff, partial_trace_matrix, pure_trace_distance, random_density, random_haar_unitary,
    tensor, trace_norm, CMatrix, Keep, PureState, C64,
};
use ivd::optimizer::random_povm;
use ivd::{attack::AttackKraus, DEFAULT_TOL};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_complex_matrix(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn random_probs(seed: u64, len: usize, cap: Option<f64>) -> ProbVector {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    loop {
        let mut v: Vec<f64> = (0..len).map(|_| rng.random_range(1e-3..1.0)).collect();
        let sum: f64 = v.iter().sum();
        for x in &mut v {
            *x /= sum;
        }
        if cap.is_none_or(|c| v.iter().all(|&x| x <= c)) {
            return ProbVector::new(v, 1e-9).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_mixed_product(seed in 0u64..1_000_000, da in 2usize..4, db in 2usize..4) {
        let a = random_complex_matrix(da, seed);
        let b = random_complex_matrix(db, seed.wrapping_add(1));
        let c = random_complex_matrix(da, seed.wrapping_add(2));
        let d = random_complex_matrix(db, seed.wrapping_add(3));
        let left = tensor(&a, &b) * tensor(&c, &d);
        let right = tensor(&(&a * &c), &(&b * &d));
        prop_assert!(max_abs_diff(&left, &right) < 1e-10);
    }

    #[test]
    fn pure_distance_matches_eigensolver(seed in 0u64..1_000_000, dim in 2usize..8) {
        let psi = PureState::random(dim, seed);
        let phi = PureState::random(dim, seed.wrapping_add(17));
        let formula = pure_trace_distance(&psi, &phi).unwrap();
        let direct = trace_norm(&(psi.projector() - phi.projector()), DEFAULT_TOL).unwrap();
        prop_assert!((formula - direct).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_contracts_trace_norm(seed in 0u64..1_000_000, d1 in 2usize..4, d2 in 2usize..4) {
        let dim = d1 * d2;
        let rho = random_density(dim, 1 + (seed as usize) % dim, seed).unwrap();
        let sigma = random_density(dim, dim, seed.wrapping_add(3)).unwrap();
        let diff = rho.matrix() - sigma.matrix();
        let full = trace_norm(&diff, DEFAULT_TOL).unwrap();
        let reduced =
            trace_norm(&partial_trace_matrix(&diff, d1, d2, Keep::First), DEFAULT_TOL).unwrap();
        prop_assert!(reduced <= full + 1e-9);
    }

    #[test]
    fn entropy_lower_bound_is_a_lower_bound(seed in 0u64..1_000_000, len in 3usize..6) {
        let p_ref = random_probs(seed, len, Some(0.5));
        let p = random_probs(seed.wrapping_add(5), len, None);
        let bound = gen_entropy_lower(&p, &p_ref).unwrap();
        prop_assert!(bound <= shannon_entropy(&p) + 1e-12);
        let at_ref = gen_entropy_lower(&p_ref, &p_ref).unwrap();
        prop_assert!((at_ref - shannon_entropy(&p_ref)).abs() < 1e-12);
    }

    #[test]
    fn measured_information_is_doubly_bounded(seed in 0u64..1_000_000) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let dim = rng.random_range(2..=4);
        let n_states = rng.random_range(2..=4);
        let states = (0..n_states)
            .map(|s| random_density(dim, 1 + s % dim, seed.wrapping_add(100 + s as u64)).unwrap())
            .collect();
        let src = QuantumSource::new(states, random_probs(seed.wrapping_add(7), n_states, None)).unwrap();
        let povm = random_povm(dim, rng.random_range(2..=6), seed.wrapping_add(9)).unwrap();
        let mi = measurement_mutual_info(&src, &povm).unwrap();
        prop_assert!(mi <= holevo_bound(&src).unwrap() + 1e-9);
        prop_assert!(mi <= shannon_entropy(src.priors()) + 1e-9);
    }

    #[test]
    fn entropy_invariant_under_haar_rotation(seed in 0u64..1_000_000, dim in 2usize..6) {
        let rho = random_density(dim, 1 + (seed as usize) % dim, seed).unwrap();
        let u = random_haar_unitary(dim, seed.wrapping_add(11));
        let before = ivd::info::von_neumann_entropy(&rho).unwrap();
        let after = ivd::info::entropy_after_unitary(&rho, &u).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conditional_states_average_to_the_ensemble(seed in 0u64..1_000_000, dim in 2usize..4) {
        let kraus = AttackKraus::random_haar(dim, dim * dim, seed).unwrap();
        let eve = ivd::attack::eve_states(&kraus).unwrap();
        let rho = eve.average_state();
        let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_add(1));
        let table: Vec<i64> = (0..dim).map(|_| rng.random_range(0..dim as i64)).collect();
        let f = FunctionSpec::from_table(table).unwrap();
        let g = GroupLaw::cyclic(dim);
        for a in 0..dim {
            let sigmas = sigma_states(&eve, &f, a, &g).unwrap();
            let mut mix = CMatrix::zeros(eve.dim(), eve.dim());
            let mut total = 0.0;
            for s in &sigmas {
                mix += s.state.matrix().scale(s.weight);
                total += s.weight;
            }
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(max_abs_diff(&mix, rho.matrix()) < 1e-9);
        }
    }

    #[test]
    fn corollary_bound_dominates_any_measurement(seed in 0u64..1_000_000, dim in 2usize..4) {
        let kraus = AttackKraus::random_haar(dim, dim * dim, seed).unwrap();
        let eve = ivd::attack::eve_states(&kraus).unwrap();
        let povm = random_povm(eve.dim(), dim + 1, seed.wrapping_add(2)).unwrap();
        let mi = measurement_mutual_info(&eve, &povm).unwrap();
        prop_assert!(mi <= mi_trace_bound_uniform(&eve).unwrap() + 1e-9);
    }
}
