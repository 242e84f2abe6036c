mod common;

use cluster_ghz::state::{
    build_cluster_state, build_cluster_state_reversed, build_phi_family, decomposition_check,
    expectation, stabilizer_generators, StateVector,
};
use cluster_ghz::{make_pauli, Side};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `2^{-n/2} (-1)^{Σ b_a b_{a+1}}` computed directly from the index bits.
fn oracle_cluster(n: usize) -> Vec<Complex64> {
    let norm = (1u64 << n) as f64;
    (0..1usize << n)
        .map(|idx| {
            let bit = |a: usize| (idx >> (n - a)) & 1;
            let parity: usize = (1..n).map(|a| bit(a) * bit(a + 1)).sum();
            let s = if parity.is_multiple_of(2) { 1.0 } else { -1.0 };
            Complex64::new(s / norm.sqrt(), 0.0)
        })
        .collect()
}

#[test]
fn cluster_matches_closed_form() {
    for n in 2..=10 {
        let oracle = StateVector::new(n, oracle_cluster(n)).unwrap();
        assert!(
            build_cluster_state(n).unwrap().approx_eq(&oracle, 1e-12),
            "n = {n}"
        );
        assert!(build_cluster_state_reversed(n)
            .unwrap()
            .approx_eq(&oracle, 1e-12));
    }
}

#[test]
fn generators_fix_the_cluster_state() {
    for n in 2..=9 {
        let psi = build_cluster_state(n).unwrap();
        for g in stabilizer_generators(n).unwrap() {
            assert!((expectation(&g, &psi).unwrap() - 1.0).norm() < 1e-9);
        }
    }
}

#[test]
fn regrouped_decompositions() {
    for n in 4..=9 {
        for side in [Side::Head, Side::Tail] {
            assert!(decomposition_check(n, side).unwrap(), "n = {n}, {side:?}");
        }
    }
}

#[test]
fn phi_family_keeps_the_contradiction() {
    let half = Complex64::new(0.5, 0.0);
    let phi4 = build_cluster_state(4).unwrap();
    assert!(build_phi_family(half, half).unwrap().approx_eq(&phi4, 1e-9));
    let rows = ["ZXIX", "YYIX", "YXXY", "ZYXY"].map(|s| make_pauli(s).unwrap());
    let pattern: Vec<f64> = rows
        .iter()
        .map(|w| expectation(w, &phi4).unwrap().re)
        .collect();
    assert_eq!(
        pattern.iter().map(|v| v.round() as i64).collect::<Vec<_>>(),
        [1, 1, 1, -1]
    );
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (a, b) = common::random_phi_coefficients(&mut rng);
        let psi = build_phi_family(a, b).unwrap();
        for (w, want) in rows.iter().zip(&pattern) {
            assert!((expectation(w, &psi).unwrap() - want).norm() < 1e-9);
        }
    }
    assert!(build_phi_family(half, Complex64::new(0.0, 0.0)).is_err());
}
