use std::f64::consts::LN_2;

use entanglion::inequalities::{random_suite, SuiteConfig};
use entanglion::states::random_unitary;
use entanglion::{
    check_monogamy, check_polygamy, ckw_check, cren, crenoa, haar_random_pure, measure_profile, negativity, tangle,
    Bipartition, MeasureKind, QuantumState, RoofConfig, Scheme, SubsystemShape, Verdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn qubits(n: usize, seed: u64) -> QuantumState {
    haar_random_pure(&SubsystemShape::qubits(n).unwrap(), seed).unwrap()
}

fn scramble(state: &QuantumState, seed: u64) -> QuantumState {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let us: Vec<_> = state.shape().dims().iter().map(|&d| random_unitary(d, &mut rng)).collect();
    state.apply_local_unitaries(&us).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn measures_are_local_unitary_invariant(seed in any::<u64>(), useed in any::<u64>()) {
        let cfg = RoofConfig::default();
        let psi = qubits(3, seed);
        let phi = scramble(&psi, useed);
        for cut in [Bipartition::focus_rest(0, 3), Bipartition::pair(0, 1), Bipartition::pair(1, 2)] {
            let a = negativity(&psi, &cut).unwrap().value;
            let b = negativity(&phi, &cut).unwrap().value;
            prop_assert!((a - b).abs() < 1e-9, "{cut:?}: {a} vs {b}");
        }
        for cut in [Bipartition::focus_rest(0, 3), Bipartition::pair(0, 2)] {
            let a = tangle(&psi, &cut, &cfg).unwrap().value;
            let b = tangle(&phi, &cut, &cfg).unwrap().value;
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn pairwise_measures_are_ordered(seed in any::<u64>()) {
        let cfg = RoofConfig::default();
        let psi = qubits(3, seed);
        for j in [1, 2] {
            let cut = Bipartition::pair(0, j);
            let n = negativity(&psi, &cut).unwrap().value;
            let c = cren(&psi, &cut, &cfg).unwrap().value;
            let a = crenoa(&psi, &cut, &cfg).unwrap().value;
            prop_assert!(n <= c + 1e-12, "negativity {n} above CREN {c}");
            prop_assert!(c <= a + 1e-12, "CREN {c} above CRENoA {a}");
            prop_assert!(a <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn qubit_ckw_holds(seed in any::<u64>()) {
        let p = measure_profile(&qubits(3, seed), 0, MeasureKind::Tangle, &RoofConfig::default()).unwrap();
        let r = ckw_check(&p).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Holds, "margin {}", r.margin);
    }

    #[test]
    fn haar_monogamy_and_polygamy(seed in any::<u64>(), mono in (4.0 * LN_2)..12.0, poly in 0.0..2.0f64) {
        let cfg = RoofConfig::default();
        let psi = qubits(3, seed);
        let p = measure_profile(&psi, 0, MeasureKind::Lcren, &cfg).unwrap();
        for s in [Scheme::Uniform, Scheme::Hamming] {
            let r = check_monogamy(&p, mono, s).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Holds, "{:?} alpha {} margin {}", s, mono, r.margin);
        }
        let q = measure_profile(&psi, 0, MeasureKind::Lcrenoa, &cfg).unwrap();
        for s in [Scheme::Uniform, Scheme::Hamming] {
            let r = check_polygamy(&q, poly, s).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Holds, "{:?} alpha {} margin {}", s, poly, r.margin);
        }
    }

    #[test]
    fn appending_a_product_ancilla_changes_nothing(seed in any::<u64>()) {
        let cfg = RoofConfig::default();
        let psi = qubits(3, seed);
        let zero = QuantumState::pure(
            vec![1.0.into(), 0.0.into()],
            SubsystemShape::qubits(1).unwrap(),
        ).unwrap();
        let big = psi.tensor(&zero).unwrap();
        let a = cren(&psi, &Bipartition::focus_rest(0, 3), &cfg).unwrap().value;
        let b = cren(&big, &Bipartition::focus_rest(0, 4), &cfg).unwrap().value;
        prop_assert!((a - b).abs() < 1e-10);
        let p = measure_profile(&big, 0, MeasureKind::Lcren, &cfg).unwrap();
        prop_assert!(p.pairs[2].value.abs() < 1e-12);
    }
}

#[test]
fn random_suite_is_deterministic_across_thread_counts() {
    let cfg = SuiteConfig {
        qubits: 3,
        count: 24,
        seed: 9,
        ..SuiteConfig::default()
    };
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = single.install(|| random_suite(&cfg)).unwrap();
    let b = random_suite(&cfg).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
