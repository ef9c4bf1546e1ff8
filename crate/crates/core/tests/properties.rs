mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use teleport_core::analysis::bridge::to_dense;
use teleport_core::analysis::{fidelity_closed_form, p_add_closed_form, p_add_rational};
use teleport_core::detection::threshold_measure;
use teleport_core::elements::{beamsplitter, loss_channel, phase_shift, state_swap, LossSpec};
use teleport_core::fock::{Ensemble, PureState};
use teleport_core::Complex64;

fn state(seed: u64, modes: usize) -> PureState {
    common::random_state(&mut ChaCha8Rng::seed_from_u64(seed), modes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_is_conjugate_symmetric(a in any::<u64>(), b in any::<u64>(), modes in 2usize..=4) {
        let (x, y) = (state(a, modes), state(b, modes));
        let lhs = x.inner(&y).unwrap();
        let rhs = y.inner(&x).unwrap().conj();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn unitaries_keep_the_norm(seed in any::<u64>(), modes in 2usize..=5, phi in -7.0f64..7.0) {
        let s = state(seed, modes);
        let (m0, m1) = (common::label(0), common::label(modes - 1));
        for out in [beamsplitter(&s, &m0, &m1).unwrap(), phase_shift(&s, &m0, phi).unwrap(), state_swap(&s, &m0, &m1).unwrap()] {
            prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn beamsplitter_preserves_inner_products(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (state(a, 3), state(b, 3));
        let bx = beamsplitter(&x, "m0", "m2").unwrap();
        let by = beamsplitter(&y, "m0", "m2").unwrap();
        prop_assert!((bx.inner(&by).unwrap() - x.inner(&y).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn loss_preserves_trace(seed in any::<u64>(), modes in 1usize..=4, t in 0.0f64..=1.0) {
        let s = state(seed, modes.max(2));
        let e = loss_channel(&s, "m0", LossSpec::new(t.max(1e-9)).unwrap()).unwrap();
        prop_assert!((e.total_weight() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn loss_composes_multiplicatively(seed in any::<u64>(), t1 in 0.01f64..=1.0, t2 in 0.01f64..=1.0) {
        let s = state(seed, 3);
        let twice = loss_channel(
            &loss_channel(&s, "m1", LossSpec::new(t1).unwrap()).unwrap(),
            "m1",
            LossSpec::new(t2).unwrap(),
        )
        .unwrap();
        let once = loss_channel(&s, "m1", LossSpec::new(t1 * t2).unwrap()).unwrap();
        let (_, a) = to_dense(&twice).unwrap();
        let (_, b) = to_dense(&once).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn measurement_preserves_trace(seed in any::<u64>(), t in 0.05f64..=1.0) {
        let s = state(seed, 4);
        let e = loss_channel(&s, "m2", LossSpec::new(t).unwrap()).unwrap();
        let outcomes = threshold_measure(&e, &["m0", "m2"]).unwrap();
        let total = outcomes.iter().fold(0.0, |a, o| a + o.weight);
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tensor_then_trace_recovers_factor(a in any::<u64>(), b in any::<u64>()) {
        let x = state(a, 2);
        let y = state(b, 3).relabel(&[("m0", "y0"), ("m1", "y1"), ("m2", "y2")]).unwrap();
        let back = x.tensor(&y).unwrap().trace_out(&["y0", "y1", "y2"]).unwrap();
        let (_, lhs) = to_dense(&back).unwrap();
        let (_, rhs) = to_dense(&x).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn superpose_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let (x, y, z) = (state(a, 3), state(b, 3), state(c, 3));
        let k = Complex64::new(re, im);
        let one = Complex64::new(1.0, 0.0);
        let xy = PureState::superpose(&[(one, &x), (k, &y)]).unwrap();
        let left = PureState::superpose(&[(one, &xy), (k, &z)]).unwrap();
        let yz = PureState::superpose(&[(one, &y), (one, &z)]).unwrap();
        let right = PureState::superpose(&[(one, &x), (k, &yz)]).unwrap();
        let (_, l) = to_dense(&Ensemble::pure(left)).unwrap();
        let (_, r) = to_dense(&Ensemble::pure(right)).unwrap();
        prop_assert!(l.max_abs_diff(&r) < 1e-12);
    }

    #[test]
    fn fidelity_falls_with_occupation(n1 in 0.0f64..5.0, dn in 1e-6f64..5.0) {
        for order in [1, 2] {
            prop_assert!(fidelity_closed_form(n1 + dn, order).unwrap() < fidelity_closed_form(n1, order).unwrap());
        }
    }
}

#[test]
fn additional_term_probability_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let s: f64 = rand::Rng::gen_range(&mut rng, 0.0..1.0);
        let nbar = s / (1.0 - s);
        let direct = p_add_closed_form(nbar, 2).unwrap();
        assert!((direct - p_add_rational(s)).abs() < 1e-12, "s = {s}");
    }
}
