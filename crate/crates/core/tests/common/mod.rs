//! Random small circuits run through both the sparse engine and the dense
//! oracle.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use teleport_core::analysis::bridge::to_dense;
use teleport_core::analysis::{dense_oracle, oracle::measure_pattern, DenseMatrix, Gate};
use teleport_core::detection::threshold_measure;
use teleport_core::elements::{beamsplitter, loss_channel, phase_shift, state_swap, LossSpec};
use teleport_core::fock::{Ensemble, ModeRegistry, PureState};
use teleport_core::Complex64;

pub const CUTOFF: usize = 2;

pub fn label(i: usize) -> String {
    format!("m{i}")
}

/// Random normalized state on `modes` modes with at most two photons in
/// total.
pub fn random_state(rng: &mut ChaCha8Rng, modes: usize) -> PureState {
    let labels: Vec<String> = (0..modes).map(label).collect();
    let reg = ModeRegistry::uniform(&labels, CUTOFF).unwrap();
    let mut occs = Vec::new();
    for idx in 0..3usize.pow(modes as u32) {
        let occ: Vec<u8> = (0..modes).map(|k| (idx / 3usize.pow(k as u32) % 3) as u8).collect();
        if occ.iter().map(|&n| n as usize).sum::<usize>() <= CUTOFF {
            occs.push(occ);
        }
    }
    let n_terms = rng.gen_range(1..=4);
    let terms: Vec<(Vec<u8>, Complex64)> = (0..n_terms)
        .map(|_| {
            let o = occs[rng.gen_range(0..occs.len())].clone();
            (o, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect();
    let mut merged: std::collections::BTreeMap<Vec<u8>, Complex64> = Default::default();
    for (o, a) in terms {
        *merged.entry(o).or_default() += a;
    }
    PureState::from_terms(reg, merged).unwrap().normalized().unwrap()
}

pub fn random_gates(rng: &mut ChaCha8Rng, modes: usize, count: usize) -> Vec<Gate> {
    let pair = |rng: &mut ChaCha8Rng| {
        let a = rng.gen_range(0..modes);
        let mut b = rng.gen_range(0..modes - 1);
        if b >= a {
            b += 1;
        }
        (a, b)
    };
    (0..count)
        .map(|_| match rng.gen_range(0..4) {
            0 => {
                let (mode1, mode2) = pair(rng);
                Gate::Beamsplitter { mode1, mode2 }
            }
            1 => Gate::Phase { mode: rng.gen_range(0..modes), phi: rng.gen_range(-3.2..3.2) },
            2 => {
                let (mode_x, mode_y) = pair(rng);
                Gate::Swap { mode_x, mode_y }
            }
            _ => Gate::Loss { mode: rng.gen_range(0..modes), transmittance: rng.gen_range(0.05..1.0) },
        })
        .collect()
}

/// Same gate list on the sparse engine.
pub fn run_sparse(state: &PureState, gates: &[Gate]) -> Ensemble {
    let mut e = Ensemble::pure(state.clone());
    for g in gates {
        e = match *g {
            Gate::Beamsplitter { mode1, mode2 } => e.map_pure(|s| beamsplitter(s, &label(mode1), &label(mode2))).unwrap(),
            Gate::Phase { mode, phi } => e.map_pure(|s| phase_shift(s, &label(mode), phi)).unwrap(),
            Gate::Swap { mode_x, mode_y } => e.map_pure(|s| state_swap(s, &label(mode_x), &label(mode_y))).unwrap(),
            Gate::Loss { mode, transmittance } => {
                loss_channel(&e, &label(mode), LossSpec::new(transmittance).unwrap()).unwrap()
            }
            Gate::Squeeze { .. } => unreachable!("not generated"),
        };
    }
    e
}

/// Largest deviation between sparse and dense results for one circuit:
/// full output state, then every click pattern on `detectors` (weight and
/// unnormalized reduced state).
pub fn circuit_deviation(state: &PureState, gates: &[Gate], detectors: &[usize]) -> f64 {
    let sparse = run_sparse(state, gates);
    let (space, rho0) = to_dense(state).unwrap();
    let dense = dense_oracle(&space, gates, &rho0).unwrap();
    let (_, sparse_rho) = to_dense(&sparse).unwrap();
    let mut worst = sparse_rho.max_abs_diff(&dense);

    let names: Vec<String> = detectors.iter().map(|&d| label(d)).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    for outcome in threshold_measure(&sparse, &refs).unwrap() {
        let (w, _, reduced) = measure_pattern(&space, &dense, detectors, &outcome.clicks);
        worst = worst.max((w - outcome.weight).abs());
        if outcome.weight > 0.0 {
            let (_, cond) = to_dense(&outcome.conditional).unwrap();
            let unnorm = cond.scale(Complex64::new(outcome.weight, 0.0));
            worst = worst.max(unnorm.max_abs_diff(&reduced));
        } else {
            worst = worst.max(reduced.max_abs_diff(&DenseMatrix::zeros(reduced.dim())));
        }
    }
    worst
}

/// One seeded random circuit: modes, initial state, gates and detectors.
pub fn random_circuit(rng: &mut ChaCha8Rng) -> (PureState, Vec<Gate>, Vec<usize>) {
    let modes = rng.gen_range(2..=5);
    let state = random_state(rng, modes);
    let n_gates = rng.gen_range(3..=8);
    let gates = random_gates(rng, modes, n_gates);
    let n_det = rng.gen_range(1..modes);
    let mut detectors: Vec<usize> = (0..modes).collect();
    for i in (1..modes).rev() {
        detectors.swap(i, rng.gen_range(0..=i));
    }
    detectors.truncate(n_det);
    (state, gates, detectors)
}
