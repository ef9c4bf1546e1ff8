//! Shared source-to-detector chain used by every scenario.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::detection::{apply_dark_counts, bell_measurement, bell_measurement_lossy, classify_pattern, HeraldedResult};
use crate::detection::{ClickPattern, OutcomeClass};
use crate::elements::{
    beamsplitter, generate_epr_paper_model, loss_on_modes, prepare_polarized_photons, two_mode_squeeze,
    InteractionModel, InteractionSpec, LossSpec,
};
use crate::fock::labels::{BLUE_A, BLUE_B, H1, H2, MECH_A, MECH_B, V1, V2};
use crate::fock::{Ensemble, ModeRegistry, PureState};
use crate::{Error, Result};

use super::ProtocolConfig;

/// Photon-number superposition `sum_n c_n |n>` of a pulse.
pub(crate) type Pulse = [(usize, Complex64)];

pub(crate) fn one(n: usize) -> [(usize, Complex64); 1] {
    [(n, Complex64::new(1.0, 0.0))]
}

fn max_photons(p: &Pulse) -> usize {
    p.iter().map(|(n, _)| *n).max().unwrap_or(0)
}

/// Optical cutoff large enough that BS2 never overflows.
fn optical_cutoff(cfg: &ProtocolConfig, blue: &Pulse, resonant: &Pulse) -> usize {
    let stokes = match cfg.model {
        InteractionModel::PaperModel => max_photons(blue),
        InteractionModel::FullTms => InteractionSpec::default().max_order,
    };
    (stokes + max_photons(resonant)).max(1)
}

/// Stokes/mechanics state on `(mechA, mechB, H2, V2)` for initial
/// mechanical occupation `mech` and blue pulse `blue` (ignored by the full
/// squeezer, whose pump is classical).
pub(crate) fn source_state(
    cfg: &ProtocolConfig,
    mech: (usize, usize),
    blue: &Pulse,
    optical: usize,
    warnings: &mut Vec<String>,
) -> Result<PureState> {
    let four = ModeRegistry::new(&[(MECH_A, cfg.n_max), (MECH_B, cfg.n_max), (H2, optical), (V2, optical)])?;
    for (label, n) in [(MECH_A, mech.0), (MECH_B, mech.1)] {
        if n > cfg.n_max {
            return Err(Error::CutoffViolation { mode: label.into(), occupation: n, cutoff: cfg.n_max });
        }
    }
    match cfg.model {
        InteractionModel::PaperModel => {
            let blue_cut = max_photons(blue).max(1);
            let blue_reg = ModeRegistry::new(&[(BLUE_A, blue_cut), (BLUE_B, blue_cut)])?;
            let six = four.concat(&blue_reg)?;
            let terms = blue
                .iter()
                .map(|(n, c)| (alloc::vec![mech.0 as u8, mech.1 as u8, 0, 0, *n as u8, 0], *c));
            let s = PureState::from_terms(six, terms)?;
            let s = beamsplitter(&s, BLUE_A, BLUE_B)?;
            let s = generate_epr_paper_model(&s, BLUE_A, BLUE_B, MECH_A, MECH_B, H2, V2)?;
            // blue modes are left in vacuum: drop them without changing amplitudes
            let terms: Vec<_> = s.terms().map(|(o, a)| (o[..4].to_vec(), *a)).collect();
            PureState::from_terms(four, terms)
        }
        InteractionModel::FullTms => {
            let spec = InteractionSpec::full_tms_from_pair_amplitude(cfg.pair_amplitude, InteractionSpec::default().max_order)?;
            let s = PureState::basis(four, &[mech.0, mech.1, 0, 0])?;
            let a = two_mode_squeeze(&s, H2, MECH_A, &spec)?;
            let b = two_mode_squeeze(&a.state, V2, MECH_B, &spec)?;
            if a.truncation_warning || b.truncation_warning {
                warnings.push(alloc::format!(
                    "two-mode squeezer truncation dropped {:.3e} of the weight",
                    a.norm_deviation.max(b.norm_deviation)
                ));
            }
            Ok(b.state)
        }
    }
}

/// Resonant pulse on `(H1, V1)` carrying the polarization qubit.
pub(crate) fn resonant_state(cfg: &ProtocolConfig, resonant: &Pulse, optical: usize) -> Result<PureState> {
    let parts: Vec<(Complex64, PureState)> = resonant
        .iter()
        .map(|(n, c)| Ok((*c, prepare_polarized_photons(*n, cfg.theta, cfg.phi, H1, V1, optical)?)))
        .collect::<Result<_>>()?;
    let refs: Vec<(Complex64, &PureState)> = parts.iter().map(|(c, s)| (*c, s)).collect();
    PureState::superpose(&refs)
}

/// Joint state at the BS2 input ports, `(mechA, mechB, H2, V2, H1, V1)`,
/// after nondetection loss `t_nd` on the Stokes modes.
pub(crate) fn joint_state(
    cfg: &ProtocolConfig,
    mech: (usize, usize),
    blue: &Pulse,
    resonant: &Pulse,
    t_nd: f64,
    warnings: &mut Vec<String>,
) -> Result<Ensemble> {
    let optical = optical_cutoff(cfg, blue, resonant);
    let source = source_state(cfg, mech, blue, optical, warnings)?;
    let lossy = loss_on_modes(&source, &[H2, V2], LossSpec::new(t_nd)?)?;
    lossy.tensor_pure(&resonant_state(cfg, resonant, optical)?)
}

/// Bell analyzer with detection transmittance `t_det`, no dark counts.
pub(crate) fn detect(joint: &Ensemble, t_det: f64) -> Result<Vec<HeraldedResult>> {
    if t_det >= 1.0 {
        bell_measurement(joint)
    } else {
        bell_measurement_lossy(joint, LossSpec::new(t_det)?)
    }
}

pub(crate) fn with_dark_counts(results: Vec<HeraldedResult>, p_dark: f64) -> Result<Vec<HeraldedResult>> {
    if p_dark > 0.0 {
        apply_dark_counts(&results, p_dark)
    } else {
        Ok(results)
    }
}

/// Pattern-wise weighted sum of several result lists.
pub(crate) fn merge_results(parts: &[(f64, Vec<HeraldedResult>)]) -> Result<Vec<HeraldedResult>> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::InvalidParameter("nothing to merge".into()));
    };
    let reg = first[0].conditional.registry().clone();
    let mut acc: Vec<Ensemble> = (0..16).map(|_| Ensemble::empty(reg.clone())).collect();
    for (w, results) in parts {
        for r in results {
            for b in r.conditional.branches() {
                acc[r.pattern.bits() as usize].push_unnormalized(w * r.weight * b.weight, b.state.clone());
            }
        }
    }
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(bits, e)| {
            let pattern = ClickPattern::from_bits(bits as u8);
            HeraldedResult { pattern, class: classify_pattern(pattern), weight: e.total_weight(), conditional: e.normalized() }
        })
        .collect())
}

pub(crate) fn class_total(results: &[HeraldedResult], class: OutcomeClass) -> f64 {
    crate::detection::class_weight(results, class)
}
