//! Post-herald steps: feed-forward phase correction and state-swap readout.

use alloc::vec::Vec;

use crate::detection::{HeraldedResult, OutcomeClass};
use crate::elements::{loss_on_modes, phase_shift, state_swap, LossSpec};
use crate::fock::labels::{MECH_A, MECH_B, READ_A, READ_B};
use crate::fock::{Ensemble, ModeRegistry, PureState};
use crate::{Error, Result};

/// Undoes the `pi` phase of an `MMinus` herald with a phase shift on
/// `mechA`; `MPlus` passes through.
pub fn feed_forward(result: &HeraldedResult) -> Result<HeraldedResult> {
    match result.class {
        OutcomeClass::MPlus => Ok(result.clone()),
        OutcomeClass::MMinus => {
            let conditional = result.conditional.map_pure(|s| phase_shift(s, MECH_A, core::f64::consts::PI))?;
            Ok(HeraldedResult { conditional, ..result.clone() })
        }
        other => Err(Error::ScenarioMismatch(alloc::format!("feed-forward needs a herald, got {}", other.name()))),
    }
}

/// Optical state after swapping the mechanics onto readout pulses.
#[derive(Debug, Clone)]
pub struct Readout {
    /// State of `(readA, readB)`, total weight 1.
    pub optical: Ensemble,
    /// `<target|rho|target>` with the target moved to the readout modes.
    pub fidelity: f64,
    /// Weight with exactly one readout photon.
    pub single_excitation_weight: f64,
    /// Fidelity within the one-photon subspace.
    pub conditional_fidelity: f64,
    /// Weight with no readout photon.
    pub vacuum_weight: f64,
}

/// Red-detuned state swap `mech -> read` followed by loss with
/// transmittance `efficiency` on each readout mode. `target` lives on the
/// mechanical modes of the conditional state.
pub fn readout(result: &HeraldedResult, efficiency: f64, target: &PureState) -> Result<Readout> {
    let spec = LossSpec::new(efficiency)?;
    let mech = result.conditional.registry().clone();
    let (ca, cb) = (mech.cutoff(mech.id(MECH_A)?), mech.cutoff(mech.id(MECH_B)?));
    let read = ModeRegistry::new(&[(READ_A, ca), (READ_B, cb)])?;
    let vacuum = PureState::vacuum(read.clone());
    let swapped = result.conditional.tensor_pure(&vacuum)?.map_pure(|s| {
        let s = state_swap(s, MECH_A, READ_A)?;
        state_swap(&s, MECH_B, READ_B)
    })?;
    let labels: Vec<&str> = mech.labels().iter().map(|l| l.as_str()).collect();
    let optical = loss_on_modes(&swapped.trace_out(&labels)?, &[READ_A, READ_B], spec)?;

    let moved = target.relabel(&[(MECH_A, READ_A), (MECH_B, READ_B)])?;
    let moved = moved.reorder(optical.registry())?;
    let fidelity = optical.fidelity(&moved)?;
    let e = |o: &[u8]| optical.element(o, o).re;
    let single: f64 = optical.support().iter().filter(|o| o.iter().map(|&n| n as usize).sum::<usize>() == 1).map(|o| e(o)).sum();
    Ok(Readout {
        fidelity,
        single_excitation_weight: single,
        conditional_fidelity: if single > 0.0 { fidelity / single } else { 0.0 },
        vacuum_weight: e(&[0, 0]),
        optical,
    })
}
