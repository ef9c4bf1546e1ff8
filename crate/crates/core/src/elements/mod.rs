//! Optical and optomechanical circuit primitives.

mod interaction;
mod optics;
mod prepare;

pub use interaction::{
    generate_epr_paper_model, two_mode_squeeze, InteractionModel, InteractionSpec, TmsOutput, TMS_TAIL_WARN,
};
pub use optics::{beamsplitter, loss_channel, loss_on_modes, phase_shift, state_swap, LossSpec};
pub use prepare::{
    prepare_coherent_truncated, prepare_input_qubit, prepare_polarized_photons, prepare_thermal, thermal_ratio,
    thermal_weights, ThermalNorm, COHERENT_VALIDATED_MAX,
};
