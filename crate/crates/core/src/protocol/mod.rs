//! End-to-end teleportation scenarios built from the primitives.

mod config;
mod correction;
mod pipeline;
mod report;
mod scenarios;

pub use config::{ProtocolConfig, DEFAULT_PAIR_AMPLITUDE, DEFAULT_P_DARK};
pub use correction::{feed_forward, readout, Readout};
pub use report::{
    TwoPhotonDetail, ClassReport, Scenario, TeleportReport, ThermalComponent, WcsComponents, WcsDetail, WcsSector,
};
pub use scenarios::{ideal_target, run_ideal, run_thermal, run_wcs, run_with_loss, thermal_fidelity, LossScenario};
