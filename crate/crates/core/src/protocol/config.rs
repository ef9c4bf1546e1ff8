use num_complex::Complex64;

use crate::elements::{InteractionModel, ThermalNorm, COHERENT_VALIDATED_MAX};
use crate::fock::DEFAULT_CUTOFF;
use crate::{Error, Result};

/// Per-detector false-click probability used when none is given. A
/// plumbing value, not a measured rate.
pub const DEFAULT_P_DARK: f64 = 1e-6;

/// Default single-pair amplitude `tanh r` for the full two-mode squeezer.
pub const DEFAULT_PAIR_AMPLITUDE: f64 = 0.1;

/// Every knob of a teleportation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    /// Input polarization angle.
    pub theta: f64,
    /// Input relative phase.
    pub phi: f64,
    /// Mean thermal occupation of each mechanical mode.
    pub nbar: f64,
    /// Blue-detuned pulse amplitude.
    pub alpha: Complex64,
    /// Resonant pulse amplitude.
    pub beta: Complex64,
    /// Nondetection transmittance on the Stokes modes.
    pub t_nd: f64,
    /// Detection transmittance ahead of each detector.
    pub t_det: f64,
    pub p_dark: f64,
    /// Occupation cutoff of the mechanical modes.
    pub n_max: usize,
    pub model: InteractionModel,
    /// `tanh r` of the full two-mode squeezer; unused by `PaperModel`.
    pub pair_amplitude: f64,
    /// Highest thermal occupation kept (1 or 2).
    pub thermal_order: usize,
    pub thermal_norm: ThermalNorm,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            theta: core::f64::consts::FRAC_PI_4,
            phi: 0.0,
            nbar: 0.0,
            alpha: Complex64::new(0.05, 0.0),
            beta: Complex64::new(0.2, 0.0),
            t_nd: 1.0,
            t_det: 1.0,
            p_dark: DEFAULT_P_DARK,
            n_max: DEFAULT_CUTOFF,
            model: InteractionModel::PaperModel,
            pair_amplitude: DEFAULT_PAIR_AMPLITUDE,
            thermal_order: 2,
            thermal_norm: ThermalNorm::PaperTruncated,
        }
    }
}

fn invalid<T>(msg: alloc::string::String) -> Result<T> {
    Err(Error::InvalidParameter(msg))
}

impl ProtocolConfig {
    /// Range checks shared by every scenario.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("theta", self.theta), ("phi", self.phi)] {
            if !v.is_finite() {
                return invalid(alloc::format!("{name} must be finite"));
            }
        }
        if !(self.nbar >= 0.0) || !self.nbar.is_finite() {
            return invalid(alloc::format!("nbar {} must be >= 0", self.nbar));
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return invalid(alloc::format!("{name} must be finite"));
            }
        }
        for (name, t) in [("T_nd", self.t_nd), ("T_det", self.t_det)] {
            if !(t > 0.0 && t <= 1.0) {
                return invalid(alloc::format!("{name} = {t} outside (0, 1]"));
            }
        }
        if !(0.0..1.0).contains(&self.p_dark) {
            return invalid(alloc::format!("p_dark = {} outside [0, 1)", self.p_dark));
        }
        if self.n_max == 0 || self.n_max > 16 {
            return invalid(alloc::format!("n_max = {} outside 1..=16", self.n_max));
        }
        if !(1..=2).contains(&self.thermal_order) {
            return invalid(alloc::format!("thermal_order = {} must be 1 or 2", self.thermal_order));
        }
        if !(0.0..1.0).contains(&self.pair_amplitude) {
            return invalid(alloc::format!("pair_amplitude = {} outside [0, 1)", self.pair_amplitude));
        }
        Ok(())
    }

    /// Checks the pulse amplitudes against the validated coherent range.
    pub fn validate_pulses(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if v.norm_sqr() > COHERENT_VALIDATED_MAX * COHERENT_VALIDATED_MAX {
                return invalid(alloc::format!(
                    "|{name}| = {} exceeds the validated range {COHERENT_VALIDATED_MAX}",
                    crate::math::sqrt(v.norm_sqr())
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::prelude::v1::*;

    #[test]
    fn default_is_valid() {
        ProtocolConfig::default().validate().unwrap();
        ProtocolConfig::default().validate_pulses().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = [
            ProtocolConfig { t_nd: 0.0, ..Default::default() },
            ProtocolConfig { t_det: 1.5, ..Default::default() },
            ProtocolConfig { p_dark: 1.0, ..Default::default() },
            ProtocolConfig { nbar: -0.1, ..Default::default() },
            ProtocolConfig { thermal_order: 3, ..Default::default() },
            ProtocolConfig { n_max: 0, ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
        let loud = ProtocolConfig { alpha: Complex64::new(0.5, 0.0), ..Default::default() };
        assert!(loud.validate_pulses().is_err());
    }
}
