use alloc::string::String;
use alloc::vec::Vec;

use crate::detection::{HeraldedResult, OutcomeClass};
use crate::fock::{Ensemble, PureState};
use crate::Result;

use super::ProtocolConfig;

/// Which end-to-end run produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Ideal,
    Thermal,
    Wcs,
    NonDetectionLoss,
    DetectionLoss,
    BlueTwoPhoton,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Ideal => "ideal",
            Scenario::Thermal => "thermal",
            Scenario::Wcs => "wcs",
            Scenario::NonDetectionLoss => "nondetection",
            Scenario::DetectionLoss => "detection",
            Scenario::BlueTwoPhoton => "blue_two_photon",
        }
    }
}

/// Summary of one herald class.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub class: OutcomeClass,
    /// Total probability of the class.
    pub weight: f64,
    /// Normalized mechanical state given the class (empty if `weight` is 0).
    pub conditional: Ensemble,
    /// Ideal target: `|psi'>` for `MPlus`, `|psi''>` for `MMinus`.
    pub target: PureState,
    pub fidelity: f64,
    /// `1 - fidelity`.
    pub p_add: f64,
    /// Fidelity to `|psi'>` after the feed-forward phase correction.
    pub corrected_fidelity: f64,
}

/// One initial mechanical product state `|jk>` of the thermal mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalComponent {
    pub j: usize,
    pub k: usize,
    /// Weight of `|jk>` in the truncated thermal mixture.
    pub prior_weight: f64,
    /// `MPlus` probability given `|jk>`.
    pub herald_weight: f64,
    /// Fidelity of the `MPlus` conditional to `|psi'>`.
    pub fidelity_to_ideal: f64,
    /// Fidelity of the `MPlus` conditional to the expected shifted
    /// component `sin|j,k+1> + cos|j+1,k>`.
    pub fidelity_to_component: f64,
}

/// Photon-number sector of the two weak coherent pulses.
#[derive(Debug, Clone, PartialEq)]
pub struct WcsSector {
    pub blue: usize,
    pub resonant: usize,
    /// Probability of the sector in the truncated pulse expansions.
    pub prior_weight: f64,
    pub mplus_weight: f64,
    pub mminus_weight: f64,
    /// `MPlus` weight landing on `|11>_AB`.
    pub mplus_contamination: f64,
    /// `MPlus` weight landing on the single-excitation subspace.
    pub mplus_single: f64,
}

/// Split of the unnormalized `MPlus` mechanical state by excitation content.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WcsComponents {
    /// `|00>_AB`: false heralds from two resonant photons, invisible to
    /// readout.
    pub vacuum: f64,
    /// Span of `|01>, |10>`.
    pub single: f64,
    /// `|11>_AB` from two blue photons.
    pub contamination: f64,
    pub other: f64,
    /// Fidelity to `|psi'>` inside the single-excitation subspace.
    pub single_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WcsDetail {
    pub sectors: Vec<WcsSector>,
    pub components: WcsComponents,
    /// Prior weights of sectors `|12>, |21>, |22>, |11>` (blue, resonant)
    /// relative to `|11>`.
    pub sector_ratios: [f64; 4],
    /// `MPlus` `|11>_AB` weight of sector `|20>` over the `MPlus` weight of
    /// sector `|11>`.
    pub contamination_ratio: f64,
    /// `|11>_AB` over single-excitation weight in the full coherent run.
    pub full_contamination_ratio: f64,
}

/// Conditional mechanical states of the two-blue-photon loss scenario.
#[derive(Debug, Clone)]
pub struct TwoPhotonDetail {
    /// Projection of the BS2 input ports onto `<0110| + <1001|` with click
    /// semantics on the Stokes ports (unnormalized).
    pub port_plus: Ensemble,
    pub port_minus: Ensemble,
    /// `MPlus` class state from the physical BS2 and threshold detectors
    /// (unnormalized).
    pub physical_plus: Ensemble,
}

#[derive(Debug, Clone)]
pub struct TeleportReport {
    pub scenario: Scenario,
    pub config: ProtocolConfig,
    /// All sixteen click patterns.
    pub patterns: Vec<HeraldedResult>,
    /// `MPlus` then `MMinus`.
    pub classes: Vec<ClassReport>,
    pub discard_weight: f64,
    pub not_herald_weight: f64,
    /// Sum over all patterns; the norm of the input.
    pub total_weight: f64,
    pub thermal: Option<Vec<ThermalComponent>>,
    pub wcs: Option<WcsDetail>,
    pub two_photon: Option<TwoPhotonDetail>,
    pub warnings: Vec<String>,
}

impl TeleportReport {
    pub fn class(&self, class: OutcomeClass) -> Option<&ClassReport> {
        self.classes.iter().find(|c| c.class == class)
    }

    pub fn mplus(&self) -> &ClassReport {
        &self.classes[0]
    }

    pub fn mminus(&self) -> &ClassReport {
        &self.classes[1]
    }

    /// Total heralded probability (`MPlus` + `MMinus`).
    pub fn herald_weight(&self) -> f64 {
        self.classes.iter().map(|c| c.weight).fold(0.0, |a, w| a + w)
    }

    /// Largest `|fidelity + p_add - 1|` over classes with nonzero weight.
    pub fn closure_error(&self) -> Result<f64> {
        Ok(self
            .classes
            .iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| crate::math::abs(c.fidelity + c.p_add - 1.0))
            .fold(0.0, f64::max))
    }
}
