use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::analysis::thermal_component;
use crate::detection::{class_state, port_bell_projection, BellSign, HeraldedResult, OutcomeClass};
use crate::elements::{thermal_weights, InteractionModel};
use crate::fock::{Ensemble, ModeRegistry, PureState};
use crate::{Error, Result};

use super::correction::feed_forward;
use super::pipeline::{class_total, detect, joint_state, merge_results, one, with_dark_counts, Pulse};
use super::{
    TwoPhotonDetail, ClassReport, ProtocolConfig, Scenario, TeleportReport, ThermalComponent, WcsComponents, WcsDetail,
    WcsSector,
};

/// Which imperfection `run_with_loss` switches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossScenario {
    /// `T_nd` on both Stokes modes ahead of BS2; single-photon sources.
    NonDetection,
    /// `T_det` ahead of each of the four detectors; single-photon sources.
    Detection,
    /// Blue pulse in `|2>`, resonant in `|1>`, `T_nd` on the Stokes modes.
    BlueTwoPhoton,
}

impl LossScenario {
    pub fn scenario(&self) -> Scenario {
        match self {
            LossScenario::NonDetection => Scenario::NonDetectionLoss,
            LossScenario::Detection => Scenario::DetectionLoss,
            LossScenario::BlueTwoPhoton => Scenario::BlueTwoPhoton,
        }
    }
}

fn mismatch<T>(msg: &str) -> Result<T> {
    Err(Error::ScenarioMismatch(msg.into()))
}

/// `e^{i phi} sin|01> +/- cos|10>` on the conditional registry.
pub fn ideal_target(registry: &Arc<ModeRegistry>, theta: f64, phi: f64, plus: bool) -> Result<PureState> {
    thermal_component(registry, theta, phi, 0, 0, plus)
}

fn mech_registry(results: &[HeraldedResult]) -> Arc<ModeRegistry> {
    results[0].conditional.registry().clone()
}

fn fidelity_or_zero(state: &Ensemble, target: &PureState) -> Result<f64> {
    if state.is_empty() {
        return Ok(0.0);
    }
    state.fidelity(target)
}

fn class_report(cfg: &ProtocolConfig, results: &[HeraldedResult], class: OutcomeClass) -> Result<ClassReport> {
    let reg = mech_registry(results);
    let plus = class == OutcomeClass::MPlus;
    let target = ideal_target(&reg, cfg.theta, cfg.phi, plus)?;
    let state = class_state(results, class)?;
    let weight = state.total_weight();
    let conditional = state.normalized();
    let fidelity = fidelity_or_zero(&conditional, &target)?;

    let psi_plus = ideal_target(&reg, cfg.theta, cfg.phi, true)?;
    let mut corrected = Ensemble::empty(reg.clone());
    for r in results.iter().filter(|r| r.class == class) {
        let fixed = feed_forward(r)?;
        for b in fixed.conditional.branches() {
            corrected.push_unnormalized(fixed.weight * b.weight, b.state.clone());
        }
    }
    let corrected_fidelity = fidelity_or_zero(&corrected.normalized(), &psi_plus)?;

    Ok(ClassReport { class, weight, conditional, target, fidelity, p_add: 1.0 - fidelity, corrected_fidelity })
}

fn assemble(
    scenario: Scenario,
    cfg: &ProtocolConfig,
    patterns: Vec<HeraldedResult>,
    warnings: Vec<String>,
) -> Result<TeleportReport> {
    let classes =
        alloc::vec![class_report(cfg, &patterns, OutcomeClass::MPlus)?, class_report(cfg, &patterns, OutcomeClass::MMinus)?];
    Ok(TeleportReport {
        scenario,
        config: *cfg,
        discard_weight: class_total(&patterns, OutcomeClass::SamePolDiscard),
        not_herald_weight: class_total(&patterns, OutcomeClass::NotHerald),
        total_weight: patterns.iter().map(|r| r.weight).fold(0.0, |a, w| a + w),
        patterns,
        classes,
        thermal: None,
        wcs: None,
        two_photon: None,
        warnings,
    })
}

fn require_single_photon_sources(cfg: &ProtocolConfig, what: &str) -> Result<()> {
    if cfg.nbar != 0.0 {
        return mismatch(&alloc::format!("{what} assumes ground-state mechanics (nbar = 0)"));
    }
    if cfg.model != InteractionModel::PaperModel {
        return mismatch(&alloc::format!("{what} needs the PaperModel interaction"));
    }
    Ok(())
}

/// Single-photon sources, ground-state mechanics, no loss. Detectors are
/// ideal here: `p_dark` is not applied.
pub fn run_ideal(cfg: &ProtocolConfig) -> Result<TeleportReport> {
    cfg.validate()?;
    require_single_photon_sources(cfg, "the ideal run")?;
    if cfg.t_nd != 1.0 || cfg.t_det != 1.0 {
        return mismatch("the ideal run needs T_nd = T_det = 1");
    }
    let mut warnings = Vec::new();
    let joint = joint_state(cfg, (0, 0), &one(1), &one(1), 1.0, &mut warnings)?;
    assemble(Scenario::Ideal, cfg, detect(&joint, 1.0)?, warnings)
}

/// Thermal mechanics enumerated exactly over `|jk>`, `j, k <= thermal_order`.
pub fn run_thermal(cfg: &ProtocolConfig) -> Result<TeleportReport> {
    cfg.validate()?;
    let weights = thermal_weights(cfg.nbar, cfg.thermal_order, cfg.thermal_norm)?;
    let mut warnings = Vec::new();
    let mut parts = Vec::new();
    let mut components = Vec::new();
    for (j, wj) in weights.iter().enumerate() {
        for (k, wk) in weights.iter().enumerate() {
            let joint = joint_state(cfg, (j, k), &one(1), &one(1), cfg.t_nd, &mut warnings)?;
            let results = detect(&joint, cfg.t_det)?;
            let reg = mech_registry(&results);
            let plus = class_state(&results, OutcomeClass::MPlus)?;
            let normalized = plus.normalized();
            let expected = thermal_component(&reg, cfg.theta, cfg.phi, j, k, true);
            let fidelity_to_component = match expected {
                Ok(e) => fidelity_or_zero(&normalized, &e)?,
                // component lies outside the cutoff; the run itself would already have failed
                Err(_) => 0.0,
            };
            components.push(ThermalComponent {
                j,
                k,
                prior_weight: wj * wk,
                herald_weight: plus.total_weight(),
                fidelity_to_ideal: fidelity_or_zero(&normalized, &ideal_target(&reg, cfg.theta, cfg.phi, true)?)?,
                fidelity_to_component,
            });
            parts.push((wj * wk, results));
        }
    }
    let merged = with_dark_counts(merge_results(&parts)?, cfg.p_dark)?;
    let mut report = assemble(Scenario::Thermal, cfg, merged, warnings)?;
    report.thermal = Some(components);
    Ok(report)
}

/// Truncated coherent expansion `c_n` of a pulse, `n <= 2`, rescaled to
/// unit norm.
fn coherent_coeffs(amp: Complex64) -> [(usize, Complex64); 3] {
    let c2 = amp * amp * core::f64::consts::FRAC_1_SQRT_2;
    let norm = crate::math::sqrt(1.0 + amp.norm_sqr() + c2.norm_sqr());
    [(0, Complex64::new(1.0 / norm, 0.0)), (1, amp / norm), (2, c2 / norm)]
}

fn split_components(state: &Ensemble, psi: &PureState) -> WcsComponents {
    let e = |o: &[u8]| state.element(o, o).re;
    let vacuum = e(&[0, 0]);
    let single = e(&[0, 1]) + e(&[1, 0]);
    let contamination = e(&[1, 1]);
    let total = state.total_weight();
    let overlap: f64 = state
        .branches()
        .iter()
        .map(|b| b.weight * b.state.inner(psi).map(|c| c.norm_sqr()).unwrap_or(0.0))
        .sum();
    WcsComponents {
        vacuum,
        single,
        contamination,
        other: total - vacuum - single - contamination,
        single_fidelity: if single > 0.0 { overlap / single } else { 0.0 },
    }
}

/// Weak coherent blue and resonant pulses, two-photon truncation, ground
/// state mechanics. Pulse sectors are also run one by one.
pub fn run_wcs(cfg: &ProtocolConfig) -> Result<TeleportReport> {
    cfg.validate()?;
    cfg.validate_pulses()?;
    if cfg.nbar != 0.0 {
        return mismatch("the weak-coherent-state run assumes nbar = 0");
    }
    if cfg.model != InteractionModel::PaperModel {
        return mismatch("the weak-coherent-state run needs the PaperModel interaction");
    }
    let mut warnings = Vec::new();
    let blue = coherent_coeffs(cfg.alpha);
    let resonant = coherent_coeffs(cfg.beta);

    let joint = joint_state(cfg, (0, 0), &blue, &resonant, cfg.t_nd, &mut warnings)?;
    let full = detect(&joint, cfg.t_det)?;
    let reg = mech_registry(&full);
    let psi = ideal_target(&reg, cfg.theta, cfg.phi, true)?;
    let components = split_components(&class_state(&full, OutcomeClass::MPlus)?, &psi);

    let mut sectors = Vec::new();
    for &(nb, cb) in &blue {
        for &(nr, cr) in &resonant {
            let b: &Pulse = &[(nb, cb)];
            let r: &Pulse = &[(nr, cr)];
            let joint = joint_state(cfg, (0, 0), b, r, cfg.t_nd, &mut warnings)?;
            let results = detect(&joint, cfg.t_det)?;
            let plus = class_state(&results, OutcomeClass::MPlus)?;
            let split = split_components(&plus, &psi);
            sectors.push(WcsSector {
                blue: nb,
                resonant: nr,
                prior_weight: cb.norm_sqr() * cr.norm_sqr(),
                mplus_weight: plus.total_weight(),
                mminus_weight: class_total(&results, OutcomeClass::MMinus),
                mplus_contamination: split.contamination,
                mplus_single: split.single,
            });
        }
    }
    let sector = |b: usize, r: usize| sectors.iter().find(|s| s.blue == b && s.resonant == r).cloned();
    let s11 = sector(1, 1).map(|s| (s.prior_weight, s.mplus_single)).unwrap_or((0.0, 0.0));
    let ratio = |b: usize, r: usize| match sector(b, r) {
        Some(s) if s11.0 > 0.0 => s.prior_weight / s11.0,
        _ => 0.0,
    };
    let sector_ratios = [ratio(1, 2), ratio(2, 1), ratio(2, 2), ratio(1, 1)];
    let contamination_ratio = match sector(2, 0) {
        Some(s) if s11.1 > 0.0 => s.mplus_contamination / s11.1,
        _ => 0.0,
    };
    let full_contamination_ratio =
        if components.single > 0.0 { components.contamination / components.single } else { 0.0 };
    if components.vacuum > 0.0 {
        warnings.push("MPlus conditional holds a |00>_AB false-herald part, invisible to readout".into());
    }

    let mut report = assemble(Scenario::Wcs, cfg, with_dark_counts(full, cfg.p_dark)?, warnings)?;
    report.wcs =
        Some(WcsDetail { sectors, components, sector_ratios, contamination_ratio, full_contamination_ratio });
    Ok(report)
}

/// Lossy variants with single- or two-photon sources.
pub fn run_with_loss(cfg: &ProtocolConfig, scenario: LossScenario) -> Result<TeleportReport> {
    cfg.validate()?;
    require_single_photon_sources(cfg, "the loss scenarios")?;
    let mut warnings = Vec::new();
    let (blue, t_nd, t_det) = match scenario {
        LossScenario::NonDetection => (1, cfg.t_nd, 1.0),
        LossScenario::Detection => (1, 1.0, cfg.t_det),
        LossScenario::BlueTwoPhoton => (2, cfg.t_nd, 1.0),
    };
    let joint = joint_state(cfg, (0, 0), &one(blue), &one(1), t_nd, &mut warnings)?;
    let results = detect(&joint, t_det)?;
    let two_photon = if scenario == LossScenario::BlueTwoPhoton {
        Some(TwoPhotonDetail {
            port_plus: port_bell_projection(&joint, BellSign::Plus)?,
            port_minus: port_bell_projection(&joint, BellSign::Minus)?,
            physical_plus: class_state(&results, OutcomeClass::MPlus)?,
        })
    } else {
        None
    };
    let mut report = assemble(scenario.scenario(), cfg, with_dark_counts(results, cfg.p_dark)?, warnings)?;
    report.two_photon = two_photon;
    Ok(report)
}

/// Thermal run's fidelity for a single `nbar`, dark counts off.
pub fn thermal_fidelity(cfg: &ProtocolConfig, nbar: f64) -> Result<f64> {
    let cfg = ProtocolConfig { nbar, p_dark: 0.0, ..*cfg };
    Ok(run_thermal(&cfg)?.mplus().fidelity)
}
