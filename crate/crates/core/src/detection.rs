//! Bell-state analyzer: BS2 mixing per polarization, threshold detectors,
//! click-pattern classification, dark counts and conditional states.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::elements::{beamsplitter, loss_on_modes, LossSpec};
use crate::fock::labels::{C_H, C_V, D_H, D_V, H1, H2, V1, V2};
use crate::fock::{AsEnsemble, Ensemble, Occupation, PureState};
use crate::{math, Error, Result};

/// Detector order used by [`ClickPattern`] bits and by [`DETECTORS`].
pub const DETECTORS: [&str; 4] = [C_H, C_V, D_H, D_V];

/// Which of the four analyzer detectors fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClickPattern {
    pub c_h: bool,
    pub c_v: bool,
    pub d_h: bool,
    pub d_v: bool,
}

impl ClickPattern {
    /// Bit `i` set means detector `DETECTORS[i]` clicked.
    pub fn from_bits(bits: u8) -> Self {
        Self { c_h: bits & 1 != 0, c_v: bits & 2 != 0, d_h: bits & 4 != 0, d_v: bits & 8 != 0 }
    }

    pub fn bits(&self) -> u8 {
        self.c_h as u8 | (self.c_v as u8) << 1 | (self.d_h as u8) << 2 | (self.d_v as u8) << 3
    }

    /// All sixteen patterns in bit order.
    pub fn all() -> impl Iterator<Item = ClickPattern> {
        (0u8..16).map(Self::from_bits)
    }

    pub fn clicks(&self) -> usize {
        self.bits().count_ones() as usize
    }

    pub fn as_array(&self) -> [bool; 4] {
        [self.c_h, self.c_v, self.d_h, self.d_v]
    }

    pub fn from_array(a: [bool; 4]) -> Self {
        Self { c_h: a[0], c_v: a[1], d_h: a[2], d_v: a[3] }
    }
}

impl fmt::Display for ClickPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fired: Vec<&str> = DETECTORS.iter().zip(self.as_array()).filter(|(_, c)| *c).map(|(d, _)| *d).collect();
        if fired.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&fired.join("+"))
        }
    }
}

/// Bell-analyzer verdict for a click pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeClass {
    /// Orthogonal polarizations on the same side of BS2.
    MPlus,
    /// Orthogonal polarizations on opposite sides of BS2.
    MMinus,
    /// Two clicks of the same polarization; identified and discarded.
    SamePolDiscard,
    /// Zero, one, three or four clicks.
    NotHerald,
}

impl OutcomeClass {
    pub const ALL: [OutcomeClass; 4] =
        [OutcomeClass::MPlus, OutcomeClass::MMinus, OutcomeClass::SamePolDiscard, OutcomeClass::NotHerald];

    pub fn is_herald(&self) -> bool {
        matches!(self, OutcomeClass::MPlus | OutcomeClass::MMinus)
    }

    pub fn name(&self) -> &'static str {
        match self {
            OutcomeClass::MPlus => "MPlus",
            OutcomeClass::MMinus => "MMinus",
            OutcomeClass::SamePolDiscard => "SamePolDiscard",
            OutcomeClass::NotHerald => "NotHerald",
        }
    }
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_pattern(p: ClickPattern) -> OutcomeClass {
    if p.clicks() != 2 {
        return OutcomeClass::NotHerald;
    }
    if (p.c_h && p.c_v) || (p.d_h && p.d_v) {
        OutcomeClass::MPlus
    } else if (p.c_v && p.d_h) || (p.c_h && p.d_v) {
        OutcomeClass::MMinus
    } else {
        OutcomeClass::SamePolDiscard
    }
}

/// Outcome of threshold detection on an arbitrary list of detector modes.
#[derive(Debug, Clone)]
pub struct ThresholdOutcome {
    pub clicks: Vec<bool>,
    pub weight: f64,
    /// Normalized state of the undetected modes (empty when `weight` is 0).
    pub conditional: Ensemble,
}

/// Click/no-click measurement on `detectors`.
///
/// The projectors `|0><0|` and `I - |0><0|` are diagonal in the Fock basis,
/// so every term of every branch falls into exactly one pattern. Returns all
/// `2^k` patterns in bit order (bit `i` = detector `i`).
pub fn threshold_measure<S: AsEnsemble>(state: &S, detectors: &[&str]) -> Result<Vec<ThresholdOutcome>> {
    let ensemble = state.to_ensemble();
    let reg = ensemble.registry().clone();
    let idx: Vec<usize> = detectors.iter().map(|d| reg.id(d).map(|m| m.0)).collect::<Result<_>>()?;
    if detectors.len() > 16 {
        return Err(Error::InvalidParameter("at most 16 detectors".into()));
    }
    let (kept_reg, _) = reg.without(detectors)?;
    let n_patterns = 1usize << detectors.len();
    let mut acc: Vec<Ensemble> = (0..n_patterns).map(|_| Ensemble::empty(kept_reg.clone())).collect();

    for branch in ensemble.branches() {
        let mut split: BTreeMap<usize, BTreeMap<Occupation, Complex64>> = BTreeMap::new();
        for (occ, amp) in branch.state.terms() {
            let bits = idx.iter().enumerate().fold(0usize, |b, (k, &i)| b | ((occ[i] > 0) as usize) << k);
            split.entry(bits).or_default().insert(occ.clone(), *amp);
        }
        for (bits, terms) in split {
            let projected = PureState::from_terms(reg.clone(), terms)?;
            for sub in projected.trace_out(detectors)?.branches() {
                acc[bits].push_unnormalized(branch.weight * sub.weight, sub.state.clone());
            }
        }
    }

    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(bits, e)| ThresholdOutcome {
            clicks: (0..detectors.len()).map(|k| bits >> k & 1 == 1).collect(),
            weight: e.total_weight(),
            conditional: e.normalized(),
        })
        .collect())
}

/// One analyzer click pattern with its class, probability and the
/// normalized conditional state of the remaining modes.
#[derive(Debug, Clone)]
pub struct HeraldedResult {
    pub pattern: ClickPattern,
    pub class: OutcomeClass,
    pub weight: f64,
    pub conditional: Ensemble,
}

impl HeraldedResult {
    /// Conditional state times herald probability.
    pub fn unnormalized(&self) -> Ensemble {
        self.conditional.scaled(self.weight)
    }
}

/// Mixes the Stokes port `(H2, V2)` with the input port `(H1, V1)` on BS2,
/// one beamsplitter per polarization, and renames the outputs to the four
/// detector modes. Port 1 outputs land on `cH`/`cV`, port 2 on `dH`/`dV`.
pub fn route_to_detectors<S: AsEnsemble>(joint: &S) -> Result<Ensemble> {
    let joint = joint.to_ensemble();
    for m in [H2, V2, H1, V1] {
        joint.registry().id(m)?;
    }
    let mixed = joint.map_pure(|s| {
        let s = beamsplitter(s, H1, H2)?;
        beamsplitter(&s, V1, V2)
    })?;
    mixed.relabel(&[(H1, C_H), (H2, D_H), (V1, C_V), (V2, D_V)])
}

/// Threshold detection on the four analyzer modes plus classification.
pub fn herald<S: AsEnsemble>(detected: &S) -> Result<Vec<HeraldedResult>> {
    let outcomes = threshold_measure(detected, &DETECTORS)?;
    Ok(outcomes
        .into_iter()
        .map(|o| {
            let pattern = ClickPattern::from_array([o.clicks[0], o.clicks[1], o.clicks[2], o.clicks[3]]);
            HeraldedResult { pattern, class: classify_pattern(pattern), weight: o.weight, conditional: o.conditional }
        })
        .collect())
}

/// Full Bell-state measurement with ideal detectors.
pub fn bell_measurement<S: AsEnsemble>(joint: &S) -> Result<Vec<HeraldedResult>> {
    herald(&route_to_detectors(joint)?)
}

/// Bell-state measurement with detection inefficiency modeled as a loss
/// channel on each detector mode ahead of unit-efficiency detectors.
pub fn bell_measurement_lossy<S: AsEnsemble>(joint: &S, detection: LossSpec) -> Result<Vec<HeraldedResult>> {
    let routed = route_to_detectors(joint)?;
    herald(&loss_on_modes(&routed, &DETECTORS, detection)?)
}

/// Independent per-detector false clicks with probability `p_dark`.
///
/// A detector that already fired stays fired; a silent one fires with
/// probability `p_dark`. Conditional states are carried along unchanged and
/// mixed into whichever pattern the flips produce.
pub fn apply_dark_counts(results: &[HeraldedResult], p_dark: f64) -> Result<Vec<HeraldedResult>> {
    if !(0.0..1.0).contains(&p_dark) {
        return Err(Error::InvalidParameter(alloc::format!("dark-count probability {p_dark} outside [0, 1)")));
    }
    let Some(first) = results.first() else {
        return Ok(Vec::new());
    };
    let reg = first.conditional.registry().clone();
    let mut acc: Vec<Ensemble> = (0..16).map(|_| Ensemble::empty(reg.clone())).collect();
    for r in results {
        let src = r.pattern.bits();
        for dst in 0u8..16 {
            if dst & src != src {
                continue;
            }
            let mut p = 1.0;
            for k in 0..4 {
                if src >> k & 1 == 0 {
                    p *= if dst >> k & 1 == 1 { p_dark } else { 1.0 - p_dark };
                }
            }
            if p > 0.0 {
                for b in r.conditional.branches() {
                    acc[dst as usize].push_unnormalized(r.weight * p * b.weight, b.state.clone());
                }
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

/// Total probability of a class.
pub fn class_weight(results: &[HeraldedResult], class: OutcomeClass) -> f64 {
    results.iter().filter(|r| r.class == class).map(|r| r.weight).fold(0.0, |a, w| a + w)
}

/// Unnormalized conditional state summed over all patterns of a class.
pub fn class_state(results: &[HeraldedResult], class: OutcomeClass) -> Result<Ensemble> {
    let Some(first) = results.first() else {
        return Err(Error::InvalidParameter("no heralded results".into()));
    };
    let mut out = Ensemble::empty(first.conditional.registry().clone());
    for r in results.iter().filter(|r| r.class == class) {
        for b in r.conditional.branches() {
            out.push_unnormalized(r.weight * b.weight, b.state.clone());
        }
    }
    Ok(out)
}

/// Sign of the idealized port projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellSign {
    Plus,
    Minus,
}

/// Idealized Bell projection taken directly on the BS2 input ports.
///
/// Applies the bra `<0110| +/- <1001|` on `(H2, V2, H1, V1)` and keeps the
/// rest of the system, without mixing on BS2. The Stokes ports are read as
/// threshold events: any nonzero occupation of `V2` (resp. `H2`) matches
/// the `1` of the first (resp. second) bra, so multi-photon Stokes terms
/// collapse coherently onto the same outcome. The input ports must hold
/// exactly the listed occupations. Returns the unnormalized state of the
/// remaining modes.
pub fn port_bell_projection<S: AsEnsemble>(joint: &S, sign: BellSign) -> Result<Ensemble> {
    let joint = joint.to_ensemble();
    let reg = joint.registry().clone();
    let (h2, v2, h1, v1) = (reg.id(H2)?.0, reg.id(V2)?.0, reg.id(H1)?.0, reg.id(V1)?.0);
    let (kept_reg, mask) = reg.without(&[H2, V2, H1, V1])?;
    let minus = match sign {
        BellSign::Plus => 1.0,
        BellSign::Minus => -1.0,
    };
    let mut out = Ensemble::empty(kept_reg.clone());
    for b in joint.branches() {
        let mut kept: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for (occ, amp) in b.state.terms() {
            let c = match (occ[h2], occ[v2], occ[h1], occ[v1]) {
                (0, n, 1, 0) if n > 0 => 1.0,
                (n, 0, 0, 1) if n > 0 => minus,
                _ => continue,
            };
            let key: Occupation = occ.iter().zip(&mask).filter(|(_, gone)| !**gone).map(|(n, _)| *n).collect();
            *kept.entry(key).or_insert(Complex64::new(0.0, 0.0)) += amp * c;
        }
        let s = PureState::from_terms(kept_reg.clone(), kept)?;
        out.push_unnormalized(b.weight, s);
    }
    Ok(out)
}

/// Probability `2 p^2 (1-p)^2` that dark counts alone fake an `MPlus` herald
/// on vacuum.
pub fn vacuum_false_herald_probability(p_dark: f64) -> f64 {
    2.0 * math::powi(p_dark, 2) * math::powi(1.0 - p_dark, 2)
}
