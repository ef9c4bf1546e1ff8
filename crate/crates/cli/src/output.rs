//! CSV tables and the JSON run manifest.

use serde::{Deserialize, Serialize};
use teleport_core::analysis::CurvePoint;
use teleport_core::detection::OutcomeClass;
use teleport_core::fock::Ensemble;
use teleport_core::protocol::{ClassReport, TeleportReport};

use crate::config::ConfigFile;

/// Number with 12 significant digits, shortest form, `.` separator.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}").to_lowercase();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..12).contains(&exp) {
        trim(&format!("{v:.*}", (11 - exp) as usize))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

pub const RESULTS_HEADER: &str = "scenario,class,weight,fidelity,p_add,corrected_fidelity";
pub const CURVE_HEADER: &str = "nbar,F_order2,F_order1,Padd_order2,Padd_order1,F_sim,threshold_line";

/// One row per outcome class; fidelity columns stay empty for the
/// non-herald classes.
pub fn results_csv(report: &TeleportReport) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    let name = report.scenario.name();
    for c in &report.classes {
        out.push_str(&format!(
            "{name},{},{},{},{},{}\n",
            c.class.name(),
            fmt_num(c.weight),
            fmt_num(c.fidelity),
            fmt_num(c.p_add),
            fmt_num(c.corrected_fidelity)
        ));
    }
    for (class, w) in [
        (OutcomeClass::SamePolDiscard, report.discard_weight),
        (OutcomeClass::NotHerald, report.not_herald_weight),
    ] {
        out.push_str(&format!("{name},{},{},,,\n", class.name(), fmt_num(w)));
    }
    out
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for p in points {
        let row = [
            p.nbar,
            p.f_order2,
            p.f_order1,
            p.p_add_order2,
            p.p_add_order1,
            p.f_sim.unwrap_or(f64::NAN),
            p.threshold_line,
        ];
        out.push_str(&row.map(fmt_num).join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Term {
    pub occupation: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

/// One pure branch of a conditional ensemble.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BranchOut {
    pub weight: f64,
    pub ket: String,
    pub terms: Vec<Term>,
}

pub fn branches(e: &Ensemble) -> Vec<BranchOut> {
    e.branches()
        .iter()
        .map(|b| BranchOut {
            weight: b.weight,
            ket: b.state.to_ket_string(),
            terms: b
                .state
                .terms()
                .map(|(o, a)| Term { occupation: o.clone(), re: a.re, im: a.im })
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassOut {
    pub class: String,
    pub weight: f64,
    pub fidelity: f64,
    pub p_add: f64,
    pub corrected_fidelity: f64,
    pub modes: Vec<String>,
    pub conditional: Vec<BranchOut>,
}

impl From<&ClassReport> for ClassOut {
    fn from(c: &ClassReport) -> Self {
        ClassOut {
            class: c.class.name().into(),
            weight: c.weight,
            fidelity: c.fidelity,
            p_add: c.p_add,
            corrected_fidelity: c.corrected_fidelity,
            modes: c.conditional.registry().labels().to_vec(),
            conditional: branches(&c.conditional),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PatternOut {
    pub pattern: String,
    pub class: String,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ThermalOut {
    pub j: usize,
    pub k: usize,
    pub prior_weight: f64,
    pub herald_weight: f64,
    pub fidelity_to_ideal: f64,
    pub fidelity_to_component: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SectorOut {
    pub blue: usize,
    pub resonant: usize,
    pub prior_weight: f64,
    pub mplus_weight: f64,
    pub mminus_weight: f64,
    pub mplus_contamination: f64,
    pub mplus_single: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WcsOut {
    pub sectors: Vec<SectorOut>,
    pub vacuum: f64,
    pub single: f64,
    pub contamination: f64,
    pub other: f64,
    pub single_fidelity: f64,
    /// Sectors (blue, resonant) = 12, 21, 22, 11 relative to 11.
    pub sector_ratios: [f64; 4],
    pub contamination_ratio: f64,
    pub full_contamination_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TwoPhotonOut {
    pub port_plus: Vec<BranchOut>,
    pub port_minus: Vec<BranchOut>,
    pub physical_plus: Vec<BranchOut>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultsOut {
    pub classes: Vec<ClassOut>,
    pub herald_weight: f64,
    pub discard_weight: f64,
    pub not_herald_weight: f64,
    pub total_weight: f64,
    pub patterns: Vec<PatternOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub thermal: Option<Vec<ThermalOut>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wcs: Option<WcsOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub two_photon: Option<TwoPhotonOut>,
    pub warnings: Vec<String>,
}

impl From<&TeleportReport> for ResultsOut {
    fn from(r: &TeleportReport) -> Self {
        ResultsOut {
            classes: r.classes.iter().map(ClassOut::from).collect(),
            herald_weight: r.herald_weight(),
            discard_weight: r.discard_weight,
            not_herald_weight: r.not_herald_weight,
            total_weight: r.total_weight,
            patterns: r
                .patterns
                .iter()
                .map(|p| PatternOut { pattern: p.pattern.to_string(), class: p.class.name().into(), weight: p.weight })
                .collect(),
            thermal: r.thermal.as_ref().map(|t| {
                t.iter()
                    .map(|c| ThermalOut {
                        j: c.j,
                        k: c.k,
                        prior_weight: c.prior_weight,
                        herald_weight: c.herald_weight,
                        fidelity_to_ideal: c.fidelity_to_ideal,
                        fidelity_to_component: c.fidelity_to_component,
                    })
                    .collect()
            }),
            wcs: r.wcs.as_ref().map(|w| WcsOut {
                sectors: w
                    .sectors
                    .iter()
                    .map(|s| SectorOut {
                        blue: s.blue,
                        resonant: s.resonant,
                        prior_weight: s.prior_weight,
                        mplus_weight: s.mplus_weight,
                        mminus_weight: s.mminus_weight,
                        mplus_contamination: s.mplus_contamination,
                        mplus_single: s.mplus_single,
                    })
                    .collect(),
                vacuum: w.components.vacuum,
                single: w.components.single,
                contamination: w.components.contamination,
                other: w.components.other,
                single_fidelity: w.components.single_fidelity,
                sector_ratios: w.sector_ratios,
                contamination_ratio: w.contamination_ratio,
                full_contamination_ratio: w.full_contamination_ratio,
            }),
            two_photon: r.two_photon.as_ref().map(|t| TwoPhotonOut {
                port_plus: branches(&t.port_plus),
                port_minus: branches(&t.port_minus),
                physical_plus: branches(&t.physical_plus),
            }),
            warnings: r.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct CurveRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurveRow {
    pub nbar: f64,
    pub f_order2: f64,
    pub f_order1: f64,
    pub p_add_order2: f64,
    pub p_add_order1: f64,
    pub f_sim: Option<f64>,
    pub threshold_line: f64,
}

impl From<&CurvePoint> for CurveRow {
    fn from(p: &CurvePoint) -> Self {
        CurveRow {
            nbar: p.nbar,
            f_order2: p.f_order2,
            f_order1: p.f_order1,
            p_add_order2: p.p_add_order2,
            p_add_order1: p.p_add_order1,
            f_sim: p.f_sim,
            threshold_line: p.threshold_line,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub scenario: String,
    pub engine_version: String,
    pub config: ConfigFile,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub results: Option<ResultsOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curve_range: Option<CurveRange>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curve: Option<Vec<CurveRow>>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_num(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(fmt_num(1e-6), "1e-6");
        assert_eq!(fmt_num(1e-5), "0.00001");
        assert_eq!(fmt_num(1.234e-9), "1.234e-9");
        assert_eq!(fmt_num(123456.789), "123456.789");
        assert_eq!(fmt_num(9.9999999999999), "10");
        assert_eq!(fmt_num(f64::NAN), "nan");
        assert_eq!(fmt_num(-0.0), "0");
    }
}
