//! JSON run configuration, flag overrides and the fully resolved echo.

use std::path::Path;

use serde::{Deserialize, Serialize};
use teleport_core::elements::{InteractionModel, ThermalNorm};
use teleport_core::protocol::ProtocolConfig;
use teleport_core::Complex64;

use crate::error::CliError;

/// Pulse amplitude written either as a real number or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Amplitude::Real(x) => Complex64::new(x, 0.0),
            Amplitude::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn from_complex(c: Complex64) -> Self {
        if c.im == 0.0 {
            Amplitude::Real(c.re)
        } else {
            Amplitude::Complex([c.re, c.im])
        }
    }
}

impl std::str::FromStr for Amplitude {
    type Err = String;

    /// `0.05` or `0.05,0.01`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad amplitude {s:?}: {e}"));
        match s.split_once(',') {
            None => Ok(Amplitude::Real(parse(s)?)),
            Some((re, im)) => Ok(Amplitude::Complex([parse(re)?, parse(im)?])),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Paper,
    FullTms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum NormName {
    Paper,
    Renorm,
}

/// Config file contents. Every key is optional; the manifest echo fills
/// all of them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub nbar: Option<f64>,
    pub alpha: Option<Amplitude>,
    pub beta: Option<Amplitude>,
    #[serde(rename = "T_nd")]
    pub t_nd: Option<f64>,
    #[serde(rename = "T_det")]
    pub t_det: Option<f64>,
    pub p_dark: Option<f64>,
    pub n_max: Option<usize>,
    pub model: Option<ModelName>,
    pub pair_amplitude: Option<f64>,
    pub thermal_order: Option<usize>,
    pub thermal_norm: Option<NormName>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Keys set in `over` replace those in `self`.
    pub fn overlay(self, over: &ConfigFile) -> ConfigFile {
        ConfigFile {
            theta: over.theta.or(self.theta),
            phi: over.phi.or(self.phi),
            nbar: over.nbar.or(self.nbar),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            t_nd: over.t_nd.or(self.t_nd),
            t_det: over.t_det.or(self.t_det),
            p_dark: over.p_dark.or(self.p_dark),
            n_max: over.n_max.or(self.n_max),
            model: over.model.or(self.model),
            pair_amplitude: over.pair_amplitude.or(self.pair_amplitude),
            thermal_order: over.thermal_order.or(self.thermal_order),
            thermal_norm: over.thermal_norm.or(self.thermal_norm),
        }
    }

    pub fn resolve(&self) -> ProtocolConfig {
        let d = ProtocolConfig::default();
        ProtocolConfig {
            theta: self.theta.unwrap_or(d.theta),
            phi: self.phi.unwrap_or(d.phi),
            nbar: self.nbar.unwrap_or(d.nbar),
            alpha: self.alpha.map(Amplitude::to_complex).unwrap_or(d.alpha),
            beta: self.beta.map(Amplitude::to_complex).unwrap_or(d.beta),
            t_nd: self.t_nd.unwrap_or(d.t_nd),
            t_det: self.t_det.unwrap_or(d.t_det),
            p_dark: self.p_dark.unwrap_or(d.p_dark),
            n_max: self.n_max.unwrap_or(d.n_max),
            model: match self.model {
                Some(ModelName::Paper) => InteractionModel::PaperModel,
                Some(ModelName::FullTms) => InteractionModel::FullTms,
                None => d.model,
            },
            pair_amplitude: self.pair_amplitude.unwrap_or(d.pair_amplitude),
            thermal_order: self.thermal_order.unwrap_or(d.thermal_order),
            thermal_norm: match self.thermal_norm {
                Some(NormName::Paper) => ThermalNorm::PaperTruncated,
                Some(NormName::Renorm) => ThermalNorm::Renormalized,
                None => d.thermal_norm,
            },
        }
    }

    /// Every field set, so that the manifest shows no silent defaults.
    pub fn echo(cfg: &ProtocolConfig) -> ConfigFile {
        ConfigFile {
            theta: Some(cfg.theta),
            phi: Some(cfg.phi),
            nbar: Some(cfg.nbar),
            alpha: Some(Amplitude::from_complex(cfg.alpha)),
            beta: Some(Amplitude::from_complex(cfg.beta)),
            t_nd: Some(cfg.t_nd),
            t_det: Some(cfg.t_det),
            p_dark: Some(cfg.p_dark),
            n_max: Some(cfg.n_max),
            model: Some(match cfg.model {
                InteractionModel::PaperModel => ModelName::Paper,
                InteractionModel::FullTms => ModelName::FullTms,
            }),
            pair_amplitude: Some(cfg.pair_amplitude),
            thermal_order: Some(cfg.thermal_order),
            thermal_norm: Some(match cfg.thermal_norm {
                ThermalNorm::PaperTruncated => NormName::Paper,
                ThermalNorm::Renormalized => NormName::Renorm,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trips() {
        let cfg = ProtocolConfig {
            theta: 0.123456789,
            alpha: Complex64::new(0.05, -0.01),
            model: InteractionModel::FullTms,
            thermal_norm: ThermalNorm::Renormalized,
            ..Default::default()
        };
        let json = serde_json::to_string(&ConfigFile::echo(&cfg)).unwrap();
        let back: ConfigFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.resolve(), cfg);
    }

    #[test]
    fn flags_override_file() {
        let file: ConfigFile = serde_json::from_str(r#"{"theta": 0.1, "nbar": 0.2, "T_nd": 0.5}"#).unwrap();
        let flags = ConfigFile { nbar: Some(0.3), ..Default::default() };
        let cfg = file.overlay(&flags).resolve();
        assert_eq!((cfg.theta, cfg.nbar, cfg.t_nd), (0.1, 0.3, 0.5));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"thetta": 1}"#).is_err());
    }

    #[test]
    fn amplitude_forms() {
        assert_eq!("0.1".parse::<Amplitude>().unwrap(), Amplitude::Real(0.1));
        assert_eq!("0.1, -0.2".parse::<Amplitude>().unwrap(), Amplitude::Complex([0.1, -0.2]));
        assert!("x".parse::<Amplitude>().is_err());
        let a: Amplitude = serde_json::from_str("[0.1, 0.2]").unwrap();
        assert_eq!(a.to_complex(), Complex64::new(0.1, 0.2));
    }
}
