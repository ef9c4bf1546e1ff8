//! Initial states: thermal mechanics, truncated coherent pulses and the
//! polarization-encoded input qubit.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fock::{Ensemble, ModeRegistry, PureState};
use crate::{math, Error, Result};

/// How the truncated thermal distribution is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThermalNorm {
    /// Weights `(1-s) s^n` for `n <= truncation`; total weight below one.
    #[default]
    PaperTruncated,
    /// Weights divided by `sum_{n <= truncation} s^n`; total weight one.
    Renormalized,
}

/// Ratio `s = nbar / (nbar + 1)` of successive thermal weights.
pub fn thermal_ratio(nbar: f64) -> f64 {
    nbar / (nbar + 1.0)
}

/// Weights of `|0>..|truncation>` in a thermal state of mean occupation
/// `nbar`.
pub fn thermal_weights(nbar: f64, truncation: usize, norm: ThermalNorm) -> Result<Vec<f64>> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("mean occupation {nbar} must be >= 0")));
    }
    let s = thermal_ratio(nbar);
    let raw: Vec<f64> = (0..=truncation).map(|n| math::powi(s, n as i32)).collect();
    let scale = match norm {
        ThermalNorm::PaperTruncated => 1.0 - s,
        ThermalNorm::Renormalized => 1.0 / raw.iter().sum::<f64>(),
    };
    Ok(raw.into_iter().map(|w| w * scale).collect())
}

/// Thermal state of one mode truncated at `truncation` quanta, as an
/// ensemble of number states on a one-mode registry.
pub fn prepare_thermal(nbar: f64, truncation: usize, mode: &str, n_max: usize, norm: ThermalNorm) -> Result<Ensemble> {
    if truncation > n_max {
        return Err(Error::InvalidParameter(alloc::format!(
            "thermal truncation {truncation} exceeds cutoff {n_max}"
        )));
    }
    let reg = ModeRegistry::new(&[(mode, n_max)])?;
    let mut ens = Ensemble::empty(reg.clone());
    for (n, w) in thermal_weights(nbar, truncation, norm)?.into_iter().enumerate() {
        ens.push(w, PureState::basis(reg.clone(), &[n])?)?;
    }
    Ok(ens)
}

/// Amplitudes above this are outside the range where the two-photon
/// expansion of a coherent state is trusted.
pub const COHERENT_VALIDATED_MAX: f64 = 0.3;

/// `|R> ~ |0> + R|1> + R^2/sqrt2 |2>` truncated at `order` photons,
/// unnormalized.
pub fn prepare_coherent_truncated(amplitude: Complex64, order: usize, mode: &str, n_max: usize) -> Result<PureState> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidParameter(alloc::format!(
            "coherent truncation order {order} unsupported (1 or 2)"
        )));
    }
    let reg = ModeRegistry::new(&[(mode, n_max)])?;
    let mut terms = Vec::new();
    let mut coeff = Complex64::new(1.0, 0.0);
    for n in 0..=order {
        if n > 0 {
            coeff = coeff * amplitude / math::sqrt(n as f64);
        }
        reg.check(&[n as u8])?;
        terms.push((alloc::vec![n as u8], coeff));
    }
    PureState::from_terms(reg, terms)
}

/// `n` photons sent through a polarization splitter with amplitudes
/// `cos(theta)` into `v_mode` and `e^{i phi} sin(theta)` into `h_mode`:
/// `(cos(theta) b_V^† + e^{i phi} sin(theta) b_H^†)^n / sqrt(n!) |vac>`.
pub fn prepare_polarized_photons(
    photons: usize,
    theta: f64,
    phi: f64,
    h_mode: &str,
    v_mode: &str,
    n_max: usize,
) -> Result<PureState> {
    let reg = ModeRegistry::uniform(&[h_mode, v_mode], n_max)?;
    let h_amp = math::cis(phi) * math::sin(theta);
    let v_amp = Complex64::new(math::cos(theta), 0.0);
    let mut terms = Vec::new();
    for k in 0..=photons {
        let occ = alloc::vec![k as u8, (photons - k) as u8];
        let c = h_amp.powu(k as u32) * v_amp.powu((photons - k) as u32) * math::sqrt(math::binomial(photons, k));
        if c.norm_sqr() > 0.0 {
            reg.check_mode(crate::fock::ModeId(0), k)?;
            reg.check_mode(crate::fock::ModeId(1), photons - k)?;
            terms.push((occ, c));
        }
    }
    PureState::from_terms(reg, terms)
}

/// Input qubit `cos(theta)|01> + e^{i phi} sin(theta)|10>` on `(H1, V1)`.
pub fn prepare_input_qubit(theta: f64, phi: f64, n_max: usize) -> Result<PureState> {
    use crate::fock::labels::{H1, V1};
    prepare_polarized_photons(1, theta, phi, H1, V1, n_max)
}

#[cfg(test)]
mod tests {
    use std::prelude::v1::*;
    use super::*;
    use crate::fock::labels::{H1, V1};

    #[test]
    fn thermal_vacuum() {
        let e = prepare_thermal(0.0, 2, "m", 3, ThermalNorm::PaperTruncated).unwrap();
        assert_eq!(e.branches().len(), 1);
        assert_eq!(e.branches()[0].weight, 1.0);
    }

    #[test]
    fn thermal_truncated_weights() {
        let e = prepare_thermal(0.2, 2, "m", 3, ThermalNorm::PaperTruncated).unwrap();
        let s = 1.0 / 6.0;
        let expected = [1.0 - s, (1.0 - s) * s, (1.0 - s) * s * s];
        for (b, w) in e.branches().iter().zip(expected) {
            assert!((b.weight - w).abs() < 1e-15);
        }
        assert!(e.total_weight() < 1.0);
    }

    #[test]
    fn thermal_tail_at_threshold() {
        let w = thermal_weights(0.23, 2, ThermalNorm::PaperTruncated).unwrap();
        let tail = 1.0 - w.iter().sum::<f64>();
        assert!(tail < 0.007, "tail {tail}");
        let r = thermal_weights(0.23, 2, ThermalNorm::Renormalized).unwrap();
        assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_rejects_negative_and_oversized() {
        assert!(prepare_thermal(-0.1, 2, "m", 3, ThermalNorm::PaperTruncated).is_err());
        assert!(prepare_thermal(0.1, 4, "m", 3, ThermalNorm::PaperTruncated).is_err());
    }

    #[test]
    fn coherent_truncations() {
        let z = prepare_coherent_truncated(Complex64::new(0.0, 0.0), 2, "b", 3).unwrap();
        assert_eq!(z.to_ket_string(), "|0>");
        let two = prepare_coherent_truncated(Complex64::new(0.2, 0.0), 2, "b", 3).unwrap();
        assert_eq!(two.amplitude(&[0]).re, 1.0);
        assert!((two.amplitude(&[1]).re - 0.2).abs() < 1e-15);
        assert!((two.amplitude(&[2]).re - 0.04 / core::f64::consts::SQRT_2).abs() < 1e-15);
        let one = prepare_coherent_truncated(Complex64::new(0.2, 0.0), 1, "b", 3).unwrap();
        assert_eq!(one.len(), 2);
        assert!(prepare_coherent_truncated(Complex64::new(0.2, 0.0), 3, "b", 3).is_err());
    }

    #[test]
    fn input_qubit_examples() {
        let q = prepare_input_qubit(0.0, 0.0, 1).unwrap();
        assert_eq!(q.to_ket_string(), "|01>");
        assert_eq!(q.registry().labels(), &[H1.to_string(), V1.to_string()]);

        let h = core::f64::consts::FRAC_1_SQRT_2;
        let q = prepare_input_qubit(core::f64::consts::FRAC_PI_4, 0.0, 1).unwrap();
        assert!((q.amplitude(&[0, 1]).re - h).abs() < 1e-15);
        assert!((q.amplitude(&[1, 0]).re - h).abs() < 1e-15);

        let q = prepare_input_qubit(core::f64::consts::FRAC_PI_6, 0.0, 1).unwrap();
        assert!((q.amplitude(&[0, 1]).re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((q.amplitude(&[1, 0]).re - 0.5).abs() < 1e-15);
        assert!(q.is_normalized());
    }

    #[test]
    fn two_photon_polarized_input() {
        // sin^2|20> + cos^2|02> + sin(2 theta)/sqrt2 |11>
        let theta = 0.3;
        let s = prepare_polarized_photons(2, theta, 0.0, H1, V1, 2).unwrap();
        let (st, ct) = (theta.sin(), theta.cos());
        assert!((s.amplitude(&[2, 0]).re - st * st).abs() < 1e-15);
        assert!((s.amplitude(&[0, 2]).re - ct * ct).abs() < 1e-15);
        assert!((s.amplitude(&[1, 1]).re - (2.0 * theta).sin() / 2f64.sqrt()).abs() < 1e-15);
    }
}
