//! Passive linear optics: 50/50 beamsplitter, phase shifter, perfect swap
//! and the pure-loss channel.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fock::{AsEnsemble, Ensemble, Occupation, PureState};
use crate::{math, Error, Result};

/// Transmittance of a pure-loss channel. Reflectance is `1 - T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSpec {
    transmittance: f64,
}

impl LossSpec {
    pub fn new(transmittance: f64) -> Result<Self> {
        if !(transmittance > 0.0 && transmittance <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "transmittance {transmittance} outside (0, 1]"
            )));
        }
        Ok(Self { transmittance })
    }

    pub fn lossless() -> Self {
        Self { transmittance: 1.0 }
    }

    pub fn transmittance(&self) -> f64 {
        self.transmittance
    }

    pub fn reflectance(&self) -> f64 {
        1.0 - self.transmittance
    }
}

/// Amplitudes of `|n1, n2> -> sum c |p, q>` under the 50/50 beamsplitter.
///
/// Convention: `a1^† -> (a1^† + a2^†)/sqrt2`, `a2^† -> (a1^† - a2^†)/sqrt2`,
/// outputs written back onto the same two modes. Port 2 carries the minus
/// sign on the second output. BS1, BS2 and every loss-model splitter in the
/// crate use this one convention.
fn beamsplitter_kets(n1: usize, n2: usize) -> Vec<(usize, usize, f64)> {
    let total = n1 + n2;
    let mut coeffs = alloc::vec![0.0f64; total + 1];
    // (a1+a2)^n1 (a1-a2)^n2: pick k a1's from the first factor, j from the second
    for k in 0..=n1 {
        for j in 0..=n2 {
            let sign = if (n2 - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            coeffs[k + j] += sign * math::binomial(n1, k) * math::binomial(n2, j);
        }
    }
    let norm = math::powi(core::f64::consts::FRAC_1_SQRT_2, total as i32)
        / math::sqrt(math::factorial(n1) * math::factorial(n2));
    coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0.0)
        .map(|(p, c)| {
            let q = total - p;
            (p, q, c * norm * math::sqrt(math::factorial(p) * math::factorial(q)))
        })
        .collect()
}

/// 50/50 beamsplitter acting on `mode1` (port 1) and `mode2` (port 2).
///
/// Fails with a cutoff violation instead of silently dropping amplitude
/// when an output occupation would exceed a mode's cutoff.
pub fn beamsplitter(state: &PureState, mode1: &str, mode2: &str) -> Result<PureState> {
    let reg = state.registry();
    let (id1, id2) = (reg.id(mode1)?, reg.id(mode2)?);
    if id1 == id2 {
        return Err(Error::InvalidParameter("beamsplitter needs two distinct modes".into()));
    }
    state.map_kets(|occ, out| {
        for (p, q, c) in beamsplitter_kets(occ[id1.0] as usize, occ[id2.0] as usize) {
            reg.check_mode(id1, p)?;
            reg.check_mode(id2, q)?;
            let mut o: Occupation = occ.to_vec();
            o[id1.0] = p as u8;
            o[id2.0] = q as u8;
            out.push((o, Complex64::new(c, 0.0)));
        }
        Ok(())
    })
}

/// Multiplies each term by `e^{i phi n}`, `n` the occupation of `mode`.
pub fn phase_shift(state: &PureState, mode: &str, phi: f64) -> Result<PureState> {
    let i = state.registry().id(mode)?.0;
    state.map_kets(|occ, out| {
        out.push((occ.to_vec(), math::cis(phi * occ[i] as f64)));
        Ok(())
    })
}

/// Exchanges the occupations of two modes with equal cutoffs.
pub fn state_swap(state: &PureState, mode_x: &str, mode_y: &str) -> Result<PureState> {
    let reg = state.registry();
    let (x, y) = (reg.id(mode_x)?, reg.id(mode_y)?);
    if x == y {
        return Err(Error::InvalidParameter("state swap needs two distinct modes".into()));
    }
    if reg.cutoff(x) != reg.cutoff(y) {
        return Err(Error::InvalidParameter(alloc::format!(
            "state swap between {mode_x} (n_max {}) and {mode_y} (n_max {}) needs equal cutoffs",
            reg.cutoff(x),
            reg.cutoff(y)
        )));
    }
    state.map_kets(|occ, out| {
        let mut o = occ.to_vec();
        o.swap(x.0, y.0);
        out.push((o, Complex64::new(1.0, 0.0)));
        Ok(())
    })
}

/// Kraus operator `A_m` of the pure-loss channel applied to one ket:
/// `|n> -> sqrt(C(n,m)) T^{(n-m)/2} R^{m/2} |n-m>`.
fn loss_kraus_amplitude(n: usize, m: usize, spec: LossSpec) -> f64 {
    if m > n {
        return 0.0;
    }
    math::sqrt(
        math::binomial(n, m)
            * math::powi(spec.transmittance(), (n - m) as i32)
            * math::powi(spec.reflectance(), m as i32),
    )
}

/// Pure-loss channel on `mode`; one output branch per lost photon count.
pub fn loss_channel<S: AsEnsemble>(state: &S, mode: &str, spec: LossSpec) -> Result<Ensemble> {
    let ensemble = state.to_ensemble();
    let i = ensemble.registry().id(mode)?;
    let cutoff = ensemble.registry().cutoff(i);
    ensemble.flat_map(|psi| {
        let mut out = Ensemble::empty(psi.registry().clone());
        for m in 0..=cutoff {
            let branch = psi.map_kets(|occ, kets| {
                let n = occ[i.0] as usize;
                let a = loss_kraus_amplitude(n, m, spec);
                if a != 0.0 {
                    let mut o = occ.to_vec();
                    o[i.0] = (n - m) as u8;
                    kets.push((o, Complex64::new(a, 0.0)));
                }
                Ok(())
            })?;
            out.push_unnormalized(1.0, branch);
        }
        Ok(out)
    })
}

/// Applies the same loss to several modes in sequence.
pub fn loss_on_modes<S: AsEnsemble>(state: &S, modes: &[&str], spec: LossSpec) -> Result<Ensemble> {
    let mut e = state.to_ensemble();
    if spec.transmittance() == 1.0 {
        return Ok(e);
    }
    for m in modes {
        e = loss_channel(&e, m, spec)?;
    }
    Ok(e)
}
