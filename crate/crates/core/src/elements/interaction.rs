//! Optomechanical interaction primitives: pair creation from a blue-detuned
//! pulse and the truncated two-mode squeezer.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fock::PureState;
use crate::{math, Error, Result};

/// Which pair-creation model a scenario uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InteractionModel {
    /// Each blue photon becomes exactly one phonon/Stokes pair, with no
    /// bosonic `sqrt(n+1)` enhancement. Reproduces the closed-form results.
    #[default]
    PaperModel,
    /// Truncated two-mode squeezing with the full ladder algebra.
    FullTms,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionSpec {
    pub model: InteractionModel,
    /// Squeeze parameter `r >= 0`, only read by [`InteractionModel::FullTms`].
    pub squeeze: f64,
    /// Largest number of pairs created per application.
    pub max_order: usize,
}

impl Default for InteractionSpec {
    fn default() -> Self {
        Self { model: InteractionModel::PaperModel, squeeze: 0.0, max_order: 2 }
    }
}

impl InteractionSpec {
    /// Full squeezer settings from the single-pair amplitude `tanh r`.
    pub fn full_tms_from_pair_amplitude(tanh_r: f64, max_order: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&tanh_r) {
            return Err(Error::InvalidParameter(alloc::format!(
                "pair amplitude {tanh_r} must lie in [0, 1)"
            )));
        }
        Ok(Self { model: InteractionModel::FullTms, squeeze: math::atanh(tanh_r), max_order })
    }

    pub fn validate(&self, cutoff: usize) -> Result<()> {
        if !(self.squeeze >= 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("squeeze {} must be >= 0", self.squeeze)));
        }
        if self.max_order > cutoff {
            return Err(Error::InvalidParameter(alloc::format!(
                "max pair order {} exceeds cutoff {cutoff}",
                self.max_order
            )));
        }
        Ok(())
    }
}

/// Pair creation without bosonic enhancement.
///
/// Every photon in `blue_a` adds one excitation to both `mech_a` and
/// `stokes_h`; every photon in `blue_b` to `mech_b` and `stokes_v`. The blue
/// modes end in vacuum and amplitudes are untouched. Apply after splitting
/// the blue pulse with `beamsplitter(blue_a, blue_b)`.
pub fn generate_epr_paper_model(
    state: &PureState,
    blue_a: &str,
    blue_b: &str,
    mech_a: &str,
    mech_b: &str,
    stokes_h: &str,
    stokes_v: &str,
) -> Result<PureState> {
    let reg = state.registry();
    let ba = reg.id(blue_a)?;
    let bb = reg.id(blue_b)?;
    let ma = reg.id(mech_a)?;
    let mb = reg.id(mech_b)?;
    let sh = reg.id(stokes_h)?;
    let sv = reg.id(stokes_v)?;
    state.map_kets(|occ, out| {
        let (na, nb) = (occ[ba.0] as usize, occ[bb.0] as usize);
        let mut o = occ.to_vec();
        for (target, add) in [(ma, na), (sh, na), (mb, nb), (sv, nb)] {
            let n = o[target.0] as usize + add;
            reg.check_mode(target, n)?;
            o[target.0] = n as u8;
        }
        o[ba.0] = 0;
        o[bb.0] = 0;
        out.push((o, Complex64::new(1.0, 0.0)));
        Ok(())
    })
}

/// Result of a truncated two-mode squeeze.
#[derive(Debug, Clone)]
pub struct TmsOutput {
    pub state: PureState,
    /// Relative weight lost to truncation before renormalizing.
    pub norm_deviation: f64,
    /// Set when the truncated tail exceeds [`TMS_TAIL_WARN`].
    pub truncation_warning: bool,
}

pub const TMS_TAIL_WARN: f64 = 1e-6;

/// `exp(r (a^† b^† - a b))` on modes `optical` (a) and `mech` (b).
///
/// Uses the normal-ordered form
/// `exp(t a^†b^†) (cosh r)^{-(n_a+n_b+1)} exp(-t a b)`, `t = tanh r`,
/// keeping at most `max_order` created pairs and occupations within the
/// cutoffs. The result is rescaled to the input norm; the discarded weight
/// is reported.
pub fn two_mode_squeeze(state: &PureState, optical: &str, mech: &str, spec: &InteractionSpec) -> Result<TmsOutput> {
    if spec.model != InteractionModel::FullTms {
        return Err(Error::InvalidParameter("two_mode_squeeze needs the FullTms model".into()));
    }
    let reg = state.registry();
    let a = reg.id(optical)?;
    let b = reg.id(mech)?;
    if a == b {
        return Err(Error::InvalidParameter("two_mode_squeeze needs two distinct modes".into()));
    }
    spec.validate(reg.cutoff(a).min(reg.cutoff(b)))?;
    if spec.squeeze == 0.0 {
        return Ok(TmsOutput { state: state.clone(), norm_deviation: 0.0, truncation_warning: false });
    }
    let t = math::tanh(spec.squeeze);
    let sech = 1.0 / math::cosh(spec.squeeze);
    let (cut_a, cut_b) = (reg.cutoff(a), reg.cutoff(b));

    let raw = state.map_kets(|occ, out| {
        let (na, nb) = (occ[a.0] as usize, occ[b.0] as usize);
        // exp(-t a b): removes k pairs
        let mut lowered: Vec<(usize, usize, f64)> = Vec::new();
        for k in 0..=na.min(nb) {
            let c = math::powi(-t, k as i32) / math::factorial(k) * math::ladder(na, na - k) * math::ladder(nb, nb - k);
            lowered.push((na - k, nb - k, c));
        }
        for (la, lb, c) in lowered {
            let damp = math::powi(sech, (la + lb + 1) as i32);
            // exp(t a^† b^†): adds j pairs, truncated by order and cutoff
            for j in 0..=spec.max_order {
                let (ha, hb) = (la + j, lb + j);
                if ha > cut_a || hb > cut_b {
                    break;
                }
                let g = math::powi(t, j as i32) / math::factorial(j) * math::ladder(ha, la) * math::ladder(hb, lb);
                let mut o = occ.to_vec();
                o[a.0] = ha as u8;
                o[b.0] = hb as u8;
                out.push((o, Complex64::new(c * damp * g, 0.0)));
            }
        }
        Ok(())
    })?;

    let before = state.norm_sqr();
    let after = raw.norm_sqr();
    let norm_deviation = if before > 0.0 { 1.0 - after / before } else { 0.0 };
    let state = if after > 0.0 { raw.scaled(Complex64::new(math::sqrt(before / after), 0.0)) } else { raw };
    Ok(TmsOutput { state, norm_deviation, truncation_warning: math::abs(norm_deviation) > TMS_TAIL_WARN })
}
