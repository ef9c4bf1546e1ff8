//! Closed-form fidelity, additional-term probability, threshold and
//! weak-coherent-state ratio formulas.

use alloc::sync::Arc;

use num_complex::Complex64;

use crate::fock::{ModeRegistry, PureState};
use crate::{math, Error, Result};

/// Fidelity bound separating quantum from classical teleportation.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

fn check_order(order: usize) -> Result<()> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidParameter(alloc::format!("thermal truncation order {order} must be 1 or 2")));
    }
    Ok(())
}

fn ratio(nbar: f64) -> Result<f64> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("mean occupation {nbar} must be >= 0")));
    }
    Ok(nbar / (nbar + 1.0))
}

/// Teleportation fidelity for thermal mechanics truncated at `order` quanta:
/// `1/(1+s+s^2)^2` (order 2) or `1/(1+s)^2` (order 1).
pub fn fidelity_closed_form(nbar: f64, order: usize) -> Result<f64> {
    check_order(order)?;
    let s = ratio(nbar)?;
    let z = if order == 2 { 1.0 + s + s * s } else { 1.0 + s };
    Ok(1.0 / (z * z))
}

/// Total probability of the additional (non-ideal) terms, `1 - F`.
pub fn p_add_closed_form(nbar: f64, order: usize) -> Result<f64> {
    Ok(1.0 - fidelity_closed_form(nbar, order)?)
}

/// Order-2 additional-term probability written term by term as the
/// rational function `(2s+3s^2+2s^3+s^4)/(1+2s+3s^2+2s^3+s^4)`.
pub fn p_add_rational(s: f64) -> f64 {
    let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
    (2.0 * s + 3.0 * s2 + 2.0 * s3 + s4) / (1.0 + 2.0 * s + 3.0 * s2 + 2.0 * s3 + s4)
}

/// Mean occupation at which the order-2 fidelity drops to `target`,
/// found by bisection to `1e-6`.
pub fn threshold_search(target: f64) -> Result<f64> {
    // F(nbar) falls monotonically from 1 towards 1/9 as s -> 1.
    if !(target > 1.0 / 9.0 && target <= 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "target fidelity {target} outside the reachable range (1/9, 1]"
        )));
    }
    let f = |n: f64| fidelity_closed_form(n, 2).unwrap_or(0.0);
    if f(0.0) <= target {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while f(hi) > target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::InvalidParameter("threshold bracket did not close".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Error ratios for weak coherent pulses `alpha` (blue) and `beta`
/// (resonant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WcsRatios {
    /// Blue one photon, resonant two, relative to `|11>_br`: `|beta|^2/2`.
    pub sector_12: f64,
    /// `|alpha|^2/2`.
    pub sector_21: f64,
    /// `|alpha|^2 |beta|^2/4`.
    pub sector_22: f64,
    pub sector_11: f64,
    /// `|11>_AB` false-herald weight over the ideal weight:
    /// `|alpha|^2/(2|beta|^2)`.
    pub contamination: f64,
}

pub fn wcs_error_ratios(alpha: Complex64, beta: Complex64) -> Result<WcsRatios> {
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    if a2 == 0.0 || b2 == 0.0 {
        return Err(Error::InvalidParameter("pulse amplitudes must be nonzero".into()));
    }
    Ok(WcsRatios {
        sector_12: b2 / 2.0,
        sector_21: a2 / 2.0,
        sector_22: a2 * b2 / 4.0,
        sector_11: 1.0,
        contamination: a2 / (2.0 * b2),
    })
}

/// Heralded mechanical component for initial mechanical occupation
/// `|jk>`: `e^{i phi} sin(theta)|j,k+1> +/- cos(theta)|j+1,k>` on a
/// `(mechA, mechB)` registry. `plus = false` gives the `M-` sign.
pub fn thermal_component(
    registry: &Arc<ModeRegistry>,
    theta: f64,
    phi: f64,
    j: usize,
    k: usize,
    plus: bool,
) -> Result<PureState> {
    let sign = if plus { 1.0 } else { -1.0 };
    PureState::from_terms(
        registry.clone(),
        [
            (alloc::vec![j as u8, (k + 1) as u8], math::cis(phi) * math::sin(theta)),
            (alloc::vec![(j + 1) as u8, k as u8], Complex64::new(sign * math::cos(theta), 0.0)),
        ],
    )
}
