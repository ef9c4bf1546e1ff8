use alloc::vec::Vec;

use crate::protocol::{thermal_fidelity, ProtocolConfig};
use crate::Result;

use super::{fidelity_closed_form, CLASSICAL_FIDELITY};

/// One row of the fidelity-versus-occupation curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub nbar: f64,
    pub f_order2: f64,
    pub f_order1: f64,
    pub p_add_order2: f64,
    pub p_add_order1: f64,
    /// Simulated order-2 fidelity, when requested.
    pub f_sim: Option<f64>,
    pub threshold_line: f64,
}

/// Closed forms on `grid`, plus the simulated thermal fidelity when
/// `simulate` carries a base config (its `nbar`, `thermal_order` and
/// `p_dark` are overridden).
pub fn fidelity_curve(grid: &[f64], simulate: Option<&ProtocolConfig>) -> Result<Vec<CurvePoint>> {
    grid.iter()
        .map(|&nbar| {
            let f2 = fidelity_closed_form(nbar, 2)?;
            let f1 = fidelity_closed_form(nbar, 1)?;
            let f_sim = match simulate {
                Some(base) => Some(thermal_fidelity(&ProtocolConfig { thermal_order: 2, ..*base }, nbar)?),
                None => None,
            };
            Ok(CurvePoint {
                nbar,
                f_order2: f2,
                f_order1: f1,
                p_add_order2: 1.0 - f2,
                p_add_order1: 1.0 - f1,
                f_sim,
                threshold_line: CLASSICAL_FIDELITY,
            })
        })
        .collect()
}
