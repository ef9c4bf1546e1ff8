//! Closed forms, the thermal fidelity curve, threshold search and the
//! dense density-matrix oracle.

pub mod bridge;
mod closed_form;
mod curve;
pub mod oracle;

pub use closed_form::{
    fidelity_closed_form, p_add_closed_form, p_add_rational, thermal_component, threshold_search,
    wcs_error_ratios, WcsRatios, CLASSICAL_FIDELITY,
};
pub use curve::{fidelity_curve, CurvePoint};
pub use oracle::{dense_oracle, DenseMatrix, DenseSpace, Gate, DENSE_DIM_LIMIT};
