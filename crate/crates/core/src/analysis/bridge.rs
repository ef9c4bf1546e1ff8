//! Conversion from sparse states to the oracle's dense layout. Kept apart
//! from the oracle so that the oracle itself never sees sparse types.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fock::{AsEnsemble, ModeRegistry};
use crate::Result;

use super::oracle::{DenseMatrix, DenseSpace};

/// Dense layout matching a registry's mode order and cutoffs.
pub fn dense_space(registry: &ModeRegistry) -> Result<DenseSpace> {
    DenseSpace::new(registry.cutoffs())
}

/// `sum_i w_i |psi_i><psi_i|` as a dense matrix.
pub fn to_dense<S: AsEnsemble>(state: &S) -> Result<(DenseSpace, DenseMatrix)> {
    let ens = state.to_ensemble();
    let space = dense_space(ens.registry())?;
    let mut rho = DenseMatrix::zeros(space.dim());
    for b in ens.branches() {
        let terms: Vec<(Vec<usize>, Complex64)> =
            b.state.terms().map(|(o, a)| (o.iter().map(|&n| n as usize).collect(), *a)).collect();
        rho = rho.add(&space.pure_density(&terms)?.scale(Complex64::new(b.weight, 0.0)));
    }
    Ok((space, rho))
}
