//! Sparse multimode Fock states and pure-branch ensembles.

mod ensemble;
mod registry;
mod state;

pub use ensemble::{Branch, Ensemble};
pub use registry::{ModeId, ModeRegistry};
pub use state::{Occupation, PureState};

/// Amplitudes with magnitude below this are dropped from sparse states.
pub const PRUNE_TOL: f64 = 1e-12;

/// Tolerance on `|norm^2 - 1|` for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-10;

/// Default per-mode occupation cutoff; the thermal pipeline reaches `|3>`.
pub const DEFAULT_CUTOFF: usize = 3;

/// Anything that can be viewed as a (possibly sub-normalized) mixed state.
pub trait AsEnsemble {
    fn to_ensemble(&self) -> Ensemble;
}

impl AsEnsemble for PureState {
    fn to_ensemble(&self) -> Ensemble {
        Ensemble::pure(self.clone())
    }
}

impl AsEnsemble for Ensemble {
    fn to_ensemble(&self) -> Ensemble {
        self.clone()
    }
}

/// Mode labels used by the teleportation pipeline.
pub mod labels {
    pub const MECH_A: &str = "mechA";
    pub const MECH_B: &str = "mechB";
    /// Stokes light from path A after polarization merging.
    pub const H2: &str = "H2";
    /// Stokes light from path B after polarization merging.
    pub const V2: &str = "V2";
    /// Input qubit, horizontal polarization.
    pub const H1: &str = "H1";
    /// Input qubit, vertical polarization.
    pub const V1: &str = "V1";
    pub const C_H: &str = "cH";
    pub const C_V: &str = "cV";
    pub const D_H: &str = "dH";
    pub const D_V: &str = "dV";
    pub const BLUE_A: &str = "blueA";
    pub const BLUE_B: &str = "blueB";
    pub const READ_A: &str = "readA";
    pub const READ_B: &str = "readB";
}
