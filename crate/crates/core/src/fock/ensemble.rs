use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::state::same_registry;
use super::{ModeRegistry, PureState, NORM_TOL, PRUNE_TOL};
use crate::{math, Error, Result};

/// One pure component of an [`Ensemble`]: a unit-norm state and its weight.
#[derive(Debug, Clone)]
pub struct Branch {
    pub weight: f64,
    pub state: PureState,
}

/// Mixed state as a weighted list of unit-norm pure branches.
///
/// Weights are non-negative and may sum to less than one; a sub-normalized
/// ensemble is a heralded (conditional, unnormalized) state whose total
/// weight is the herald probability.
#[derive(Debug, Clone)]
pub struct Ensemble {
    registry: Arc<ModeRegistry>,
    branches: Vec<Branch>,
}

impl Ensemble {
    pub fn empty(registry: Arc<ModeRegistry>) -> Self {
        Self { registry, branches: Vec::new() }
    }

    /// Ensemble of a single (possibly unnormalized) pure state; its norm
    /// squared becomes the branch weight.
    pub fn pure(state: PureState) -> Self {
        let mut e = Self::empty(state.registry().clone());
        e.push_unnormalized(1.0, state);
        e
    }

    /// Adds `weight * |state><state|`. The state is normalized here and its
    /// norm squared folded into the weight; zero states are skipped.
    pub fn push_unnormalized(&mut self, weight: f64, state: PureState) {
        debug_assert!(same_registry(&self.registry, state.registry()));
        let n2 = state.norm_sqr();
        let w = weight * n2;
        if w <= PRUNE_TOL * PRUNE_TOL {
            return;
        }
        if let Some(state) = state.normalized() {
            self.branches.push(Branch { weight: w, state });
        }
    }

    pub fn push(&mut self, weight: f64, state: PureState) -> Result<()> {
        if weight < 0.0 {
            return Err(Error::InvalidParameter(alloc::format!("negative branch weight {weight}")));
        }
        if !same_registry(&self.registry, state.registry()) {
            return Err(Error::RegistryMismatch);
        }
        self.push_unnormalized(weight, state);
        Ok(())
    }

    /// Weighted sum of ensembles sharing a registry.
    pub fn mixture(parts: &[(f64, &Ensemble)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidParameter("mixture needs at least one ensemble".into()));
        };
        let mut out = Self::empty(first.registry.clone());
        for (w, e) in parts {
            if !same_registry(&out.registry, &e.registry) {
                return Err(Error::RegistryMismatch);
            }
            for b in &e.branches {
                out.push_unnormalized(w * b.weight, b.state.clone());
            }
        }
        Ok(out)
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        &self.registry
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).fold(0.0, |a, w| a + w)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::empty(self.registry.clone());
        for b in &self.branches {
            out.push_unnormalized(factor * b.weight, b.state.clone());
        }
        out
    }

    /// Rescaled to total weight 1; the empty ensemble stays empty.
    pub fn normalized(&self) -> Self {
        let w = self.total_weight();
        if w <= 0.0 {
            return self.clone();
        }
        self.scaled(1.0 / w)
    }

    /// Applies a linear (not necessarily norm-preserving) map to every
    /// branch. Branch weights pick up the norm change.
    pub fn map_pure<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&PureState) -> Result<PureState>,
    {
        let mut out: Option<Self> = None;
        for b in &self.branches {
            let s = f(&b.state)?;
            let target = out.get_or_insert_with(|| Self::empty(s.registry().clone()));
            target.push_unnormalized(b.weight, s);
        }
        Ok(out.unwrap_or_else(|| self.clone()))
    }

    /// Applies a channel that maps each pure branch to an ensemble.
    pub fn flat_map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&PureState) -> Result<Ensemble>,
    {
        let mut out: Option<Self> = None;
        for b in &self.branches {
            let e = f(&b.state)?;
            let target = out.get_or_insert_with(|| Self::empty(e.registry.clone()));
            for sub in e.branches {
                target.push_unnormalized(b.weight * sub.weight, sub.state);
            }
        }
        Ok(out.unwrap_or_else(|| self.clone()))
    }

    pub fn trace_out(&self, modes: &[&str]) -> Result<Self> {
        let (kept, _) = self.registry.without(modes)?;
        let traced = self.flat_map(|s| s.trace_out(modes))?;
        if traced.branches.is_empty() {
            return Ok(Self::empty(kept));
        }
        Ok(traced)
    }

    /// Product ensemble; `self` modes come first.
    pub fn tensor(&self, other: &Ensemble) -> Result<Self> {
        let registry = self.registry.concat(&other.registry)?;
        let mut out = Self::empty(registry);
        for a in &self.branches {
            for b in &other.branches {
                out.push_unnormalized(a.weight * b.weight, a.state.tensor(&b.state)?);
            }
        }
        Ok(out)
    }

    pub fn tensor_pure(&self, other: &PureState) -> Result<Self> {
        self.tensor(&Ensemble::pure(other.clone()))
    }

    pub fn relabel(&self, renames: &[(&str, &str)]) -> Result<Self> {
        let registry = self.registry.relabeled(renames)?;
        let mut out = Self::empty(registry);
        for b in &self.branches {
            out.branches.push(Branch { weight: b.weight, state: b.state.relabel(renames)? });
        }
        Ok(out)
    }

    /// `sum_i w_i |<target|psi_i>|^2`, bounded by the total weight.
    pub fn fidelity(&self, target: &PureState) -> Result<f64> {
        let n2 = target.norm_sqr();
        if math::abs(n2 - 1.0) > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        let mut f = 0.0;
        for b in &self.branches {
            f += b.weight * b.state.inner(target)?.norm_sqr();
        }
        Ok(f)
    }

    /// Density-matrix element `<bra|rho|ket>` in the occupation basis.
    pub fn element(&self, bra: &[u8], ket: &[u8]) -> Complex64 {
        self.branches
            .iter()
            .map(|b| b.state.amplitude(bra) * b.state.amplitude(ket).conj() * b.weight)
            .sum()
    }

    /// All occupations carrying amplitude in some branch, sorted.
    pub fn support(&self) -> Vec<super::Occupation> {
        let mut occs: Vec<_> = self.branches.iter().flat_map(|b| b.state.terms().map(|(o, _)| o.clone())).collect();
        occs.sort();
        occs.dedup();
        occs
    }
}
