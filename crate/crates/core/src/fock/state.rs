use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::{Ensemble, ModeId, ModeRegistry, NORM_TOL, PRUNE_TOL};
use crate::{math, Error, Result};

/// Occupation numbers in registry order.
pub type Occupation = Vec<u8>;

/// Sparse pure state: occupation tuple -> complex amplitude.
///
/// The state need not be normalized; heralded and truncated states carry
/// their probability in the norm. Amplitudes below [`PRUNE_TOL`] are never
/// stored.
#[derive(Debug, Clone)]
pub struct PureState {
    registry: Arc<ModeRegistry>,
    terms: BTreeMap<Occupation, Complex64>,
}

pub(crate) fn same_registry(a: &Arc<ModeRegistry>, b: &Arc<ModeRegistry>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PureState {
    /// The state with no terms (norm 0).
    pub fn zero(registry: Arc<ModeRegistry>) -> Self {
        Self { registry, terms: BTreeMap::new() }
    }

    pub fn vacuum(registry: Arc<ModeRegistry>) -> Self {
        let occ = alloc::vec![0u8; registry.len()];
        let mut terms = BTreeMap::new();
        terms.insert(occ, Complex64::new(1.0, 0.0));
        Self { registry, terms }
    }

    /// Single basis ket with amplitude 1; occupations in registry order.
    pub fn basis(registry: Arc<ModeRegistry>, occupation: &[usize]) -> Result<Self> {
        let occ = to_occupation(&registry, occupation)?;
        let mut terms = BTreeMap::new();
        terms.insert(occ, Complex64::new(1.0, 0.0));
        Ok(Self { registry, terms })
    }

    /// Basis ket given by labeled occupations; unlisted modes are empty.
    pub fn basis_labeled(registry: Arc<ModeRegistry>, occupation: &[(&str, usize)]) -> Result<Self> {
        let mut occ = alloc::vec![0usize; registry.len()];
        for (label, n) in occupation {
            occ[registry.id(label)?.0] = *n;
        }
        Self::basis(registry, &occ)
    }

    /// Builds a state from `(occupation, amplitude)` pairs. Repeated
    /// occupations accumulate.
    pub fn from_terms<I>(registry: Arc<ModeRegistry>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, Complex64)>,
    {
        let mut state = Self::zero(registry);
        for (occ, amp) in terms {
            state.registry.check(&occ)?;
            *state.terms.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        state.prune();
        Ok(state)
    }

    /// Linear combination `sum_i c_i |psi_i>` over a shared registry.
    pub fn superpose(parts: &[(Complex64, &PureState)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidParameter("superpose needs at least one state".into()));
        };
        let mut out = Self::zero(first.registry.clone());
        for (c, s) in parts {
            if !same_registry(&out.registry, &s.registry) {
                return Err(Error::RegistryMismatch);
            }
            for (occ, a) in &s.terms {
                *out.terms.entry(occ.clone()).or_insert(Complex64::new(0.0, 0.0)) += c * a;
            }
        }
        out.prune();
        Ok(out)
    }

    pub(crate) fn from_map(registry: Arc<ModeRegistry>, terms: BTreeMap<Occupation, Complex64>) -> Self {
        let mut s = Self { registry, terms };
        s.prune();
        s
    }

    fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm_sqr() >= PRUNE_TOL * PRUNE_TOL);
    }

    pub fn registry(&self) -> &Arc<ModeRegistry> {
        &self.registry
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occupation: &[u8]) -> Complex64 {
        self.terms.get(occupation).copied().unwrap_or_default()
    }

    /// Amplitude of a labeled basis ket; unlisted modes are empty.
    pub fn amplitude_of(&self, occupation: &[(&str, usize)]) -> Result<Complex64> {
        let mut occ = alloc::vec![0u8; self.registry.len()];
        for (label, n) in occupation {
            occ[self.registry.id(label)?.0] = *n as u8;
        }
        Ok(self.amplitude(&occ))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).fold(0.0, |s, x| s + x)
    }

    pub fn is_normalized(&self) -> bool {
        math::abs(self.norm_sqr() - 1.0) <= NORM_TOL
    }

    /// Unit-norm copy, or `None` for the zero state.
    pub fn normalized(&self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 <= 0.0 {
            return None;
        }
        Some(self.scaled(Complex64::new(1.0 / math::sqrt(n2), 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(o, a)| (o.clone(), a * c)).collect();
        Self::from_map(self.registry.clone(), terms)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if !same_registry(&self.registry, &other.registry) {
            return Err(Error::RegistryMismatch);
        }
        let (small, large, conj_small) = if self.len() <= other.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (occ, a) in &small.terms {
            if let Some(b) = large.terms.get(occ) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// Product state on the concatenated registry (`self` modes first).
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let registry = self.registry.concat(&other.registry)?;
        let mut terms = BTreeMap::new();
        for (oa, a) in &self.terms {
            for (ob, b) in &other.terms {
                let mut occ = oa.clone();
                occ.extend_from_slice(ob);
                terms.insert(occ, a * b);
            }
        }
        Ok(Self::from_map(registry, terms))
    }

    /// Partial trace over `modes`. Each distinct occupation of the traced
    /// modes becomes one branch with weight equal to its norm squared.
    pub fn trace_out(&self, modes: &[&str]) -> Result<Ensemble> {
        let (kept_reg, mask) = self.registry.without(modes)?;
        let mut groups: BTreeMap<Occupation, BTreeMap<Occupation, Complex64>> = BTreeMap::new();
        for (occ, amp) in &self.terms {
            let (mut traced, mut kept) = (Vec::new(), Vec::new());
            for (i, &n) in occ.iter().enumerate() {
                if mask[i] {
                    traced.push(n);
                } else {
                    kept.push(n);
                }
            }
            groups.entry(traced).or_default().insert(kept, *amp);
        }
        let mut ensemble = Ensemble::empty(kept_reg.clone());
        for (_, terms) in groups {
            ensemble.push_unnormalized(1.0, Self::from_map(kept_reg.clone(), terms));
        }
        Ok(ensemble)
    }

    /// Same amplitudes with modes renamed.
    pub fn relabel(&self, renames: &[(&str, &str)]) -> Result<Self> {
        let registry = self.registry.relabeled(renames)?;
        Ok(Self { registry, terms: self.terms.clone() })
    }

    /// Moves the state onto `target`, which must hold the same labels and
    /// cutoffs in a possibly different order.
    pub fn reorder(&self, target: &Arc<ModeRegistry>) -> Result<Self> {
        if target.len() != self.registry.len() {
            return Err(Error::RegistryMismatch);
        }
        let mut perm = Vec::with_capacity(target.len());
        for label in target.labels() {
            let id = self.registry.id(label)?;
            if self.registry.cutoff(id) != target.cutoff(target.id(label)?) {
                return Err(Error::RegistryMismatch);
            }
            perm.push(id.0);
        }
        let terms = self
            .terms
            .iter()
            .map(|(occ, a)| (perm.iter().map(|&p| occ[p]).collect(), *a))
            .collect();
        Ok(Self { registry: target.clone(), terms })
    }

    /// Keeps only terms for which `keep` returns true.
    pub fn filter<F: Fn(&[u8]) -> bool>(&self, keep: F) -> Self {
        let terms = self.terms.iter().filter(|(o, _)| keep(o)).map(|(o, a)| (o.clone(), *a)).collect();
        Self { registry: self.registry.clone(), terms }
    }

    /// Applies a map that sends each basis ket to a (possibly empty) list of
    /// kets, accumulating amplitudes. Every produced occupation is checked
    /// against the registry.
    pub fn map_kets<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&[u8], &mut Vec<(Occupation, Complex64)>) -> Result<()>,
    {
        let mut out: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        let mut buf = Vec::new();
        for (occ, amp) in &self.terms {
            buf.clear();
            f(occ, &mut buf)?;
            for (o, c) in buf.drain(..) {
                self.registry.check(&o)?;
                *out.entry(o).or_insert(Complex64::new(0.0, 0.0)) += amp * c;
            }
        }
        Ok(Self::from_map(self.registry.clone(), out))
    }

    /// Total excitation number of every term, or `None` when the terms
    /// disagree.
    pub fn excitation_number(&self, modes: &[ModeId]) -> Option<usize> {
        let mut it = self.terms.keys().map(|o| modes.iter().map(|m| o[m.0] as usize).sum::<usize>());
        let first = it.next()?;
        it.all(|n| n == first).then_some(first)
    }

    /// Compact ket notation, e.g. `0.5|01>+0.866025|10>`; unit amplitudes
    /// print as bare kets.
    pub fn to_ket_string(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        if self.terms.is_empty() {
            s.push('0');
            return s;
        }
        for (i, (occ, a)) in self.terms.iter().enumerate() {
            let coeff = format_coeff(*a);
            if i > 0 && !coeff.starts_with('-') {
                s.push('+');
            }
            s.push_str(&coeff);
            s.push('|');
            for n in occ {
                let _ = write!(s, "{n}");
            }
            s.push('>');
        }
        s
    }
}

fn format_coeff(a: Complex64) -> String {
    let clean = |x: f64| {
        let r = libm::round(x * 1e6) / 1e6;
        if r == 0.0 { 0.0 } else { r }
    };
    let (re, im) = (clean(a.re), clean(a.im));
    if im == 0.0 {
        if re == 1.0 {
            String::new()
        } else if re == -1.0 {
            String::from("-")
        } else {
            alloc::format!("{re}")
        }
    } else if re == 0.0 {
        alloc::format!("{im}i")
    } else {
        alloc::format!("({re}{im:+}i)")
    }
}

fn to_occupation(registry: &ModeRegistry, occupation: &[usize]) -> Result<Occupation> {
    if occupation.len() != registry.len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "occupation tuple has {} entries, registry has {} modes",
            occupation.len(),
            registry.len()
        )));
    }
    for (i, &n) in occupation.iter().enumerate() {
        registry.check_mode(ModeId(i), n)?;
    }
    let occ: Occupation = occupation.iter().map(|&n| n as u8).collect();
    registry.check(&occ)?;
    Ok(occ)
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ket_string())
    }
}
