use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Position of a mode inside a [`ModeRegistry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId(pub usize);

/// Ordered set of labeled bosonic modes, each with an occupation cutoff.
///
/// The order fixes the layout of every occupation tuple built on the
/// registry. Registries are immutable; operations that change the mode set
/// (tensor, partial trace, relabeling) build a new one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeRegistry {
    labels: Vec<String>,
    cutoffs: Vec<usize>,
    global_cap: Option<usize>,
}

impl ModeRegistry {
    pub fn new<S: AsRef<str>>(modes: &[(S, usize)]) -> Result<Arc<Self>> {
        let mut labels: Vec<String> = Vec::with_capacity(modes.len());
        let mut cutoffs = Vec::with_capacity(modes.len());
        for (label, cutoff) in modes {
            let label = label.as_ref();
            if labels.iter().any(|l| l == label) {
                return Err(Error::DuplicateMode(label.to_string()));
            }
            if *cutoff == 0 || *cutoff > u8::MAX as usize {
                return Err(Error::InvalidParameter(alloc::format!(
                    "cutoff {cutoff} for mode {label} must be in 1..=255"
                )));
            }
            labels.push(label.to_string());
            cutoffs.push(*cutoff);
        }
        Ok(Arc::new(Self { labels, cutoffs, global_cap: None }))
    }

    /// Every mode gets the same cutoff.
    pub fn uniform<S: AsRef<str>>(labels: &[S], cutoff: usize) -> Result<Arc<Self>> {
        let modes: Vec<(&str, usize)> = labels.iter().map(|l| (l.as_ref(), cutoff)).collect();
        Self::new(&modes)
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Self { labels: Vec::new(), cutoffs: Vec::new(), global_cap: None })
    }

    /// Adds a cap on the total excitation number across all modes.
    pub fn with_global_cap(&self, cap: usize) -> Arc<Self> {
        Arc::new(Self { global_cap: Some(cap), ..self.clone() })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, id: ModeId) -> &str {
        &self.labels[id.0]
    }

    pub fn cutoff(&self, id: ModeId) -> usize {
        self.cutoffs[id.0]
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn global_cap(&self) -> Option<usize> {
        self.global_cap
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn id(&self, label: &str) -> Result<ModeId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(ModeId)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    /// Checks an occupation tuple against the per-mode cutoffs and the
    /// optional global cap.
    pub fn check(&self, occupation: &[u8]) -> Result<()> {
        if occupation.len() != self.len() {
            return Err(Error::InvalidParameter(alloc::format!(
                "occupation tuple has {} entries, registry has {} modes",
                occupation.len(),
                self.len()
            )));
        }
        for (i, &n) in occupation.iter().enumerate() {
            self.check_mode(ModeId(i), n as usize)?;
        }
        if let Some(cap) = self.global_cap {
            let total: usize = occupation.iter().map(|&n| n as usize).sum();
            if total > cap {
                return Err(Error::CutoffViolation {
                    mode: "<global>".to_string(),
                    occupation: total,
                    cutoff: cap,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn check_mode(&self, id: ModeId, n: usize) -> Result<()> {
        let cutoff = self.cutoffs[id.0];
        if n > cutoff {
            return Err(Error::CutoffViolation {
                mode: self.labels[id.0].clone(),
                occupation: n,
                cutoff,
            });
        }
        Ok(())
    }

    /// Registry holding `self`'s modes followed by `other`'s.
    pub fn concat(&self, other: &ModeRegistry) -> Result<Arc<Self>> {
        if let Some(dup) = other.labels.iter().find(|l| self.contains(l)) {
            return Err(Error::OverlappingModes(dup.clone()));
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.extend(other.cutoffs.iter().copied());
        let global_cap = match (self.global_cap, other.global_cap) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(Arc::new(Self { labels, cutoffs, global_cap }))
    }

    /// Splits the registry into kept and removed positions. Returns the
    /// registry of the kept modes and, for each mode, whether it is removed.
    pub(crate) fn without(&self, removed: &[&str]) -> Result<(Arc<Self>, Vec<bool>)> {
        let mut mask = alloc::vec![false; self.len()];
        for label in removed {
            mask[self.id(label)?.0] = true;
        }
        let mut labels = Vec::new();
        let mut cutoffs = Vec::new();
        for (i, gone) in mask.iter().enumerate() {
            if !gone {
                labels.push(self.labels[i].clone());
                cutoffs.push(self.cutoffs[i]);
            }
        }
        Ok((Arc::new(Self { labels, cutoffs, global_cap: self.global_cap }), mask))
    }

    /// Same modes under new labels. Unlisted modes keep their label.
    pub fn relabeled(&self, renames: &[(&str, &str)]) -> Result<Arc<Self>> {
        let mut labels = self.labels.clone();
        for (from, to) in renames {
            let id = self.id(from)?;
            labels[id.0] = to.to_string();
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateMode(l.clone()));
            }
        }
        Ok(Arc::new(Self { labels, cutoffs: self.cutoffs.clone(), global_cap: self.global_cap }))
    }
}
