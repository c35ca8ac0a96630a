use crate::diagram::VertexId;
use crate::error::{Error, Result};

use super::{CylinderMeasure, MarkovMeasure, PeriodicMeasure};

/// An ergodic building block of a mixture.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Periodic(PeriodicMeasure),
    Markov(MarkovMeasure),
}

impl Component {
    /// Exact entropy: 0 for periodic orbits, the entropy rate for chains.
    pub fn entropy(&self) -> f64 {
        match self {
            Component::Periodic(_) => 0.0,
            Component::Markov(m) => m.entropy_rate(),
        }
    }

    /// Diagram vertices carrying the component, ascending.
    pub fn support(&self) -> Vec<VertexId> {
        match self {
            Component::Periodic(p) => {
                let mut v = p.path().to_vec();
                v.sort_unstable();
                v.dedup();
                v
            }
            Component::Markov(m) => m.vertex_set(),
        }
    }
}

impl From<PeriodicMeasure> for Component {
    fn from(p: PeriodicMeasure) -> Self {
        Component::Periodic(p)
    }
}

impl From<MarkovMeasure> for Component {
    fn from(m: MarkovMeasure) -> Self {
        Component::Markov(m)
    }
}

impl CylinderMeasure for Component {
    fn mass(&self, w: &[u8]) -> f64 {
        match self {
            Component::Periodic(p) => p.mass(w),
            Component::Markov(m) => m.mass(w),
        }
    }

    fn max_depth(&self) -> usize {
        usize::MAX
    }

    fn alphabet_size(&self) -> usize {
        match self {
            Component::Periodic(p) => p.alphabet_size(),
            Component::Markov(m) => m.alphabet_size(),
        }
    }
}

/// `Σ aᵢ μᵢ` with `aᵢ ≥ 0`, `Σ aᵢ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureMeasure {
    components: Vec<(f64, Component)>,
}

impl MixtureMeasure {
    pub fn new(components: Vec<(f64, Component)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParam("mixture needs at least one component".into()));
        }
        if components.iter().any(|(a, _)| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidParam("mixture weights must be nonnegative".into()));
        }
        let s: f64 = components.iter().map(|(a, _)| a).sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParam(format!("mixture weights sum to {}", s)));
        }
        Ok(Self { components })
    }

    pub fn single(c: impl Into<Component>) -> Self {
        Self { components: vec![(1.0, c.into())] }
    }

    pub fn components(&self) -> &[(f64, Component)] {
        &self.components
    }

    /// Affine entropy `Σ aᵢ h(μᵢ)`.
    pub fn entropy(&self) -> f64 {
        self.components.iter().map(|(a, c)| a * c.entropy()).sum()
    }
}

impl CylinderMeasure for MixtureMeasure {
    fn mass(&self, w: &[u8]) -> f64 {
        self.components.iter().map(|(a, c)| a * c.mass(w)).sum()
    }

    fn max_depth(&self) -> usize {
        usize::MAX
    }

    fn alphabet_size(&self) -> usize {
        self.components.iter().map(|(_, c)| c.alphabet_size()).max().unwrap_or(0)
    }
}
