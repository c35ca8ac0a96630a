//! Shift-invariant measures described by their cylinder masses.

mod approx;
mod empirical;
mod markov;
mod metric;
mod mixture;
mod periodic;
mod serial;

pub use approx::{delta_sweep, ergodic_approximation, ergodic_approximation_with, switching_chain, Approximation, ApproxReport, SweepStep, DEFAULT_HALVINGS};
pub use empirical::{empirical_measure_of_word, EmpiricalMeasure};
pub use markov::{markov_cylinder_mass, parry_measure, stationary_distribution, MarkovMeasure};
pub use metric::{level_weight, weak_star_distance, MassTable};
pub use mixture::{Component, MixtureMeasure};
pub use periodic::{periodic_measure, PeriodicMeasure};
pub use serial::{format_measure, parse_measure};

/// Anything that answers "mass of the cylinder `[w]`".
pub trait CylinderMeasure {
    /// `μ[w]`; the empty word has mass 1.
    fn mass(&self, w: &[u8]) -> f64;

    /// Depth up to which masses are meaningful. Exact measures return `usize::MAX`.
    fn max_depth(&self) -> usize;

    /// Symbols are drawn from `1..=alphabet_size()`.
    fn alphabet_size(&self) -> usize;
}

impl<T: CylinderMeasure + ?Sized> CylinderMeasure for &T {
    fn mass(&self, w: &[u8]) -> f64 {
        (**self).mass(w)
    }

    fn max_depth(&self) -> usize {
        (**self).max_depth()
    }

    fn alphabet_size(&self) -> usize {
        (**self).alphabet_size()
    }
}
