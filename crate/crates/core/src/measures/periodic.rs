use crate::arith::Word;
use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};

use super::CylinderMeasure;

/// The equidistribution on the orbit of the periodic point `cycle^∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicMeasure {
    cycle: Word,
    k: usize,
    /// Closed diagram path realizing `cycle^q` for some `q ≥ 1`.
    path: Vec<VertexId>,
}

/// Shortest `p` with `w = (w[..p])^{|w|/p}`.
fn primitive_root(w: &[u8]) -> &[u8] {
    let n = w.len();
    (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| w[i] == w[i - p]))
        .map(|p| &w[..p])
        .unwrap_or(w)
}

/// Closed path labelled by a power of `cycle`, found by walking `cycle^∞`
/// from its base vertex until the vertex at a period boundary repeats.
fn closed_path(cycle: &[u8], diagram: &Diagram) -> Result<Vec<VertexId>> {
    let inadmissible = || Error::Inadmissible(Word(cycle.to_vec()).to_string());
    let first = cycle[0];
    if first == 0 || first as usize > diagram.k() {
        return Err(inadmissible());
    }
    let p = cycle.len();
    let mut path = vec![diagram.base_id(first)];
    let mut marks: Vec<VertexId> = vec![path[0]];
    // Each period boundary lands on some vertex; there are finitely many.
    for _ in 0..=diagram.len() {
        for i in 1..=p {
            let cur = *path.last().unwrap();
            if !diagram.is_expanded(cur) {
                return Err(Error::DepthInsufficient(format!(
                    "walk along {} reached unexpanded vertex {}",
                    Word(cycle.to_vec()),
                    cur
                )));
            }
            let next = diagram.successor(cur, cycle[i % p]).ok_or_else(inadmissible)?;
            path.push(next);
        }
        let end = *path.last().unwrap();
        // `end` sits at a period boundary: its label is cycle[0].
        if let Some(q) = marks.iter().position(|&v| v == end) {
            let start = q * p;
            let mut closed = path[start..].to_vec();
            closed.pop();
            return Ok(closed);
        }
        marks.push(end);
    }
    Err(inadmissible())
}

impl PeriodicMeasure {
    pub fn new(cycle: &Word, diagram: &Diagram) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidParam("empty cycle".into()));
        }
        let root = primitive_root(cycle.symbols()).to_vec();
        let path = closed_path(&root, diagram)?;
        Ok(Self { cycle: Word(root), k: diagram.k(), path })
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// The closed vertex path; its labels spell a power of the cycle.
    pub fn path(&self) -> &[VertexId] {
        &self.path
    }
}

/// `periodic_measure(cycle, diagram)`.
pub fn periodic_measure(cycle: &Word, diagram: &Diagram) -> Result<PeriodicMeasure> {
    PeriodicMeasure::new(cycle, diagram)
}

impl CylinderMeasure for PeriodicMeasure {
    fn mass(&self, w: &[u8]) -> f64 {
        let c = self.cycle.symbols();
        let p = c.len();
        let hits = (0..p)
            .filter(|&i| w.iter().enumerate().all(|(j, &a)| c[(i + j) % p] == a))
            .count();
        hits as f64 / p as f64
    }

    fn max_depth(&self) -> usize {
        usize::MAX
    }

    fn alphabet_size(&self) -> usize {
        self.k
    }
}
