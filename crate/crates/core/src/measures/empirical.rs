use std::collections::HashMap;

use crate::arith::Word;
use crate::error::{Error, Result};

use super::CylinderMeasure;

/// In-window subword frequencies of a finite word, meaningful up to depth `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    word: Word,
    depth: usize,
    k: usize,
    counts: HashMap<Vec<u8>, usize>,
}

impl EmpiricalMeasure {
    pub fn new(w: &Word, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParam("depth must be at least 1".into()));
        }
        if depth > w.len() {
            return Err(Error::DepthTooLarge { requested: depth, available: w.len() });
        }
        let s = w.symbols();
        let mut counts = HashMap::new();
        for m in 1..=depth {
            for win in s.windows(m) {
                *counts.entry(win.to_vec()).or_insert(0) += 1;
            }
        }
        let k = s.iter().copied().max().unwrap_or(0) as usize;
        Ok(Self { word: w.clone(), depth, k, counts })
    }

    /// Widen the alphabet used when enumerating cylinders.
    pub fn with_alphabet(mut self, k: usize) -> Self {
        self.k = self.k.max(k);
        self
    }

    pub fn word(&self) -> &Word {
        &self.word
    }
}

pub fn empirical_measure_of_word(w: &Word, depth: usize) -> Result<EmpiricalMeasure> {
    EmpiricalMeasure::new(w, depth)
}

impl CylinderMeasure for EmpiricalMeasure {
    fn mass(&self, u: &[u8]) -> f64 {
        if u.is_empty() {
            return 1.0;
        }
        let n = self.word.len();
        if u.len() > n {
            return 0.0;
        }
        let c = if u.len() <= self.depth {
            self.counts.get(u).copied().unwrap_or(0)
        } else {
            self.word.symbols().windows(u.len()).filter(|w| *w == u).count()
        };
        c as f64 / (n - u.len() + 1) as f64
    }

    fn max_depth(&self) -> usize {
        self.depth
    }

    fn alphabet_size(&self) -> usize {
        self.k
    }
}
