use std::collections::HashMap;

use super::CylinderMeasure;

/// Weight `2^{-m-1}` of depth `m` in the weak* distance.
pub fn level_weight(m: usize) -> f64 {
    0.5f64.powi(m as i32 + 1)
}

/// `D_M(μ,ν) = Σ_{m≤M} 2^{-m-1} Σ_{|w|=m} |μ[w] − ν[w]|`.
///
/// Only words with positive mass under one of the two measures are visited;
/// a word of zero mass under both has zero-mass extensions.
pub fn weak_star_distance<A, B>(mu: &A, nu: &B, depth: usize) -> f64
where
    A: CylinderMeasure + ?Sized,
    B: CylinderMeasure + ?Sized,
{
    let k = mu.alphabet_size().max(nu.alphabet_size()) as u8;
    let mut total = 0.0;
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() == depth {
            continue;
        }
        for a in 1..=k {
            let mut u = w.clone();
            u.push(a);
            let (p, q) = (mu.mass(&u), nu.mass(&u));
            if p == 0.0 && q == 0.0 {
                continue;
            }
            total += level_weight(u.len()) * (p - q).abs();
            stack.push(u);
        }
    }
    total
}

/// Cached cylinder masses of a reference measure up to a fixed depth, for
/// fast distances to many empirical measures of words.
#[derive(Debug, Clone)]
pub struct MassTable {
    depth: usize,
    k: usize,
    masses: HashMap<Vec<u8>, f64>,
    level_totals: Vec<f64>,
}

impl MassTable {
    pub fn new<M: CylinderMeasure + ?Sized>(mu: &M, depth: usize) -> Self {
        let k = mu.alphabet_size() as u8;
        let mut masses = HashMap::new();
        let mut level_totals = vec![0.0; depth + 1];
        let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            if w.len() == depth {
                continue;
            }
            for a in 1..=k {
                let mut u = w.clone();
                u.push(a);
                let p = mu.mass(&u);
                if p > 0.0 {
                    level_totals[u.len()] += p;
                    masses.insert(u.clone(), p);
                    stack.push(u);
                }
            }
        }
        Self { depth, k: k as usize, masses, level_totals }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn mass(&self, w: &[u8]) -> f64 {
        self.masses.get(w).copied().unwrap_or(0.0)
    }

    /// Words of positive mass with their masses, in no particular order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u8], f64)> {
        self.masses.iter().map(|(w, &p)| (w.as_slice(), p))
    }

    /// `Σ_{|w|=m} μ[w]` over the cached words.
    pub fn level_total(&self, m: usize) -> f64 {
        self.level_totals[m]
    }

    /// `D_M` between the cached measure and the in-window empirical measure
    /// of `w` (requires `|w| ≥ M`).
    pub fn distance_to_word(&self, w: &[u8]) -> f64 {
        let n = w.len();
        let mut total = 0.0;
        let mut counts: HashMap<&[u8], usize> = HashMap::new();
        for m in 1..=self.depth.min(n) {
            counts.clear();
            for win in w.windows(m) {
                *counts.entry(win).or_insert(0) += 1;
            }
            let windows = (n - m + 1) as f64;
            // Words absent from w contribute μ[u]; correct the ones present.
            let mut level = self.level_totals[m];
            for (u, &c) in &counts {
                let p = self.mass(u);
                level += (p - c as f64 / windows).abs() - p;
            }
            total += level_weight(m) * level;
        }
        total
    }
}
