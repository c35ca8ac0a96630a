//! Entropy computations. Natural logarithms throughout.
//!
//! The sequence metric is `d(x, y) = 2^{-(t-1)}` with `t` the first index
//! where `x` and `y` differ, so `d ≤ 2^{-m}` iff the first `m` coordinates
//! agree and every Bowen ball is a cylinder. The scale is given as `m`.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::arith::Word;
use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};
use crate::graph;
use crate::measures::{CylinderMeasure, MarkovMeasure};

pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 100_000;

/// Default resolution of the `s` grid used by [`bowen_upper`].
pub const DEFAULT_GRID_STEP: f64 = 0.01;

/// A lower/upper pair with a note on how it was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub lower: f64,
    pub upper: f64,
    pub method: String,
}

impl EntropyEstimate {
    pub fn new(lower: f64, upper: f64, method: impl Into<String>) -> Self {
        debug_assert!(lower <= upper + 1e-12);
        Self { lower, upper, method: method.into() }
    }
}

fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// `(1/n) Σ_{|w|=n} −μ[w] log μ[w]`.
pub fn block_entropy<M: CylinderMeasure + ?Sized>(mu: &M, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParam("block length must be positive".into()));
    }
    if n > mu.max_depth() {
        return Err(Error::DepthTooLarge { requested: n, available: mu.max_depth() });
    }
    let k = mu.alphabet_size() as u8;
    let mut total = 0.0;
    // Depth-first over words with positive mass; consistency makes zero
    // masses absorbing.
    let mut stack: Vec<Vec<u8>> = (1..=k).rev().map(|a| vec![a]).collect();
    while let Some(w) = stack.pop() {
        let m = mu.mass(&w);
        if m <= 0.0 {
            continue;
        }
        if w.len() == n {
            total -= xlogx(m);
            continue;
        }
        for a in (1..=k).rev() {
            let mut next = w.clone();
            next.push(a);
            stack.push(next);
        }
    }
    Ok(total / n as f64)
}

/// `−Σ πᵢ P_ij log P_ij`.
pub fn markov_entropy_rate(m: &MarkovMeasure) -> f64 {
    m.entropy_rate()
}

/// Perron root and a positive right eigenvector of an irreducible
/// nonnegative matrix.
///
/// Power iteration runs on `M + I`, which has the same eigenvectors and is
/// aperiodic, so periodic matrices converge too.
pub fn perron(m: &DMatrix<f64>) -> Result<(f64, Vec<f64>)> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::InvalidParam("matrix must be square and nonempty".into()));
    }
    if m.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidParam("matrix must be nonnegative".into()));
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| m[(i, j)] > 0.0).collect()).collect();
    if !graph::is_strongly_connected(&adj) {
        return Err(Error::NotIrreducible);
    }
    let shifted = m + DMatrix::identity(n, n);
    let mut v = nalgebra::DVector::from_element(n, 1.0 / n as f64);
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        let w = &shifted * &v;
        let norm = w.sum();
        let next = w / norm;
        let lambda = norm - 1.0;
        // relative residual of M v = λ v
        let mv = m * &next;
        residual = (&mv - &next * lambda).amax() / (lambda.abs().max(1e-300) * next.amax());
        v = next;
        if residual < POWER_TOL {
            return Ok((lambda, v.iter().copied().collect()));
        }
    }
    Err(Error::NoConvergence { iterations: POWER_MAX_ITER, residual })
}

/// Perron root of an irreducible nonnegative matrix.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    perron(m).map(|(l, _)| l)
}

/// Spectral radius of an arbitrary 0/1 transition structure: the largest
/// Perron root over its strongly connected components (0 if acyclic).
pub fn spectral_radius_reducible(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| m[(i, j)] > 0.0).collect()).collect();
    let mut best: f64 = 0.0;
    for comp in graph::strongly_connected_components(&adj) {
        let sub = DMatrix::from_fn(comp.len(), comp.len(), |i, j| m[(comp[i], comp[j])]);
        match perron(&sub) {
            Ok((l, _)) => best = best.max(l),
            Err(Error::NotIrreducible) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Spectral radius of the transition matrix of the whole built diagram.
pub fn diagram_spectral_radius(diagram: &Diagram) -> Result<f64> {
    let all: Vec<VertexId> = (0..diagram.len()).collect();
    spectral_radius_reducible(&diagram.transition_matrix(&all))
}

/// `(n, (1/n) log #𝓛_n)` for `n = 1..=n_max`.
pub fn language_growth_entropy(diagram: &Diagram, n_max: usize) -> Result<Vec<(usize, f64)>> {
    (1..=n_max)
        .map(|n| diagram.language_count(n).map(|c| (n, (c as f64).ln() / n as f64)))
        .collect()
}

/// `B_n(x, 2^{-m})` is the cylinder on the first `n + m − 1` coordinates.
pub fn bowen_ball_depth(n: usize, m: usize) -> usize {
    assert!(n >= 1 && m >= 1, "bowen_ball_depth needs n, m >= 1");
    n + m - 1
}

/// A finite prefix-closed set of words, seen through its level sizes.
pub trait PrefixTree {
    /// Depths at which the level size is known, ascending.
    fn depths(&self) -> Vec<usize>;
    /// `log #(prefixes of length depth)`.
    fn log_count(&self, depth: usize) -> f64;
}

/// An explicit set of words, closed under prefixes on construction.
#[derive(Debug, Clone, Default)]
pub struct WordTree {
    levels: Vec<BTreeSet<Word>>,
}

impl WordTree {
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut levels: Vec<BTreeSet<Word>> = Vec::new();
        for w in words {
            if levels.len() < w.len() {
                levels.resize(w.len(), BTreeSet::new());
            }
            for n in 1..=w.len() {
                levels[n - 1].insert(Word::from(&w.symbols()[..n]));
            }
        }
        Self { levels }
    }

    pub fn max_depth(&self) -> usize {
        self.levels.len()
    }
}

impl PrefixTree for WordTree {
    fn depths(&self) -> Vec<usize> {
        (1..=self.levels.len()).collect()
    }

    fn log_count(&self, depth: usize) -> f64 {
        (self.levels[depth - 1].len() as f64).ln()
    }
}

/// The language of paths inside a vertex subset, counted by transfer matrix.
#[derive(Debug, Clone)]
pub struct SubgraphLanguageTree {
    log_counts: Vec<f64>,
}

impl SubgraphLanguageTree {
    /// Counts labelled paths of each length `1..=max_depth` inside `subset`.
    /// The subset must be deterministic per label (true for base vertices and
    /// any set with distinct labels per successor), so paths count words.
    pub fn new(diagram: &Diagram, subset: &[VertexId], max_depth: usize) -> Self {
        let adj = diagram.induced_adjacency(subset);
        let mut counts = vec![1.0f64; subset.len()];
        let mut log_scale = 0.0;
        let mut log_counts = Vec::with_capacity(max_depth);
        for n in 1..=max_depth {
            if n > 1 {
                let mut next = vec![0.0; subset.len()];
                for (u, succ) in adj.iter().enumerate() {
                    for &v in succ {
                        next[v] += counts[u];
                    }
                }
                counts = next;
            }
            let total: f64 = counts.iter().sum();
            log_counts.push(total.ln() + log_scale);
            if total > 1e200 {
                counts.iter_mut().for_each(|c| *c /= total);
                log_scale += total.ln();
            }
        }
        Self { log_counts }
    }
}

impl PrefixTree for SubgraphLanguageTree {
    fn depths(&self) -> Vec<usize> {
        (1..=self.log_counts.len()).collect()
    }

    fn log_count(&self, depth: usize) -> f64 {
        self.log_counts[depth - 1]
    }
}

/// Upper estimate of `h_top(σ, Z, 2^{-m})` from uniform-depth cylinder covers.
///
/// A cover by all depth-`N` prefixes costs `#prefixes · e^{−s(N−m+1)}`. The
/// estimate is the smallest grid value `s` for which that cost is at most 1
/// for some `N` in the upper half of the available depths.
pub fn bowen_upper<T: PrefixTree + ?Sized>(tree: &T, m: usize, grid_step: f64) -> Result<f64> {
    let depths: Vec<usize> = tree.depths().into_iter().filter(|&n| n + 1 > m).collect();
    let max = *depths.last().ok_or(Error::EmptyTree)?;
    let n_min = max.div_ceil(2);
    let s = depths
        .iter()
        .filter(|&&n| n >= n_min)
        .map(|&n| tree.log_count(n) / (n + 1 - m) as f64)
        .fold(f64::INFINITY, f64::min);
    if !s.is_finite() {
        return Err(Error::EmptyTree);
    }
    Ok(((s / grid_step) - 1e-9).ceil().max(0.0) * grid_step)
}

/// Certified lower bound from a uniform-branching Moran tree: the minimum
/// over levels of `log(Π_{j≤k} #Γ'_j) / (N_k + m − 1)`.
///
/// `levels` lists `(log #Γ'_k, n_k)` for `k = 1, 2, …`.
pub fn bowen_lower_moran(levels: &[(f64, usize)], k_max: usize, m: usize) -> Result<f64> {
    if k_max == 0 || levels.len() < k_max {
        return Err(Error::ScheduleTooShort { requested: k_max, available: levels.len() });
    }
    let mut log_count = 0.0;
    let mut n_total = 0usize;
    let mut best = f64::INFINITY;
    for &(lc, n) in &levels[..k_max] {
        log_count += lc;
        n_total += n;
        best = best.min(log_count / (n_total + m - 1) as f64);
    }
    Ok(best.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Params;

    fn mat(rows: &[&[f64]]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
    }

    #[test]
    fn spectral_examples() {
        let golden_silver = spectral_radius(&mat(&[&[0., 0., 1.], &[1., 1., 1.], &[1., 1., 1.]])).unwrap();
        assert!((golden_silver - (1.0 + 2f64.sqrt())).abs() < 1e-10);
        assert_eq!(spectral_radius(&mat(&[&[1., 0.], &[0., 1.]])), Err(Error::NotIrreducible));
        assert!((spectral_radius(&mat(&[&[1., 1.], &[1., 1.]])).unwrap() - 2.0).abs() < 1e-12);
        // periodic matrix
        assert!((spectral_radius(&mat(&[&[0., 1.], &[1., 0.]])).unwrap() - 1.0).abs() < 1e-12);
        assert!((spectral_radius_reducible(&mat(&[&[1., 0.], &[0., 1.]])).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn growth_examples() {
        let p = Params::rational(1, 2, 5, 2).unwrap();
        let d = Diagram::build(&p, 2).unwrap();
        let g = language_growth_entropy(&d, 2).unwrap();
        assert!((g[0].1 - 3f64.ln()).abs() < 1e-12);
        assert!((g[1].1 - 0.5 * 8f64.ln()).abs() < 1e-12);

        let full = Diagram::build(&Params::rational(0, 1, 3, 1).unwrap(), 6).unwrap();
        for (_, h) in language_growth_entropy(&full, 6).unwrap() {
            assert!((h - 3f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn bowen_ball_examples() {
        assert_eq!(bowen_ball_depth(1, 1), 1);
        assert_eq!(bowen_ball_depth(5, 3), 7);
        assert_eq!(bowen_ball_depth(10, 1), 10);
    }

    struct Counts(Vec<f64>);
    impl PrefixTree for Counts {
        fn depths(&self) -> Vec<usize> {
            (1..=self.0.len()).collect()
        }
        fn log_count(&self, depth: usize) -> f64 {
            self.0[depth - 1]
        }
    }

    #[test]
    fn bowen_upper_examples() {
        let binary = Counts((1..=20).map(|n| n as f64 * 2f64.ln()).collect());
        let s = bowen_upper(&binary, 1, DEFAULT_GRID_STEP).unwrap();
        assert!((s - 2f64.ln()).abs() <= DEFAULT_GRID_STEP, "{}", s);
        assert!(s >= 2f64.ln());

        let branch = WordTree::from_words(&[Word(vec![2; 12])]);
        assert_eq!(bowen_upper(&branch, 1, DEFAULT_GRID_STEP).unwrap(), 0.0);
        assert_eq!(bowen_upper(&WordTree::default(), 1, DEFAULT_GRID_STEP), Err(Error::EmptyTree));

        let p = Params::rational(1, 2, 5, 2).unwrap();
        let d = Diagram::build(&p, 2).unwrap();
        let tree = SubgraphLanguageTree::new(&d, &[0, 1, 2], 16);
        let s = bowen_upper(&tree, 1, DEFAULT_GRID_STEP).unwrap();
        assert!((s - (1.0 + 2f64.sqrt()).ln()).abs() < 0.05, "{}", s);
    }

    #[test]
    fn bowen_lower_examples() {
        assert_eq!(bowen_lower_moran(&[(0.0, 4), (0.0, 8)], 2, 1).unwrap(), 0.0);
        let full: Vec<(f64, usize)> = [5usize, 7, 9].iter().map(|&l| (l as f64 * 2f64.ln(), l)).collect();
        assert!((bowen_lower_moran(&full, 3, 1).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!(bowen_lower_moran(&full, 3, 2).unwrap() < 2f64.ln());
        assert!(matches!(bowen_lower_moran(&full, 4, 1), Err(Error::ScheduleTooShort { .. })));
    }
}
