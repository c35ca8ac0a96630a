//! The word sets `Γ`: admissible words on a vertex set whose empirical
//! measures lie within `ε` of a reference measure.
//!
//! Short lengths are enumerated outright. Long lengths use a product form:
//! concatenations of sub-blocks of length `b`, each filtered at the tighter
//! radius `ε − c(M, b)`. The correction `c` bounds the effect of the windows
//! straddling sub-block boundaries, so every product word is a member of the
//! filtered set at radius `ε`.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Word;
use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};
use crate::measures::{level_weight, CylinderMeasure, MarkovMeasure, MassTable};

/// Maximum number of paths enumerated for one word set.
pub const DEFAULT_ENUM_BUDGET: usize = 1 << 21;

/// Largest dense mass table per level before falling back to hashing.
const DENSE_LIMIT: usize = 1 << 20;

/// `c(M, b) = Σ_{m=2}^{M} 2^{-m} (m−1)/b`: worst-case `D_M` shift caused by
/// concatenating sub-blocks of length `b`.
pub fn block_correction(depth: usize, b: usize) -> f64 {
    (2..=depth).map(|m| 2.0 * level_weight(m) * (m - 1) as f64 / b as f64).sum()
}

/// `D_M` to the reference measure for many words, with dense per-level
/// tables when the alphabet and depth are small.
struct Scorer<'a> {
    table: &'a MassTable,
    base: usize,
    dense: Option<Vec<Vec<f64>>>,
}

impl<'a> Scorer<'a> {
    fn new(table: &'a MassTable) -> Self {
        let base = table.alphabet_size() + 1;
        let depth = table.depth();
        let fits = (1..=depth).try_fold(1usize, |acc, _| acc.checked_mul(base)).is_some_and(|n| n <= DENSE_LIMIT);
        let dense = fits.then(|| {
            let mut levels: Vec<Vec<f64>> = (0..=depth).map(|m| vec![0.0; base.pow(m as u32)]).collect();
            for (w, p) in table.iter() {
                levels[w.len()][Self::code(base, w)] = p;
            }
            levels
        });
        Self { table, base, dense }
    }

    fn code(base: usize, w: &[u8]) -> usize {
        w.iter().fold(0, |c, &a| c * base + a as usize)
    }

    fn distance(&self, w: &[u8], counts: &mut Vec<Vec<u32>>, touched: &mut Vec<usize>) -> f64 {
        let Some(dense) = &self.dense else {
            return self.table.distance_to_word(w);
        };
        if counts.is_empty() {
            *counts = dense.iter().map(|l| vec![0; l.len()]).collect();
        }
        let n = w.len();
        let mut total = 0.0;
        for m in 1..=self.table.depth().min(n) {
            touched.clear();
            for win in w.windows(m) {
                let c = Self::code(self.base, win);
                if counts[m][c] == 0 {
                    touched.push(c);
                }
                counts[m][c] += 1;
            }
            let windows = (n - m + 1) as f64;
            let mut level = self.table.level_total(m);
            for &c in touched.iter() {
                let p = dense[m][c];
                level += (p - counts[m][c] as f64 / windows).abs() - p;
                counts[m][c] = 0;
            }
            total += level_weight(m) * level;
        }
        total
    }

    fn score_all(&self, words: &[Vec<u8>]) -> Vec<f64> {
        words
            .par_iter()
            .map_init(|| (Vec::new(), Vec::new()), |(c, t), w| self.distance(w, c, t))
            .collect()
    }
}

/// Labelled paths of length `l` inside `f`, one per distinct word, each with
/// the path starting at the smallest vertex id. Sorted by word.
fn enumerate_words(diagram: &Diagram, f: &[VertexId], l: usize, budget: usize) -> Result<Vec<(Vec<u8>, VertexId, VertexId)>> {
    let adj = diagram.induced_adjacency(f);
    let mut paths = vec![1.0f64; f.len()];
    for _ in 1..l {
        let mut next = vec![0.0; f.len()];
        for (u, succ) in adj.iter().enumerate() {
            for &v in succ {
                next[u] += paths[v];
            }
        }
        paths = next;
    }
    let total: f64 = paths.iter().sum();
    if total > budget as f64 {
        return Err(Error::BudgetExceeded(format!("{} paths of length {} exceed the budget {}", total, l, budget)));
    }

    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by_key(|&i| f[i]);
    let mut seen: HashMap<Vec<u8>, (VertexId, VertexId)> = HashMap::new();
    let mut word = Vec::with_capacity(l);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for &s in &order {
        // (local vertex, depth of that vertex in the word)
        stack.push((s, 0));
        while let Some((u, d)) = stack.pop() {
            word.truncate(d);
            word.push(diagram.label(f[u]));
            if d + 1 == l {
                seen.entry(word.clone()).or_insert((f[s], f[u]));
                continue;
            }
            for &v in adj[u].iter().rev() {
                stack.push((v, d + 1));
            }
        }
        word.clear();
    }
    let mut out: Vec<_> = seen.into_iter().map(|(w, (s, e))| (w, s, e)).collect();
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// One member of `Γ` (or one sub-block of a product-form `Γ`) with the first
/// and last vertex of its canonical realizing path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaEntry {
    pub word: Word,
    pub start: VertexId,
    pub end: VertexId,
    pub distance: f64,
}

/// A chosen member of `Γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Selected {
    pub word: Word,
    pub start: VertexId,
    pub end: VertexId,
}

/// How a member of `Γ` is chosen.
pub enum Pick<'a> {
    /// The `i`-th member in lexicographic order; for product sets, the `i`-th
    /// admissible sub-block at every position.
    Fixed(usize),
    /// The member (sub-block) farthest from the reference measure.
    Extreme,
    /// Uniform over `Γ`.
    Random(&'a mut ChaCha8Rng),
}

#[derive(Debug, Clone)]
struct Product {
    block_len: usize,
    reps: usize,
    /// `classes[s][e]`: sub-blocks starting at local vertex `s`, ending at `e`.
    classes: Vec<Vec<Vec<usize>>>,
    local: HashMap<VertexId, usize>,
    arrow: Vec<Vec<bool>>,
    /// `backward[i][e]` ∝ number of completions after position `i` ending at `e`.
    backward: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Gamma {
    len: usize,
    eps: f64,
    depth: usize,
    vertices: Vec<VertexId>,
    entries: Vec<GammaEntry>,
    product: Option<Product>,
    log_count: f64,
}

fn filtered_entries<M: CylinderMeasure + ?Sized>(
    mu: &M,
    f: &[VertexId],
    l: usize,
    radius: f64,
    depth: usize,
    diagram: &Diagram,
    budget: usize,
) -> Result<Vec<GammaEntry>> {
    if depth == 0 {
        return Err(Error::InvalidParam("depth must be at least 1".into()));
    }
    if l < depth {
        return Err(Error::DepthTooLarge { requested: depth, available: l });
    }
    for &v in f {
        if !diagram.is_expanded(v) {
            return Err(Error::DepthInsufficient(format!("vertex {} is not expanded", v)));
        }
    }
    let words = enumerate_words(diagram, f, l, budget)?;
    let table = MassTable::new(mu, depth);
    let scorer = Scorer::new(&table);
    let syms: Vec<Vec<u8>> = words.iter().map(|(w, _, _)| w.clone()).collect();
    let dist = scorer.score_all(&syms);
    Ok(words
        .into_iter()
        .zip(dist)
        .filter(|(_, d)| *d <= radius)
        .map(|((w, start, end), distance)| GammaEntry { word: Word(w), start, end, distance })
        .collect())
}

/// `Γ` by full enumeration of the length-`l` words on `f`.
pub fn build_gamma_on<M: CylinderMeasure + ?Sized>(
    mu: &M,
    f: &[VertexId],
    l: usize,
    eps: f64,
    depth: usize,
    diagram: &Diagram,
    budget: usize,
) -> Result<Gamma> {
    let entries = filtered_entries(mu, f, l, eps, depth, diagram, budget)?;
    let log_count = (entries.len() as f64).ln();
    Ok(Gamma { len: l, eps, depth, vertices: sorted(f), entries, product: None, log_count })
}

/// `Γ` for a Markov measure on its own vertex set, by full enumeration.
pub fn build_gamma(rho: &MarkovMeasure, l: usize, eps: f64, depth: usize, diagram: &Diagram) -> Result<Gamma> {
    build_gamma_on(rho, &rho.vertex_set(), l, eps, depth, diagram, DEFAULT_ENUM_BUDGET)
}

fn sorted(f: &[VertexId]) -> Vec<VertexId> {
    let mut v = f.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Product-form subset of `Γ`: words made of `l / b` sub-blocks of length `b`
/// that chain along arrows, each sub-block within `ε − c(M, b)`.
#[allow(clippy::too_many_arguments)]
pub fn build_gamma_blocks<M: CylinderMeasure + ?Sized>(
    mu: &M,
    f: &[VertexId],
    l: usize,
    b: usize,
    eps: f64,
    depth: usize,
    diagram: &Diagram,
    budget: usize,
) -> Result<Gamma> {
    if b == 0 || l % b != 0 {
        return Err(Error::InvalidParam(format!("length {} is not a multiple of block length {}", l, b)));
    }
    let radius = eps - block_correction(depth, b);
    if radius <= 0.0 {
        return Err(Error::InvalidParam(format!("block length {} too short for radius {} at depth {}", b, eps, depth)));
    }
    let entries = filtered_entries(mu, f, b, radius, depth, diagram, budget)?;
    let vertices = sorted(f);
    let n = vertices.len();
    let local: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let arrow: Vec<Vec<bool>> =
        vertices.iter().map(|&u| vertices.iter().map(|&v| diagram.has_arrow(u, v)).collect()).collect();
    let mut classes = vec![vec![Vec::new(); n]; n];
    for (i, e) in entries.iter().enumerate() {
        classes[local[&e.start]][local[&e.end]].push(i);
    }
    // a[e][e'] = number of sub-blocks that may follow a sub-block ending at e and end at e'.
    let a: Vec<Vec<f64>> = (0..n)
        .map(|e| {
            (0..n)
                .map(|e2| (0..n).filter(|&s| arrow[e][s]).map(|s| classes[s][e2].len() as f64).sum())
                .collect()
        })
        .collect();
    let reps = l / b;

    let mut v: Vec<f64> = (0..n).map(|e| (0..n).map(|s| classes[s][e].len() as f64).sum()).collect();
    let mut log_scale = 0.0;
    for _ in 1..reps {
        let mut next = vec![0.0; n];
        for (e, &ve) in v.iter().enumerate() {
            if ve > 0.0 {
                for (e2, x) in next.iter_mut().enumerate() {
                    *x += ve * a[e][e2];
                }
            }
        }
        let s: f64 = next.iter().sum();
        if s > 0.0 {
            next.iter_mut().for_each(|x| *x /= s);
            log_scale += s.ln();
        }
        v = next;
    }
    let log_count = v.iter().sum::<f64>().ln() + log_scale;

    let mut backward = vec![vec![1.0; n]; reps];
    for i in (0..reps.saturating_sub(1)).rev() {
        let w: Vec<f64> = (0..n).map(|e| (0..n).map(|e2| a[e][e2] * backward[i + 1][e2]).sum()).collect();
        let s: f64 = w.iter().sum();
        backward[i] = if s > 0.0 { w.into_iter().map(|x| x / s).collect() } else { w };
    }

    Ok(Gamma {
        len: l,
        eps,
        depth,
        vertices,
        entries,
        product: Some(Product { block_len: b, reps, classes, local, arrow, backward }),
        log_count,
    })
}

impl Gamma {
    /// Word length `l`.
    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// `log #Γ` (`−∞` when empty).
    pub fn log_count(&self) -> f64 {
        self.log_count
    }

    pub fn is_empty(&self) -> bool {
        self.log_count == f64::NEG_INFINITY
    }

    pub fn is_product(&self) -> bool {
        self.product.is_some()
    }

    /// Sub-block length of a product set.
    pub fn block_len(&self) -> Option<usize> {
        self.product.as_ref().map(|p| p.block_len)
    }

    /// The members of an enumerated set, or the sub-blocks of a product set.
    pub fn entries(&self) -> &[GammaEntry] {
        &self.entries
    }

    /// `#Γ ≥ exp(l (h − ε))`.
    pub fn meets_cardinality(&self, h: f64, eps: f64) -> bool {
        self.log_count >= self.len as f64 * (h - eps) - 1e-9
    }

    /// Chooses a member; `None` when a fixed index is out of range or `Γ` is empty.
    pub fn select(&self, pick: &mut Pick<'_>) -> Option<Selected> {
        if self.is_empty() {
            return None;
        }
        let Some(p) = &self.product else {
            let e = match pick {
                Pick::Fixed(i) => self.entries.get(*i)?,
                Pick::Extreme => self.farthest(self.entries.iter().enumerate().map(|(i, _)| i))?,
                Pick::Random(rng) => &self.entries[rng.random_range(0..self.entries.len())],
            };
            return Some(Selected { word: e.word.clone(), start: e.start, end: e.end });
        };
        let mut word = Vec::with_capacity(self.len);
        let mut start = None;
        let mut prev: Option<usize> = None;
        for i in 0..p.reps {
            let valid = |x: &GammaEntry| {
                let (s, e) = (p.local[&x.start], p.local[&x.end]);
                prev.is_none_or(|pe| p.arrow[pe][s]) && p.backward[i][e] > 0.0
            };
            let chosen = match pick {
                Pick::Fixed(n) => self.entries.iter().filter(|x| valid(x)).nth(*n)?,
                Pick::Extreme => self.farthest((0..self.entries.len()).filter(|&j| valid(&self.entries[j])))?,
                Pick::Random(rng) => {
                    let n = p.classes.len();
                    let mut weights = Vec::with_capacity(n * n);
                    for s in 0..n {
                        for e in 0..n {
                            let ok = prev.is_none_or(|pe| p.arrow[pe][s]);
                            let w = if ok { p.classes[s][e].len() as f64 * p.backward[i][e] } else { 0.0 };
                            weights.push(w);
                        }
                    }
                    let total: f64 = weights.iter().sum();
                    if total <= 0.0 {
                        return None;
                    }
                    let mut u = rng.random::<f64>() * total;
                    let mut idx = weights.iter().rposition(|&w| w > 0.0)?;
                    for (j, &w) in weights.iter().enumerate() {
                        if u < w {
                            idx = j;
                            break;
                        }
                        u -= w;
                    }
                    let class = &p.classes[idx / n][idx % n];
                    &self.entries[class[rng.random_range(0..class.len())]]
                }
            };
            start.get_or_insert(chosen.start);
            word.extend_from_slice(chosen.word.symbols());
            prev = Some(p.local[&chosen.end]);
        }
        let end = self.vertices[prev?];
        Some(Selected { word: Word(word), start: start?, end })
    }

    fn farthest(&self, idx: impl Iterator<Item = usize>) -> Option<&GammaEntry> {
        let mut best: Option<&GammaEntry> = None;
        for i in idx {
            let e = &self.entries[i];
            if best.is_none_or(|b| e.distance > b.distance) {
                best = Some(e);
            }
        }
        best
    }
}
