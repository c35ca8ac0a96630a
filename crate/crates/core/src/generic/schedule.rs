use std::fmt::Write as _;

use serde::Serialize;

use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};
use crate::measures::{ergodic_approximation, MarkovMeasure, MixtureMeasure};

use super::gamma::{build_gamma_blocks, build_gamma_on, Gamma, DEFAULT_ENUM_BUDGET};

/// Knobs of [`auto_schedule`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleOptions {
    /// Initial switching rate handed to the ergodic approximation.
    pub delta: f64,
    /// Sub-block length of product-form word sets.
    pub block_len: usize,
    /// Largest number of paths enumerated for one word set.
    pub enum_budget: usize,
    /// Lower bound on every `l_j`.
    pub min_len: usize,
    /// The doubling search for `l_j` gives up beyond this length.
    pub max_len: usize,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        Self { delta: 0.01, block_len: 16, enum_budget: DEFAULT_ENUM_BUDGET, min_len: 1, max_len: 1 << 14 }
    }
}

/// One outer block `j`: the data `(ε_j, 𝓕_j, μ_j, l_j, L_j, Γ_j)`.
#[derive(Debug, Clone)]
pub struct Block {
    pub eps: f64,
    pub vertices: Vec<VertexId>,
    pub measure: MarkovMeasure,
    /// `h(μ_j)`.
    pub entropy: f64,
    /// `D_M(μ, μ_j)`.
    pub distance: f64,
    pub len: usize,
    pub reps: usize,
    pub gamma: Gamma,
    /// `t(𝓕_j, 𝓕_j)`.
    pub t_self: usize,
    /// `t(𝓕_j, 𝓕_{j+1})`.
    pub t_next: usize,
}

/// One inner level `k = L_1 + … + L_{j−1} + q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Level {
    pub k: usize,
    /// Outer block index `j` (1-based).
    pub block: usize,
    pub q: usize,
    /// `l'_k`.
    pub len: usize,
    /// `t(𝓕'_k, 𝓕'_{k+1})`.
    pub t: usize,
    /// `n_k = l'_k + t_k`.
    pub n: usize,
    /// `N_k = n_1 + … + n_k`.
    pub end: usize,
}

#[derive(Debug, Clone)]
pub struct Schedule {
    pub epsilon: f64,
    pub depth: usize,
    /// `h(μ)` by affinity.
    pub h_mu: f64,
    pub blocks: Vec<Block>,
    /// `𝓕_{J+1}`, used only for the last connecting time.
    pub next_vertices: Vec<VertexId>,
}

/// Result of one schedule invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub index: usize,
    pub holds: bool,
    pub detail: String,
}

/// `ε_j = ε / 2^{j−1}`.
pub fn eps_seq(epsilon: f64, j: usize) -> f64 {
    epsilon / 2f64.powi(j as i32 - 1)
}

fn build_level_gamma(
    rho: &MarkovMeasure,
    f: &[VertexId],
    l: usize,
    eps: f64,
    depth: usize,
    diagram: &Diagram,
    opts: &ScheduleOptions,
) -> Result<Gamma> {
    match build_gamma_on(rho, f, l, eps, depth, diagram, opts.enum_budget) {
        Err(Error::BudgetExceeded(_)) => {
            let b = opts.block_len.max(depth);
            let l = l.div_ceil(b) * b;
            build_gamma_blocks(rho, f, l, b, eps, depth, diagram, opts.enum_budget)
        }
        other => other,
    }
}

/// Smallest `L ≥ 1` with `max{next, S} ≤ ε (S + l L)`.
fn greedy_reps(next: usize, prior: usize, l: usize, eps: f64) -> usize {
    let need = next.max(prior) as f64;
    let mut reps = (((need / eps) - prior as f64) / l as f64).ceil().max(1.0) as usize;
    while need > eps * (prior + l * reps) as f64 {
        reps += 1;
    }
    while reps > 1 && need <= eps * (prior + l * (reps - 1)) as f64 {
        reps -= 1;
    }
    reps
}

/// Builds `J = blocks` outer blocks of the Moran construction for `mu`.
pub fn auto_schedule(
    mu: &MixtureMeasure,
    epsilon: f64,
    blocks: usize,
    depth: usize,
    diagram: &Diagram,
    opts: &ScheduleOptions,
) -> Result<Schedule> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParam(format!("epsilon must lie in (0,1), got {}", epsilon)));
    }
    if blocks == 0 || depth == 0 {
        return Err(Error::InvalidParam("need at least one block and depth at least 1".into()));
    }
    let h_mu = mu.entropy();
    let approx: Vec<_> = (1..=blocks + 1)
        .map(|j| ergodic_approximation(mu, eps_seq(epsilon, j), opts.delta, depth, diagram))
        .collect::<Result<_>>()?;

    let mut out: Vec<Block> = Vec::with_capacity(blocks);
    for j in 1..=blocks {
        let a = &approx[j - 1];
        let eps_j = eps_seq(epsilon, j);
        let f = a.vertices.clone();
        let t_self = diagram.connecting_time(&f, &f)?;
        let t_next = diagram.connecting_time(&f, &approx[j].vertices)?;
        let h = a.rho.entropy_rate();
        let mut l = ((t_self.max(t_next) as f64 / eps_j).ceil() as usize).max(opts.min_len).max(depth).max(1);
        let gamma = loop {
            let g = build_level_gamma(&a.rho, &f, l, eps_j, depth, diagram, opts)?;
            if g.meets_cardinality(h, epsilon) {
                break g;
            }
            if 2 * g.word_len() > opts.max_len {
                return Err(Error::CardinalityShortfall {
                    found: g.log_count(),
                    required: g.word_len() as f64 * (h - epsilon),
                });
            }
            l = 2 * g.word_len();
        };
        out.push(Block {
            eps: eps_j,
            vertices: f,
            measure: a.rho.clone(),
            entropy: h,
            distance: a.report.distance,
            len: gamma.word_len(),
            reps: 0,
            gamma,
            t_self,
            t_next,
        });
    }
    let mut prior = 0;
    for j in 0..blocks {
        let next = out.get(j + 1).map_or(0, |b| b.len);
        let reps = greedy_reps(next, prior, out[j].len, out[j].eps);
        out[j].reps = reps;
        prior += out[j].len * reps;
    }
    let schedule = Schedule {
        epsilon,
        depth,
        h_mu,
        blocks: out,
        next_vertices: approx[blocks].vertices.clone(),
    };
    if let Some(bad) = schedule.check().into_iter().find(|c| !c.holds) {
        return Err(Error::TargetUnreachable(format!("schedule invariant {} fails at {}: {}", bad.name, bad.index, bad.detail)));
    }
    Ok(schedule)
}

/// Shape of an outer block as far as level indexing is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockShape {
    pub len: usize,
    pub reps: usize,
    pub t_self: usize,
    pub t_next: usize,
}

/// Inner levels: block `j` repeated `L_j` times, the last repetition
/// connecting into block `j + 1`.
pub fn expand_blocks(shapes: &[BlockShape]) -> Vec<Level> {
    let mut levels = Vec::new();
    let mut end = 0;
    for (j, b) in shapes.iter().enumerate() {
        for q in 1..=b.reps {
            let t = if q == b.reps { b.t_next } else { b.t_self };
            let n = b.len + t;
            end += n;
            levels.push(Level { k: levels.len() + 1, block: j + 1, q, len: b.len, t, n, end });
        }
    }
    levels
}

/// Inner levels of a schedule.
pub fn expand_schedule(schedule: &Schedule) -> Vec<Level> {
    expand_blocks(&schedule.shapes())
}

impl Schedule {
    pub fn shapes(&self) -> Vec<BlockShape> {
        self.blocks.iter().map(|b| BlockShape { len: b.len, reps: b.reps, t_self: b.t_self, t_next: b.t_next }).collect()
    }

    /// `m_j = L_1 + … + L_j`.
    pub fn block_ends(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                *acc += b.reps;
                Some(*acc)
            })
            .collect()
    }

    pub fn num_levels(&self) -> usize {
        self.blocks.iter().map(|b| b.reps).sum()
    }

    /// The word set `Γ'_k` of an inner level.
    pub fn gamma(&self, level: &Level) -> &Gamma {
        &self.blocks[level.block - 1].gamma
    }

    /// Vertex set `𝓕'_{k+1}` following `level`.
    pub fn vertices_after(&self, level: &Level) -> &[VertexId] {
        let b = &self.blocks[level.block - 1];
        if level.q < b.reps {
            &b.vertices
        } else {
            self.blocks.get(level.block).map_or(&self.next_vertices, |n| &n.vertices)
        }
    }

    /// The first `k_max` inner levels.
    pub fn levels(&self, k_max: usize) -> Result<Vec<Level>> {
        let all = expand_schedule(self);
        if k_max > all.len() {
            return Err(Error::ScheduleTooShort { requested: k_max, available: all.len() });
        }
        Ok(all[..k_max].to_vec())
    }

    /// Levels up to the first `k` with `N_k ≥ target` (all levels if none).
    pub fn levels_until(&self, target: usize) -> Vec<Level> {
        let mut all = expand_schedule(self);
        if let Some(i) = all.iter().position(|l| l.end >= target) {
            all.truncate(i + 1);
        }
        all
    }

    /// Re-validates the five schedule displays in finite form.
    pub fn check(&self) -> Vec<InvariantCheck> {
        let mut out = Vec::new();
        let mut push = |name, index, holds, detail: String| out.push(InvariantCheck { name, index, holds, detail });
        let mut prior = 0usize;
        for (i, b) in self.blocks.iter().enumerate() {
            let j = i + 1;
            push(
                "approximation",
                j,
                b.distance <= b.eps + 1e-12 && self.h_mu - self.epsilon <= b.entropy + 1e-12,
                format!("D = {:.6} vs eps_j = {:.6}; h_j = {:.6} vs h - eps = {:.6}", b.distance, b.eps, b.entropy, self.h_mu - self.epsilon),
            );
            push(
                "cardinality",
                j,
                b.gamma.meets_cardinality(b.entropy, self.epsilon),
                format!("log #Gamma = {:.4} vs l (h_j - eps) = {:.4}", b.gamma.log_count(), b.len as f64 * (b.entropy - self.epsilon)),
            );
            let t = b.t_self.max(b.t_next);
            push(
                "connecting-ratio",
                j,
                t as f64 <= b.eps * b.len as f64 + 1e-12,
                format!("t = {} vs eps_j l_j = {:.4}", t, b.eps * b.len as f64),
            );
            let total = prior + b.len * b.reps;
            let next = self.blocks.get(j).map_or(0, |n| n.len);
            let need = next.max(prior);
            push(
                "block-growth",
                j,
                need as f64 <= b.eps * total as f64 + 1e-9,
                format!("max(l_next, S_prev) = {} vs eps_j S_j = {:.4}", need, b.eps * total as f64),
            );
            prior = total;
        }
        for level in expand_schedule(self) {
            let b = &self.blocks[level.block - 1];
            let t = if level.q < b.reps { b.t_self } else { b.t_next };
            push("level-length", level.k, level.n == level.len + t && level.len == b.len, format!("n = {}, l' = {}, t = {}", level.n, level.len, t));
        }
        out
    }

    /// Human-readable summary, one line per block.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "epsilon {} depth {} h(mu) {:.6}", self.epsilon, self.depth, self.h_mu);
        for (i, b) in self.blocks.iter().enumerate() {
            let _ = writeln!(
                s,
                "block {} eps {:.6} F {:?} h {:.6} D {:.6} l {} L {} t_self {} t_next {} log#Gamma {:.4}{}",
                i + 1,
                b.eps,
                b.vertices,
                b.entropy,
                b.distance,
                b.len,
                b.reps,
                b.t_self,
                b.t_next,
                b.gamma.log_count(),
                b.gamma.block_len().map_or(String::new(), |x| format!(" product b={}", x)),
            );
        }
        s
    }
}
