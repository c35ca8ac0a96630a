use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::Word;
use crate::diagram::{Diagram, VertexId};
use crate::entropy::PrefixTree;
use crate::error::{Error, Result};
use crate::measures::{CylinderMeasure, MassTable};

use super::gamma::{Pick, Selected};
use super::schedule::{Level, Schedule};

/// How the word of each level is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    /// The same index at every level (see [`Pick::Fixed`]).
    Fixed(usize),
    /// The member farthest from the block measure at every level.
    Extreme,
    /// Uniform choices from a seeded ChaCha8 stream.
    Random(u64),
}

/// A prefix of a point of `G` with its realizing diagram path.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericPrefix {
    pub word: Word,
    pub path: Vec<VertexId>,
    pub levels: Vec<Level>,
}

impl GenericPrefix {
    /// True iff `path` is a diagram path spelling `word`.
    pub fn is_admissible(&self, diagram: &Diagram) -> bool {
        self.path.len() == self.word.len()
            && diagram.is_path(&self.path)
            && self.path.iter().zip(self.word.symbols()).all(|(&v, &a)| diagram.label(v) == a)
    }
}

fn pick_at(schedule: &Schedule, level: &Level, pick: &mut Pick<'_>) -> Result<Selected> {
    schedule.gamma(level).select(pick).ok_or(Error::SelectorOutOfRange { level: level.k })
}

/// `w¹c¹w²c²…w^K c^K`, of length `N_K`.
///
/// The last connector leads to the start of the next level's word when the
/// schedule has one, and to the smallest vertex of the next vertex set
/// otherwise.
pub fn generic_prefix(schedule: &Schedule, selector: Selector, k_levels: usize, diagram: &Diagram) -> Result<GenericPrefix> {
    let all = super::schedule::expand_schedule(schedule);
    if k_levels == 0 || k_levels > all.len() {
        return Err(Error::ScheduleTooShort { requested: k_levels, available: all.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(match selector {
        Selector::Random(seed) => seed,
        _ => 0,
    });
    let choose = |level: &Level, rng: &mut ChaCha8Rng| -> Result<Selected> {
        let mut pick = match selector {
            Selector::Fixed(i) => Pick::Fixed(i),
            Selector::Extreme => Pick::Extreme,
            Selector::Random(_) => Pick::Random(rng),
        };
        pick_at(schedule, level, &mut pick)
    };

    let mut word: Vec<u8> = Vec::with_capacity(all[k_levels - 1].end);
    let mut path: Vec<VertexId> = Vec::with_capacity(word.capacity());
    let mut current = choose(&all[0], &mut rng)?;
    for k in 0..k_levels {
        let level = &all[k];
        let block_path = diagram
            .follow(current.start, current.word.symbols())?
            .ok_or_else(|| Error::Inadmissible(current.word.to_string()))?;
        word.extend_from_slice(current.word.symbols());
        path.extend_from_slice(&block_path);
        let (next_start, next) = match all.get(k + 1) {
            Some(nl) => {
                let s = choose(nl, &mut rng)?;
                (s.start, Some(s))
            }
            _ => (*schedule.vertices_after(level).iter().min().unwrap(), None),
        };
        let conn = diagram.connecting_path(current.end, next_start, level.t)?;
        let interior = &conn.0[1..conn.0.len() - 1];
        path.extend_from_slice(interior);
        word.extend(interior.iter().map(|&v| diagram.label(v)));
        match next {
            Some(s) => current = s,
            None => break,
        }
    }
    Ok(GenericPrefix { word: Word(word), path, levels: all[..k_levels].to_vec() })
}

/// One Birkhoff checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checkpoint {
    pub k: usize,
    /// `N_k`.
    pub end: usize,
    pub n: usize,
    /// `ε_j` of the block containing level `k`.
    pub eps: f64,
    /// `3ε_j + (M−1)/n_k`.
    pub bound: f64,
    /// `D_M(μ, empirical of w^k c^k)`.
    pub deviation: f64,
    /// `D_M(μ, empirical of the whole prefix up to N_k)`.
    pub cumulative: f64,
    pub within: bool,
}

/// Empirical deviations from `mu` at every checkpoint through `k_levels`.
///
/// The asserted quantity is blockwise: the `n_k` symbols `w^k c^k` read from
/// position `N_{k−1}`. The deviation of the whole prefix is reported alongside.
pub fn birkhoff_check<M: CylinderMeasure + ?Sized>(
    prefix: &Word,
    mu: &M,
    schedule: &Schedule,
    depth: usize,
    k_levels: usize,
) -> Result<Vec<Checkpoint>> {
    let levels = schedule.levels(k_levels)?;
    let table = MassTable::new(mu, depth);
    let s = prefix.symbols();
    let mut start = 0;
    let mut out = Vec::with_capacity(levels.len());
    for level in &levels {
        if s.len() < level.end {
            return Err(Error::PrefixTooShort { len: s.len(), checkpoint: level.end });
        }
        let eps = schedule.blocks[level.block - 1].eps;
        let bound = 3.0 * eps + (depth as f64 - 1.0) / level.n as f64;
        let deviation = table.distance_to_word(&s[start..level.end]);
        let cumulative = table.distance_to_word(&s[..level.end]);
        out.push(Checkpoint { k: level.k, end: level.end, n: level.n, eps, bound, deviation, cumulative, within: deviation <= bound });
        start = level.end;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefixCount {
    pub k: usize,
    /// `log Π_{j≤k} #Γ'_j`.
    pub log_count: f64,
    /// `Π_{j≤k} #Γ'_j` (as a float; exact while below `2^53`).
    pub count: f64,
    /// `N_k`.
    pub end: usize,
    /// `log(count) / N_k`.
    pub exponent: f64,
    /// `(h(μ) − 2ε)/(1 + ε)`.
    pub target: f64,
}

pub fn count_prefixes(schedule: &Schedule, k: usize) -> Result<PrefixCount> {
    let levels = schedule.levels(k)?;
    let log_count: f64 = levels.iter().map(|l| schedule.gamma(l).log_count()).sum();
    let end = levels.last().map_or(0, |l| l.end);
    let count = log_count.exp();
    Ok(PrefixCount {
        k,
        log_count,
        count: if count < 9.0e15 { count.round() } else { count },
        end,
        exponent: if end == 0 { 0.0 } else { log_count / end as f64 },
        target: (schedule.h_mu - 2.0 * schedule.epsilon) / (1.0 + schedule.epsilon),
    })
}

/// `(log #Γ'_k, n_k)` for the first `k_max` levels, the input of
/// [`crate::entropy::bowen_lower_moran`].
pub fn moran_levels(schedule: &Schedule, k_max: usize) -> Result<Vec<(f64, usize)>> {
    Ok(schedule.levels(k_max)?.iter().map(|l| (schedule.gamma(l).log_count(), l.n)).collect())
}

/// Prefix tree of `G` through `k_max` levels, seen at the depths
/// `N_{k−1} + l'_k` where it has exactly `Π_{j≤k} #Γ'_j` prefixes (each
/// connector is determined by the two words around it).
#[derive(Debug, Clone)]
pub struct MoranTree {
    points: Vec<(usize, f64)>,
}

impl MoranTree {
    pub fn new(schedule: &Schedule, k_max: usize) -> Result<Self> {
        let mut points = Vec::new();
        let mut log_count = 0.0;
        let mut prev_end = 0;
        for l in schedule.levels(k_max)? {
            log_count += schedule.gamma(&l).log_count();
            points.push((prev_end + l.len, log_count));
            prev_end = l.end;
        }
        Ok(Self { points })
    }
}

impl PrefixTree for MoranTree {
    fn depths(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.0).collect()
    }

    fn log_count(&self, depth: usize) -> f64 {
        self.points.iter().find(|p| p.0 == depth).map_or(f64::NAN, |p| p.1)
    }
}
