//! Ergodic Markov approximation of a finite mixture by a switching chain.
//!
//! Each component runs its own kernel and, with small total probability per
//! step, jumps to another component, directly along an arrow when one exists
//! and otherwise through a shortest bridge path in the diagram.

use serde::Serialize;

use crate::diagram::{Diagram, VertexId};
use crate::error::{Error, Result};
use crate::graph;

use super::{weak_star_distance, Component, MarkovMeasure, MixtureMeasure};

/// Number of times `delta` is halved before giving up.
pub const DEFAULT_HALVINGS: usize = 10;

/// Largest per-state exit probability accepted.
const MAX_EXIT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepStep {
    pub delta: f64,
    pub distance: f64,
    pub entropy_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxReport {
    pub depth: usize,
    pub delta: f64,
    pub distance: f64,
    pub entropy_gap: f64,
    pub h_mu: f64,
    pub h_rho: f64,
    pub sweep: Vec<SweepStep>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    /// Vertices used by `rho`, ascending.
    pub vertices: Vec<VertexId>,
    pub rho: MarkovMeasure,
    pub report: ApproxReport,
}

/// Local chain of one component: vertex of each state and dense kernel.
struct Local {
    states: Vec<VertexId>,
    p: Vec<Vec<f64>>,
    pi: Vec<f64>,
}

fn local_chain(c: &Component) -> Local {
    match c {
        Component::Markov(m) => Local { states: m.states().to_vec(), p: m.matrix(), pi: m.stationary().to_vec() },
        Component::Periodic(per) => {
            let states = per.path().to_vec();
            let n = states.len();
            let p = (0..n).map(|i| (0..n).map(|j| if j == (i + 1) % n { 1.0 } else { 0.0 }).collect()).collect();
            Local { states, p, pi: vec![1.0 / n as f64; n] }
        }
    }
}

/// Shortest diagram path from a state of `from` to a state of `to`, as
/// `(source state, interior vertices, target state)`; ties resolve to the
/// smallest vertex ids.
fn bridge(diagram: &Diagram, adj: &[Vec<usize>], from: &Local, to: &Local) -> Option<(usize, Vec<VertexId>, usize)> {
    let mut best: Option<Vec<VertexId>> = None;
    let mut sources: Vec<VertexId> = from.states.clone();
    sources.sort_unstable();
    sources.dedup();
    let mut targets: Vec<VertexId> = to.states.clone();
    targets.sort_unstable();
    targets.dedup();
    for &s in &sources {
        if !diagram.is_expanded(s) {
            continue;
        }
        let dist = graph::distances_from(adj, s);
        let Some(&t) = targets.iter().filter(|&&t| dist[t].is_some_and(|d| d > 0)).min_by_key(|&&t| (dist[t], t)) else {
            continue;
        };
        let path = graph::shortest_path(adj, s, t)?;
        if best.as_ref().is_none_or(|b| path.len() < b.len()) {
            best = Some(path);
        }
    }
    let path = best?;
    let src = from.states.iter().position(|&v| v == path[0])?;
    let dst = to.states.iter().position(|&v| v == *path.last().unwrap())?;
    Some((src, path[1..path.len() - 1].to_vec(), dst))
}

/// The switching chain for `mu` at rate `delta`.
///
/// Component `i` leaves at rate `δᵢ = δ·K(1−aᵢ)/(K−1)` and enters `j` with
/// probability `aⱼ/(1−aᵢ)`, which makes the time spent in component `i`
/// proportional to `aᵢ` up to bridge time. A single component is returned as
/// its own chain.
pub fn switching_chain(mu: &MixtureMeasure, delta: f64, diagram: &Diagram) -> Result<MarkovMeasure> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParam(format!("delta must lie in (0,1), got {}", delta)));
    }
    let comps: Vec<(f64, &Component)> = mu.components().iter().filter(|(a, _)| *a > 0.0).map(|(a, c)| (*a, c)).collect();
    let locals: Vec<Local> = comps.iter().map(|(_, c)| local_chain(c)).collect();
    if comps.len() == 1 {
        if let Component::Markov(m) = comps[0].1 {
            return Ok(m.clone());
        }
        let l = &locals[0];
        return MarkovMeasure::new(l.states.clone(), l.p.clone(), diagram);
    }

    let kk = comps.len() as f64;
    let mut offsets = Vec::with_capacity(locals.len());
    let mut states: Vec<VertexId> = Vec::new();
    for l in &locals {
        offsets.push(states.len());
        states.extend_from_slice(&l.states);
    }
    let core_len = states.len();
    // exits[global state] = list of (target global state, probability)
    let mut exits: Vec<Vec<(usize, f64)>> = vec![Vec::new(); core_len];
    let mut bridge_rows: Vec<usize> = Vec::new();
    let adj = diagram.adjacency();

    for (i, li) in locals.iter().enumerate() {
        let delta_i = delta * kk * (1.0 - comps[i].0) / (kk - 1.0);
        for (j, lj) in locals.iter().enumerate() {
            if i == j {
                continue;
            }
            let rate = delta_i * comps[j].0 / (1.0 - comps[i].0);
            // Direct exits along arrows.
            let mut direct: Vec<(usize, Vec<usize>)> = Vec::new();
            for (s, &v) in li.states.iter().enumerate() {
                let targets: Vec<usize> =
                    lj.states.iter().enumerate().filter(|(_, &w)| diagram.has_arrow(v, w)).map(|(t, _)| t).collect();
                if !targets.is_empty() {
                    direct.push((s, targets));
                }
            }
            if !direct.is_empty() {
                let mass: f64 = direct.iter().map(|(s, _)| li.pi[*s]).sum();
                for (s, targets) in direct {
                    let each = rate / mass / targets.len() as f64;
                    for t in targets {
                        exits[offsets[i] + s].push((offsets[j] + t, each));
                    }
                }
                continue;
            }
            let (s, interior, t) = bridge(diagram, &adj, li, lj).ok_or_else(|| {
                Error::DepthInsufficient(format!("no diagram path from component {} to component {}", i, j))
            })?;
            let first = states.len();
            for (n, &v) in interior.iter().enumerate() {
                states.push(v);
                bridge_rows.push(if n + 1 < interior.len() { first + n + 1 } else { offsets[j] + t });
            }
            exits[offsets[i] + s].push((first, rate / li.pi[s]));
        }
    }

    let n = states.len();
    let mut p = vec![vec![0.0; n]; n];
    for (i, l) in locals.iter().enumerate() {
        for (s, row) in l.p.iter().enumerate() {
            let g = offsets[i] + s;
            let out: f64 = exits[g].iter().map(|(_, x)| x).sum();
            if out > MAX_EXIT {
                return Err(Error::InvalidParam(format!("delta {} gives exit probability {} at state {}", delta, out, g)));
            }
            for (t, &x) in row.iter().enumerate() {
                p[g][offsets[i] + t] += (1.0 - out) * x;
            }
            for &(t, x) in &exits[g] {
                p[g][t] += x;
            }
        }
    }
    for (b, &next) in bridge_rows.iter().enumerate() {
        p[core_len + b][next] = 1.0;
    }
    MarkovMeasure::new(states, p, diagram)
}

fn evaluate(mu: &MixtureMeasure, rho: &MarkovMeasure, depth: usize, delta: f64) -> SweepStep {
    SweepStep {
        delta,
        distance: weak_star_distance(mu, rho, depth),
        entropy_gap: (mu.entropy() - rho.entropy_rate()).abs(),
    }
}

/// Runs the switching chain at `delta, delta/2, …` (up to `halvings` halvings)
/// and returns the first chain with `D_M(μ,ρ) ≤ ε` and `|h(μ) − h(ρ)| ≤ ε`.
pub fn ergodic_approximation_with(
    mu: &MixtureMeasure,
    epsilon: f64,
    delta: f64,
    depth: usize,
    halvings: usize,
    diagram: &Diagram,
) -> Result<Approximation> {
    let mut sweep = Vec::new();
    let mut d = delta;
    for _ in 0..=halvings {
        let rho = match switching_chain(mu, d, diagram) {
            Ok(rho) => rho,
            Err(Error::InvalidParam(_)) if d < 1.0 => {
                d /= 2.0;
                continue;
            }
            Err(e) => return Err(e),
        };
        let step = evaluate(mu, &rho, depth, d);
        sweep.push(step.clone());
        if step.distance <= epsilon && step.entropy_gap <= epsilon {
            let report = ApproxReport {
                depth,
                delta: d,
                distance: step.distance,
                entropy_gap: step.entropy_gap,
                h_mu: mu.entropy(),
                h_rho: rho.entropy_rate(),
                sweep,
            };
            return Ok(Approximation { vertices: rho.vertex_set(), rho, report });
        }
        d /= 2.0;
    }
    let last = sweep.last().cloned();
    Err(Error::TargetUnreachable(match last {
        Some(s) => format!("after {} halvings: distance {:.6}, entropy gap {:.6}", halvings, s.distance, s.entropy_gap),
        None => format!("no admissible chain after {} halvings", halvings),
    }))
}

/// [`ergodic_approximation_with`] using [`DEFAULT_HALVINGS`].
pub fn ergodic_approximation(
    mu: &MixtureMeasure,
    epsilon: f64,
    delta: f64,
    depth: usize,
    diagram: &Diagram,
) -> Result<Approximation> {
    ergodic_approximation_with(mu, epsilon, delta, depth, DEFAULT_HALVINGS, diagram)
}

/// Distances and entropy gaps at `delta / 2^h` for `h = 0..=halvings`.
pub fn delta_sweep(
    mu: &MixtureMeasure,
    delta: f64,
    depth: usize,
    halvings: usize,
    diagram: &Diagram,
) -> Result<Vec<SweepStep>> {
    (0..=halvings)
        .map(|h| {
            let d = delta / 2f64.powi(h as i32);
            switching_chain(mu, d, diagram).map(|rho| evaluate(mu, &rho, depth, d))
        })
        .collect()
}
