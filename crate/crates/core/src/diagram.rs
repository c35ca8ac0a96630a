//! Hofbauer's Markov diagram, built to finite depth.
//!
//! Vertices are labeled open intervals `D ⊆ I_label`. The successors of `D`
//! are the nonempty pieces `T(D) ∩ I_j`; a piece equal to a full branch
//! interval is the base vertex `[j]`. Vertices are discovered breadth-first
//! and deduplicated on `(label, interval)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::arith::{OpenInterval, Params, Word};
use crate::error::{Error, Result};
use crate::graph;

pub type VertexId = usize;

/// Default cap on the number of vertices a build may create.
pub const DEFAULT_VERTEX_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    pub label: u8,
    pub interval: OpenInterval,
    /// First `n` with the vertex in `𝒟_n`.
    pub depth: usize,
}

/// A candidate successor `T(D) ∩ I_label`.
#[derive(Debug, Clone, PartialEq)]
pub struct Successor {
    pub label: u8,
    pub interval: OpenInterval,
    /// The piece is the whole branch interval, i.e. the base vertex `[label]`.
    pub base: bool,
}

/// Successor pieces of a vertex with the given label and interval, in label order.
pub fn successors(params: &Params, label: u8, interval: &OpenInterval) -> Vec<Successor> {
    let image = OpenInterval::new(
        params.branch_affine(label, &interval.lo),
        params.branch_affine(label, &interval.hi),
    );
    (1..=params.k() as u8)
        .filter_map(|j| {
            let branch = params.interval(j);
            params.intersect(&image, branch).map(|piece| Successor {
                label: j,
                base: params.interval_eq(&piece, branch),
                interval: piece,
            })
        })
        .collect()
}

/// A finite path of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DPath(pub Vec<VertexId>);

impl DPath {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<VertexId> {
        self.0.last().copied()
    }
}

#[derive(Debug, Clone)]
pub struct Diagram {
    params: Params,
    vertices: Vec<Vertex>,
    /// Outgoing arrows sorted by target label; empty for unexpanded vertices.
    arrows: Vec<Vec<VertexId>>,
    depth_built: usize,
    budget: usize,
}

impl Diagram {
    /// `𝒟_n` with all arrows out of vertices of depth `< n`.
    pub fn build(params: &Params, n: usize) -> Result<Self> {
        Self::build_with_budget(params, n, DEFAULT_VERTEX_BUDGET)
    }

    pub fn build_with_budget(params: &Params, n: usize, budget: usize) -> Result<Self> {
        let k = params.k();
        if budget < k {
            return Err(Error::VertexBudgetExceeded(budget));
        }
        let vertices = (1..=k as u8)
            .map(|j| Vertex { id: j as usize - 1, label: j, interval: params.interval(j).clone(), depth: 0 })
            .collect();
        let mut d = Diagram { params: params.clone(), vertices, arrows: vec![Vec::new(); k], depth_built: 0, budget };
        d.extend_to(n)?;
        Ok(d)
    }

    /// Grow the diagram until it equals `𝒟_n`.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.depth_built < n {
            let frontier: Vec<VertexId> = self
                .vertices
                .iter()
                .filter(|v| v.depth == self.depth_built)
                .map(|v| v.id)
                .collect();
            for id in frontier {
                let (label, interval) = (self.vertices[id].label, self.vertices[id].interval.clone());
                let mut out = Vec::new();
                for s in successors(&self.params, label, &interval) {
                    let target = if s.base {
                        self.base_id(s.label)
                    } else {
                        self.find_or_insert(s.label, s.interval)?
                    };
                    out.push(target);
                }
                self.arrows[id] = out;
            }
            self.depth_built += 1;
        }
        Ok(())
    }

    fn find_or_insert(&mut self, label: u8, interval: OpenInterval) -> Result<VertexId> {
        if let Some(v) = self
            .vertices
            .iter()
            .find(|v| v.label == label && self.params.interval_eq(&v.interval, &interval))
        {
            return Ok(v.id);
        }
        if self.vertices.len() >= self.budget {
            return Err(Error::VertexBudgetExceeded(self.budget));
        }
        let id = self.vertices.len();
        self.vertices.push(Vertex { id, label, interval, depth: self.depth_built + 1 });
        self.arrows.push(Vec::new());
        Ok(id)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn k(&self) -> usize {
        self.params.k()
    }

    pub fn depth_built(&self) -> usize {
        self.depth_built
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id]
    }

    pub fn label(&self, id: VertexId) -> u8 {
        self.vertices[id].label
    }

    pub fn arrows(&self, id: VertexId) -> &[VertexId] {
        &self.arrows[id]
    }

    /// Whether the arrows out of `id` have been materialized.
    pub fn is_expanded(&self, id: VertexId) -> bool {
        self.vertices[id].depth < self.depth_built
    }

    pub fn has_arrow(&self, from: VertexId, to: VertexId) -> bool {
        self.arrows[from].contains(&to)
    }

    /// The successor of `id` carrying `label`, if any.
    pub fn successor(&self, id: VertexId, label: u8) -> Option<VertexId> {
        self.arrows[id].iter().copied().find(|&c| self.vertices[c].label == label)
    }

    pub fn base_id(&self, label: u8) -> VertexId {
        label as usize - 1
    }

    pub fn base_ids(&self) -> Vec<VertexId> {
        (0..self.k()).collect()
    }

    /// Adjacency lists of the whole diagram.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.arrows.clone()
    }

    /// Adjacency restricted to `subset` (re-indexed by position in `subset`).
    pub fn induced_adjacency(&self, subset: &[VertexId]) -> Vec<Vec<usize>> {
        subset
            .iter()
            .map(|&d| {
                subset
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| self.has_arrow(d, c))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect()
    }

    /// `[2] → [2]`.
    pub fn has_self_loop_two(&self) -> bool {
        let two = self.base_id(2);
        self.has_arrow(two, two)
    }

    /// Strong connectivity of the subgraph induced by `subset`.
    pub fn is_irreducible(&self, subset: &[VertexId]) -> bool {
        graph::is_strongly_connected(&self.induced_adjacency(subset))
    }

    /// Expanded vertices that are not in the strongly connected component
    /// of `[2]`. Empty when the built part of the diagram is irreducible.
    pub fn irreducibility_warnings(&self) -> Vec<VertexId> {
        let expanded: Vec<VertexId> = (0..self.len()).filter(|&v| self.is_expanded(v)).collect();
        if expanded.is_empty() {
            return Vec::new();
        }
        let adj = self.induced_adjacency(&expanded);
        let two = expanded.iter().position(|&v| v == self.base_id(2));
        let comps = graph::strongly_connected_components(&adj);
        let core: BTreeSet<usize> = match two {
            Some(t) => comps.into_iter().find(|c| c.contains(&t)).unwrap_or_default().into_iter().collect(),
            None => BTreeSet::new(),
        };
        expanded
            .iter()
            .enumerate()
            .filter(|(i, _)| !core.contains(i))
            .map(|(_, &v)| v)
            .collect()
    }

    /// The strongly connected component containing `[2]`, over expanded vertices.
    pub fn core_component(&self) -> Vec<VertexId> {
        let warn: BTreeSet<VertexId> = self.irreducibility_warnings().into_iter().collect();
        (0..self.len()).filter(|&v| self.is_expanded(v) && !warn.contains(&v)).collect()
    }

    fn depth_error(&self, what: String) -> Error {
        Error::DepthInsufficient(format!("{} (diagram built to depth {})", what, self.depth_built))
    }

    /// `t₁(C)`: vertices on a shortest path `C … [2]`.
    pub fn time_to_two(&self, c: VertexId) -> Result<usize> {
        let rev = graph::reverse(&self.arrows);
        graph::distances_from(&rev, self.base_id(2))[c]
            .map(|d| d + 1)
            .ok_or_else(|| self.depth_error(format!("[2] unreachable from vertex {}", c)))
    }

    /// `t₂(D)`: vertices on a shortest path `[2] … D`.
    pub fn time_from_two(&self, d: VertexId) -> Result<usize> {
        graph::distances_from(&self.arrows, self.base_id(2))[d]
            .map(|x| x + 1)
            .ok_or_else(|| self.depth_error(format!("vertex {} unreachable from [2]", d)))
    }

    /// `t(F, F') = max_{C∈F, D∈F'} t₁(C) + t₂(D)`.
    pub fn connecting_time(&self, from: &[VertexId], to: &[VertexId]) -> Result<usize> {
        if from.is_empty() || to.is_empty() {
            return Err(Error::InvalidParam("connecting_time needs nonempty vertex sets".into()));
        }
        let rev = graph::reverse(&self.arrows);
        let two = self.base_id(2);
        let to_two = graph::distances_from(&rev, two);
        let from_two = graph::distances_from(&self.arrows, two);
        let mut t1 = 0;
        for &c in from {
            let d = to_two[c].ok_or_else(|| self.depth_error(format!("[2] unreachable from vertex {}", c)))?;
            t1 = t1.max(d + 1);
        }
        let mut t2 = 0;
        for &d in to {
            let x = from_two[d].ok_or_else(|| self.depth_error(format!("vertex {} unreachable from [2]", d)))?;
            t2 = t2.max(x + 1);
        }
        Ok(t1 + t2)
    }

    /// A path `C₀ … C_{t+1}` from `c` to `d` that runs a shortest path into
    /// `[2]`, waits on the `[2]` self-loop and then runs a shortest path to `d`.
    pub fn connecting_path(&self, c: VertexId, d: VertexId, t: usize) -> Result<DPath> {
        let two = self.base_id(2);
        let prefix = graph::shortest_path(&self.arrows, c, two)
            .ok_or_else(|| self.depth_error(format!("[2] unreachable from vertex {}", c)))?;
        let suffix = graph::shortest_path(&self.arrows, two, d)
            .ok_or_else(|| self.depth_error(format!("vertex {} unreachable from [2]", d)))?;
        let (t1, t2) = (prefix.len(), suffix.len());
        // prefix occupies 0..t1-1 and suffix t-t2+2..=t+1; they may share the [2].
        if t + 3 < t1 + t2 {
            return Err(Error::InvalidParam(format!(
                "connecting time {} shorter than t1 + t2 - 3 = {}",
                t,
                t1 + t2 - 3
            )));
        }
        if !self.has_self_loop_two() && t + 2 > t1 + t2 - 1 {
            return Err(self.depth_error("[2] has no self-loop".into()));
        }
        let mut path = Vec::with_capacity(t + 2);
        path.extend_from_slice(&prefix);
        while path.len() < t + 2 - (t2 - 1) {
            path.push(two);
        }
        path.extend_from_slice(&suffix[1..]);
        debug_assert_eq!(path.len(), t + 2);
        Ok(DPath(path))
    }

    /// `Ψ`: read off the labels.
    pub fn psi_project(&self, path: &DPath) -> Word {
        Word(path.0.iter().map(|&v| self.vertices[v].label).collect())
    }

    pub fn is_path(&self, path: &[VertexId]) -> bool {
        path.iter().all(|&v| v < self.len()) && path.windows(2).all(|w| self.has_arrow(w[0], w[1]))
    }

    /// The path spelling `word` from `start`, or `None` if some successor is
    /// missing. Errors when the walk reaches an unexpanded vertex.
    pub fn follow(&self, start: VertexId, word: &[u8]) -> Result<Option<Vec<VertexId>>> {
        if word.is_empty() {
            return Ok(Some(Vec::new()));
        }
        if self.vertices[start].label != word[0] {
            return Ok(None);
        }
        let mut path = Vec::with_capacity(word.len());
        path.push(start);
        let mut cur = start;
        for &a in &word[1..] {
            if !self.is_expanded(cur) {
                return Err(self.depth_error(format!("walk reached unexpanded vertex {}", cur)));
            }
            match self.successor(cur, a) {
                Some(next) => {
                    path.push(next);
                    cur = next;
                }
                None => return Ok(None),
            }
        }
        Ok(Some(path))
    }

    /// Membership of `word` in the language, via the path from its base vertex.
    pub fn accepts(&self, word: &Word) -> Result<bool> {
        match word.0.first() {
            None => Ok(true),
            Some(&a) if a as usize > self.k() || a == 0 => Ok(false),
            Some(&a) => Ok(self.follow(self.base_id(a), &word.0)?.is_some()),
        }
    }

    fn require_depth(&self, n: usize) -> Result<()> {
        if self.depth_built < n {
            return Err(self.depth_error(format!("words of length {} need depth {}", n, n)));
        }
        Ok(())
    }

    /// `𝓛_n`: labels of all length-`n` paths.
    ///
    /// Successors of a vertex carry distinct labels, so a word determines its
    /// path from the base vertex of its first symbol; paths from base
    /// vertices therefore enumerate each word exactly once.
    pub fn language(&self, n: usize) -> Result<BTreeSet<Word>> {
        self.require_depth(n)?;
        let mut out = BTreeSet::new();
        if n == 0 {
            out.insert(Word::empty());
            return Ok(out);
        }
        let mut stack: Vec<(VertexId, Vec<u8>)> =
            self.base_ids().into_iter().rev().map(|b| (b, vec![self.label(b)])).collect();
        while let Some((v, w)) = stack.pop() {
            if w.len() == n {
                out.insert(Word(w));
                continue;
            }
            for &c in self.arrows[v].iter().rev() {
                let mut next = w.clone();
                next.push(self.label(c));
                stack.push((c, next));
            }
        }
        Ok(out)
    }

    /// `#𝓛_n` by path counting.
    pub fn language_count(&self, n: usize) -> Result<u128> {
        self.require_depth(n)?;
        if n == 0 {
            return Ok(1);
        }
        let mut counts = vec![0u128; self.len()];
        for b in self.base_ids() {
            counts[b] = 1;
        }
        for _ in 1..n {
            let mut next = vec![0u128; self.len()];
            for (v, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &s in &self.arrows[v] {
                    next[s] = next[s]
                        .checked_add(c)
                        .ok_or_else(|| Error::BudgetExceeded(format!("word count overflow at n = {}", n)))?;
                }
            }
            counts = next;
        }
        counts
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::BudgetExceeded(format!("word count overflow at n = {}", n)))
    }

    /// `M_{D,C} = 1` iff `D → C`, indexed by the order of `subset`.
    pub fn transition_matrix(&self, subset: &[VertexId]) -> DMatrix<f64> {
        DMatrix::from_fn(subset.len(), subset.len(), |i, j| {
            if self.has_arrow(subset[i], subset[j]) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Plain-text adjacency export, one line per vertex:
    /// `id label lo hi depth succ:id,id,...`.
    pub fn export(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let succ: Vec<String> = self.arrows[v.id].iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                s,
                "{} {} {} {} {} succ:{}",
                v.id,
                v.label,
                v.interval.lo,
                v.interval.hi,
                v.depth,
                succ.join(",")
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Real;
    use num_rational::BigRational;

    fn p() -> Params {
        Params::rational(1, 2, 5, 2).unwrap()
    }

    fn q(n: i64, d: i64) -> Real {
        Real::Exact(BigRational::new(n.into(), d.into()))
    }

    fn iv(a: (i64, i64), b: (i64, i64)) -> OpenInterval {
        OpenInterval::new(q(a.0, a.1), q(b.0, b.1))
    }

    #[test]
    fn successor_examples() {
        let p = p();
        let s = successors(&p, 1, p.interval(1));
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].label, s[0].base), (2, false));
        assert_eq!(s[0].interval, iv((1, 2), (3, 5)));
        assert_eq!((s[1].label, s[1].base), (3, true));

        let s = successors(&p, 2, p.interval(2));
        assert_eq!(s.iter().map(|x| (x.label, x.base)).collect::<Vec<_>>(), vec![(1, true), (2, true), (3, true)]);

        let s = successors(&p, 2, &iv((1, 2), (3, 5)));
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].label, s[0].base), (3, false));
        assert_eq!(s[0].interval, iv((3, 4), (1, 1)));
    }

    #[test]
    fn build_examples() {
        let p = p();
        let d0 = Diagram::build(&p, 0).unwrap();
        assert_eq!(d0.len(), 3);
        assert!(d0.vertices().iter().all(|v| d0.arrows(v.id).is_empty()));

        let d1 = Diagram::build(&p, 1).unwrap();
        assert_eq!(d1.len(), 4);
        assert_eq!(d1.vertex(3).label, 2);
        assert_eq!(d1.vertex(3).interval, iv((1, 2), (3, 5)));
        assert_eq!(d1.vertex(3).depth, 1);

        let d2 = Diagram::build(&p, 2).unwrap();
        assert_eq!(d2.len(), 5);
        assert_eq!(d2.vertex(4).label, 3);
        assert_eq!(d2.vertex(4).interval, iv((3, 4), (1, 1)));
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            Diagram::build_with_budget(&p(), 10, 5).unwrap_err(),
            Error::VertexBudgetExceeded(5)
        );
    }

    #[test]
    fn self_loop_two_examples() {
        assert!(Diagram::build(&p(), 1).unwrap().has_self_loop_two());
        assert!(Diagram::build(&Params::rational(0, 1, 3, 1).unwrap(), 1).unwrap().has_self_loop_two());
        assert!(Diagram::build(&Params::rational(9, 10, 41, 20).unwrap(), 1).unwrap().has_self_loop_two());
    }

    #[test]
    fn irreducibility_examples() {
        let d = Diagram::build(&p(), 4).unwrap();
        assert!(d.is_irreducible(&[0, 1, 2]));
        assert!(!d.is_irreducible(&[0]));
        assert!(d.is_irreducible(&[1]));
    }

    #[test]
    fn connecting_examples() {
        let d = Diagram::build(&p(), 4).unwrap();
        assert_eq!(d.time_to_two(0).unwrap(), 3);
        assert_eq!(d.time_from_two(0).unwrap(), 2);
        assert_eq!(d.connecting_time(&[0], &[0]).unwrap(), 5);
        assert_eq!(d.connecting_time(&[1], &[1]).unwrap(), 2);
        assert_eq!(d.connecting_time(&[1], &[2]).unwrap(), 3);

        assert_eq!(d.connecting_path(0, 0, 5).unwrap().0, vec![0, 2, 1, 1, 1, 1, 0]);
        assert_eq!(d.connecting_path(1, 1, 2).unwrap().0, vec![1, 1, 1, 1]);
        assert_eq!(d.connecting_path(1, 2, 3).unwrap().0, vec![1, 1, 1, 1, 2]);
        // shortest legal connection [3],[2],[2],[3]
        assert_eq!(d.connecting_path(2, 2, 2).unwrap().0, vec![2, 1, 1, 2]);
        assert_eq!(d.connecting_path(0, 0, 2).unwrap().0, vec![0, 2, 1, 0]);
        assert!(d.connecting_path(0, 0, 1).is_err());
    }

    #[test]
    fn psi_examples() {
        let d = Diagram::build(&p(), 3).unwrap();
        assert_eq!(d.psi_project(&DPath(vec![0, 2, 1])).to_string(), "1 3 2");
        assert_eq!(d.psi_project(&DPath(vec![0, 3, 4])).to_string(), "1 2 3");
        assert!(d.is_path(&[0, 3, 4]));
        assert_eq!(d.psi_project(&DPath::default()), Word::empty());
    }

    #[test]
    fn language_examples() {
        let d = Diagram::build(&p(), 3).unwrap();
        let l1: Vec<String> = d.language(1).unwrap().iter().map(|w| w.compact()).collect();
        assert_eq!(l1, vec!["1", "2", "3"]);
        let l2: Vec<String> = d.language(2).unwrap().iter().map(|w| w.compact()).collect();
        assert_eq!(l2, vec!["12", "13", "21", "22", "23", "31", "32", "33"]);
        assert_eq!(d.language_count(2).unwrap(), 8);
        assert!(d.language(4).is_err());
    }

    #[test]
    fn transition_matrix_examples() {
        let d = Diagram::build(&p(), 2).unwrap();
        let m = d.transition_matrix(&[0, 1, 2]);
        let rows: Vec<Vec<f64>> = (0..3).map(|i| m.row(i).iter().copied().collect()).collect();
        assert_eq!(rows, vec![vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]]);
        assert_eq!(d.transition_matrix(&[1])[(0, 0)], 1.0);
        assert_eq!(d.transition_matrix(&[0])[(0, 0)], 0.0);
    }

    #[test]
    fn export_format() {
        let d = Diagram::build(&p(), 1).unwrap();
        let text = d.export();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "0 1 0 1/5 0 succ:3,2");
        assert_eq!(lines[1], "1 2 1/5 3/5 0 succ:0,1,2");
        assert_eq!(lines[3], "3 2 1/2 3/5 1 succ:");
    }
}
