use nalgebra::{DMatrix, DVector};

use crate::diagram::{Diagram, VertexId};
use crate::entropy::{perron, POWER_MAX_ITER, POWER_TOL};
use crate::error::{Error, Result};
use crate::graph;

use super::CylinderMeasure;

/// A stationary Markov chain whose states sit on diagram vertices, pushed
/// forward to the shift by reading vertex labels.
///
/// Several states may share a vertex (a lifted chain); the cylinder masses
/// are those of the label process either way.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    states: Vec<VertexId>,
    labels: Vec<u8>,
    /// Sparse rows `(target state, probability)`, probabilities positive.
    rows: Vec<Vec<(usize, f64)>>,
    pi: Vec<f64>,
    k: usize,
}

fn check_stochastic(p: &[Vec<f64>]) -> Result<()> {
    let n = p.len();
    for (i, row) in p.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidParam(format!("row {} has {} entries, expected {}", i, row.len(), n)));
        }
        if row.iter().any(|&x| !(0.0..=1.0 + 1e-12).contains(&x)) {
            return Err(Error::InvalidParam(format!("row {} has entries outside [0, 1]", i)));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParam(format!("row {} sums to {}", i, s)));
        }
    }
    Ok(())
}

fn support(p: &[Vec<f64>]) -> Vec<Vec<usize>> {
    p.iter()
        .map(|row| row.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(j, _)| j).collect())
        .collect()
}

fn residual(p: &[Vec<f64>], pi: &[f64]) -> f64 {
    let n = p.len();
    let mut r = 0.0;
    for j in 0..n {
        let s: f64 = (0..n).map(|i| pi[i] * p[i][j]).sum();
        r += (s - pi[j]).abs();
    }
    r
}

/// Unique stationary row vector of an irreducible stochastic matrix.
///
/// A direct linear solve provides the starting vector; power iteration on the
/// lazy chain `(I + P)/2` (same stationary vector, aperiodic) then drives the
/// `ℓ¹` residual `‖πP − π‖` below `1e-12`.
pub fn stationary_distribution(p: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_stochastic(p)?;
    let n = p.len();
    if n == 0 {
        return Err(Error::InvalidParam("empty matrix".into()));
    }
    if !graph::is_strongly_connected(&support(p)) {
        return Err(Error::NotIrreducible);
    }
    // (Pᵀ − I) πᵀ = 0 with the last equation replaced by Σ π = 1.
    let mut a = DMatrix::from_fn(n, n, |i, j| p[j][i] - if i == j { 1.0 } else { 0.0 });
    let mut b = DVector::zeros(n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    b[n - 1] = 1.0;
    let mut pi: Vec<f64> = match a.lu().solve(&b) {
        Some(x) => x.iter().map(|&v| v.max(0.0)).collect(),
        None => vec![1.0 / n as f64; n],
    };
    let mut res = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|v| *v /= total);
        res = residual(p, &pi);
        if res < POWER_TOL {
            return Ok(pi);
        }
        let mut next = vec![0.0; n];
        for i in 0..n {
            next[i] += 0.5 * pi[i];
            for j in 0..n {
                next[j] += 0.5 * pi[i] * p[i][j];
            }
        }
        pi = next;
    }
    Err(Error::NoConvergence { iterations: POWER_MAX_ITER, residual: res })
}

impl MarkovMeasure {
    /// Chain on `states` (diagram vertex of each state) with kernel `p`.
    /// Every positive entry must follow a diagram arrow.
    pub fn new(states: Vec<VertexId>, p: Vec<Vec<f64>>, diagram: &Diagram) -> Result<Self> {
        if states.len() != p.len() {
            return Err(Error::InvalidParam("state list and matrix disagree in size".into()));
        }
        for &s in &states {
            if s >= diagram.len() {
                return Err(Error::InvalidParam(format!("vertex {} not in diagram", s)));
            }
        }
        check_stochastic(&p)?;
        for (i, row) in p.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x > 0.0 && !diagram.has_arrow(states[i], states[j]) {
                    return Err(Error::InvalidParam(format!(
                        "transition {} -> {} does not follow an arrow",
                        states[i], states[j]
                    )));
                }
            }
        }
        let pi = stationary_distribution(&p)?;
        Ok(Self::assemble(states, &p, pi, diagram))
    }

    /// Like [`MarkovMeasure::new`] but with a caller-supplied stationary vector,
    /// checked against `πP = π` to `1e-9`.
    pub fn with_stationary(states: Vec<VertexId>, p: Vec<Vec<f64>>, pi: Vec<f64>, diagram: &Diagram) -> Result<Self> {
        let m = Self::new(states, p, diagram)?;
        if pi.len() != m.pi.len() || pi.iter().zip(&m.pi).any(|(a, b)| (a - b).abs() > 1e-9) {
            return Err(Error::InvalidParam("pi is not the stationary vector of P".into()));
        }
        Ok(m)
    }

    fn assemble(states: Vec<VertexId>, p: &[Vec<f64>], pi: Vec<f64>, diagram: &Diagram) -> Self {
        let labels = states.iter().map(|&s| diagram.label(s)).collect();
        let rows = p
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(j, &x)| (j, x)).collect())
            .collect();
        Self { states, labels, rows, pi, k: diagram.k() }
    }

    pub fn states(&self) -> &[VertexId] {
        &self.states
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// The distinct vertices used by the chain, ascending.
    pub fn vertex_set(&self) -> Vec<VertexId> {
        let mut v = self.states.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.rows[i].iter().find(|(t, _)| *t == j).map_or(0.0, |(_, x)| *x)
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Dense copy of the kernel.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.num_states();
        let mut p = vec![vec![0.0; n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, x) in row {
                p[i][j] = x;
            }
        }
        p
    }

    /// `−Σ πᵢ P_ij log P_ij`.
    pub fn entropy_rate(&self) -> f64 {
        self.rows
            .iter()
            .zip(&self.pi)
            .map(|(row, &w)| -w * row.iter().map(|&(_, x)| x * x.ln()).sum::<f64>())
            .sum()
    }

    /// Probability vector over states after reading `w` (unnormalized
    /// forward variables). Empty for `w` empty.
    pub fn forward(&self, w: &[u8]) -> Vec<f64> {
        let Some((&first, rest)) = w.split_first() else {
            return self.pi.clone();
        };
        let mut f: Vec<f64> = self
            .pi
            .iter()
            .zip(&self.labels)
            .map(|(&p, &l)| if l == first { p } else { 0.0 })
            .collect();
        for &a in rest {
            let mut next = vec![0.0; f.len()];
            for (i, &fi) in f.iter().enumerate() {
                if fi == 0.0 {
                    continue;
                }
                for &(j, x) in &self.rows[i] {
                    if self.labels[j] == a {
                        next[j] += fi * x;
                    }
                }
            }
            f = next;
        }
        f
    }
}

impl CylinderMeasure for MarkovMeasure {
    fn mass(&self, w: &[u8]) -> f64 {
        if w.is_empty() {
            return 1.0;
        }
        self.forward(w).iter().sum()
    }

    fn max_depth(&self) -> usize {
        usize::MAX
    }

    fn alphabet_size(&self) -> usize {
        self.k
    }
}

/// Mass of `[w]` under the pushforward of a Markov measure: the sum over
/// label-consistent state paths of `π[s₁] Π P[sᵢ][sᵢ₊₁]`.
pub fn markov_cylinder_mass(m: &MarkovMeasure, w: &[u8]) -> f64 {
    m.mass(w)
}

/// Maximal-entropy Markov measure on the subgraph induced by `subset`:
/// `P[D][C] = M[D][C] v[C] / (λ v[D])` with `(λ, v)` the Perron pair.
pub fn parry_measure(subset: &[VertexId], diagram: &Diagram) -> Result<MarkovMeasure> {
    if subset.is_empty() {
        return Err(Error::InvalidParam("empty vertex set".into()));
    }
    let m = diagram.transition_matrix(subset);
    let (lambda, v) = perron(&m)?;
    let n = subset.len();
    let p: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let row: Vec<f64> = (0..n).map(|j| m[(i, j)] * v[j] / (lambda * v[i])).collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|x| x / s).collect()
        })
        .collect();
    MarkovMeasure::new(subset.to_vec(), p, diagram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Params;

    fn d() -> Diagram {
        Diagram::build(&Params::rational(1, 2, 5, 2).unwrap(), 6).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn stationary_examples() {
        let pi = stationary_distribution(&[vec![0.99, 0.01], vec![0.01, 0.99]]).unwrap();
        assert!(close(&pi, &[0.5, 0.5], 1e-12));
        let pi = stationary_distribution(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(close(&pi, &[0.5, 0.5], 1e-12));
        let pi = stationary_distribution(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        assert!(close(&pi, &[2.0 / 3.0, 1.0 / 3.0], 1e-12));
        assert_eq!(stationary_distribution(&[vec![1.0, 0.0], vec![0.0, 1.0]]), Err(Error::NotIrreducible));
        assert!(matches!(stationary_distribution(&[vec![0.5, 0.6], vec![1.0, 0.0]]), Err(Error::InvalidParam(_))));
    }

    #[test]
    fn parry_examples() {
        let d = d();
        let base = parry_measure(&[0, 1, 2], &d).unwrap();
        assert!((base.entropy_rate() - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-9);

        let two = parry_measure(&[1], &d).unwrap();
        assert_eq!(two.matrix(), vec![vec![1.0]]);
        assert_eq!(two.entropy_rate(), 0.0);

        let pair = parry_measure(&[1, 2], &d).unwrap();
        assert!(close(&pair.matrix().concat(), &[0.5; 4], 1e-12));
        assert!((pair.entropy_rate() - 2f64.ln()).abs() < 1e-12);

        assert_eq!(parry_measure(&[0], &d), Err(Error::NotIrreducible));
    }

    #[test]
    fn cylinder_mass_examples() {
        let d = d();
        let pair = parry_measure(&[1, 2], &d).unwrap();
        assert!((markov_cylinder_mass(&pair, &[2]) - 0.5).abs() < 1e-12);
        assert!((markov_cylinder_mass(&pair, &[2, 3, 2]) - 0.125).abs() < 1e-12);
        let base = parry_measure(&[0, 1, 2], &d).unwrap();
        assert_eq!(markov_cylinder_mass(&base, &[1, 1]), 0.0);
        assert_eq!(markov_cylinder_mass(&pair, &[1]), 0.0);
    }

    #[test]
    fn transitions_must_follow_arrows() {
        let d = d();
        let err = MarkovMeasure::new(vec![0, 0], vec![vec![0.5, 0.5], vec![0.5, 0.5]], &d).unwrap_err();
        assert!(matches!(err, Error::InvalidParam(_)));
    }
}
