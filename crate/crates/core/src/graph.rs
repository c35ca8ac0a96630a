//! Small directed-graph utilities over adjacency lists indexed by `usize`.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

/// Strongly connected components of the graph given by `adj`.
pub fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::with_capacity(adj.len(), 0);
    let nodes: Vec<_> = (0..adj.len()).map(|_| g.add_node(())).collect();
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            g.add_edge(nodes[u], nodes[v], ());
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|comp| {
            let mut c: Vec<usize> = comp.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

/// True iff every node reaches every node by a path with at least one arrow.
/// A single node therefore needs a self-loop.
pub fn is_strongly_connected(adj: &[Vec<usize>]) -> bool {
    match adj.len() {
        0 => false,
        1 => adj[0].contains(&0),
        _ => strongly_connected_components(adj).len() == 1,
    }
}

/// BFS distances (in arrows) from `source`; `None` when unreachable.
pub fn distances_from(adj: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn reverse(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            rev[v].push(u);
        }
    }
    rev
}

/// Shortest path from `from` to `to`, choosing the smallest vertex id at every
/// tie. Returns the vertex sequence including both ends.
pub fn shortest_path(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let to_target = distances_from(&reverse(adj), to);
    let mut d = to_target[from]?;
    let mut path = vec![from];
    let mut cur = from;
    while d > 0 {
        cur = adj[cur]
            .iter()
            .copied()
            .filter(|&v| to_target[v] == Some(d - 1))
            .min()?;
        path.push(cur);
        d -= 1;
    }
    Some(path)
}
