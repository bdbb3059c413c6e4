//! Transforms that turn a general connected graph into a regular one, either
//! by adding self-loops up to the maximum degree or by deleting off-tree
//! edges down to a target degree.

use super::Graph;
use crate::error::{Error, Result};

/// Gives node i exactly `d_max - degree(i)` additional self-loops so that
/// every degree equals the maximum. Idempotent: a graph that is already
/// regular (loops included) comes back unchanged.
pub fn add_self_loops_to_regularize(g: &Graph) -> Result<Graph> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let d_max = g.max_degree();
    let loops: Vec<usize> = (0..g.n())
        .map(|i| g.self_loops(i) + (d_max - g.degree(i)))
        .collect();
    Graph::with_self_loops(g.n(), g.edges(), &loops)
}

/// Deletes non-tree edges at maximum-degree nodes until no degree exceeds
/// `target_k`, keeping a DFS spanning tree intact so the result stays
/// connected. A DFS tree is used because it tends to be path-like, which
/// keeps its own degrees low; edges on the tree are never candidates.
pub fn delete_edges_to_regularize(g: &Graph, target_k: usize) -> Result<Graph> {
    if g.has_self_loops() {
        return Err(Error::InvalidInput(
            "edge deletion expects a loop-free graph".into(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if target_k == 0 && g.n() > 1 {
        return Err(Error::Infeasible("target degree 0 disconnects".into()));
    }

    let tree = dfs_tree_edges(g);
    let tree_degree = {
        let mut d = vec![0usize; g.n()];
        for &(u, v) in &tree {
            d[u] += 1;
            d[v] += 1;
        }
        d
    };
    if let Some(bad) = tree_degree.iter().position(|&d| d > target_k) {
        return Err(Error::Infeasible(format!(
            "spanning tree forces degree {} at node {bad}, above target {target_k}",
            tree_degree[bad]
        )));
    }

    let tree_set: std::collections::HashSet<(usize, usize)> = tree.into_iter().collect();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut degree = {
        let mut d = vec![0usize; g.n()];
        for &(u, v) in &edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    };

    while let Some(d_cur) = degree.iter().copied().max().filter(|&d| d > target_k) {
        // Among deletable edges touching a currently-maximum-degree node,
        // prefer the one relieving the most total degree; ties go to the
        // lexicographically smallest edge for determinism.
        let candidate = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| !tree_set.contains(e))
            .filter(|(_, &(u, v))| degree[u] == d_cur || degree[v] == d_cur)
            .max_by(|(_, a), (_, b)| {
                let score = |e: &(usize, usize)| degree[e.0] + degree[e.1];
                score(a).cmp(&score(b)).then(b.cmp(a))
            })
            .map(|(idx, _)| idx);
        match candidate {
            Some(idx) => {
                let (u, v) = edges.swap_remove(idx);
                degree[u] -= 1;
                degree[v] -= 1;
            }
            None => {
                return Err(Error::Infeasible(format!(
                    "no deletable edge left at degree {d_cur} nodes"
                )));
            }
        }
    }
    Graph::new(g.n(), &edges)
}

fn dfs_tree_edges(g: &Graph) -> Vec<(usize, usize)> {
    let mut visited = vec![false; g.n()];
    let mut stack = vec![0usize];
    visited[0] = true;
    let mut edges = Vec::with_capacity(g.n().saturating_sub(1));
    while let Some(u) = stack.last().copied() {
        let next = g.neighbors(u).iter().copied().find(|&v| !visited[v]);
        match next {
            Some(v) => {
                visited[v] = true;
                edges.push((u.min(v), u.max(v)));
                stack.push(v);
            }
            None => {
                stack.pop();
            }
        }
    }
    edges
}
