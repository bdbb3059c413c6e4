//! Undirected graphs with optional self-loops, plus the generators and
//! regularization transforms the experiments run on.
//!
//! The self-loop convention: one self-loop adds exactly 1 to both A_ii and
//! D_ii, so a loop contributes the node's own previous value once per loop to
//! the reweighted neighbor sum. Under this convention a graph regularized by
//! loop addition is exactly d_max-regular in the adjacency algebra.

mod generate;
mod io;
mod regularize;

pub use generate::{circulant_small_world, random_k_regular, random_tree};
pub use io::{parse_edge_list, read_edge_list, write_edge_list};
pub use regularize::{add_self_loops_to_regularize, delete_edges_to_regularize};

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Immutable undirected graph on nodes `0..n` with per-node self-loop counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Canonical edge list: u < v, sorted, no duplicates.
    edges: Vec<(usize, usize)>,
    /// Self-loop count per node.
    self_loops: Vec<usize>,
    /// Loop-free adjacency lists, each sorted ascending.
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a loop-free graph from an edge list. Edges may be given in
    /// either orientation; duplicates and self-edges are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::with_self_loops(n, edges, &[])
    }

    /// Builds a graph with explicit self-loop counts. `loops` may be shorter
    /// than `n`; missing entries default to zero.
    pub fn with_self_loops(n: usize, edges: &[(usize, usize)], loops: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph needs at least one node".into()));
        }
        if loops.len() > n {
            return Err(Error::InvalidInput(format!(
                "{} self-loop entries for {} nodes",
                loops.len(),
                n
            )));
        }
        let mut canon: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!(
                    "self-edge ({a}, {a}); use a self-loop count instead"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate edge".into()));
        }
        let mut self_loops = loops.to_vec();
        self_loops.resize(n, 0);
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &canon {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for adj in &mut neighbors {
            adj.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: canon,
            self_loops,
            neighbors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Loop-free neighbors of `i`, sorted ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn self_loops(&self, i: usize) -> usize {
        self.self_loops[i]
    }

    pub fn has_self_loops(&self) -> bool {
        self.self_loops.iter().any(|&s| s > 0)
    }

    /// degree(i) = |loop-free neighbors| + self-loop count.
    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len() + self.self_loops[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Sum of all degrees, i.e. trace of the degree matrix.
    pub fn degree_sum(&self) -> usize {
        2 * self.edges.len() + self.self_loops.iter().sum::<usize>()
    }

    /// Common degree if every node has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.degree(0);
        (1..self.n).all(|i| self.degree(i) == k).then_some(k)
    }

    /// The same graph with all self-loops removed.
    pub fn loop_free_skeleton(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.clone(),
            self_loops: vec![0; self.n],
            neighbors: self.neighbors.clone(),
        }
    }

    /// A_ij = 1 iff {i,j} is an edge; A_ii = self-loop count of i.
    pub fn adjacency(&self) -> Mat {
        let mut a = Mat::zeros(self.n);
        for &(u, v) in &self.edges {
            a.set(u, v, 1.0);
            a.set(v, u, 1.0);
        }
        for i in 0..self.n {
            a.set(i, i, self.self_loops[i] as f64);
        }
        a
    }

    pub fn degree_matrix(&self) -> Mat {
        let mut d = Mat::zeros(self.n);
        for i in 0..self.n {
            d.set(i, i, self.degree(i) as f64);
        }
        d
    }

    /// L = D - A. For loop-free graphs every row sums to zero; self-loops
    /// cancel between D and A so they leave L unchanged.
    pub fn laplacian(&self) -> Mat {
        let mut l = Mat::zeros(self.n);
        for &(u, v) in &self.edges {
            l.set(u, v, -1.0);
            l.set(v, u, -1.0);
        }
        for i in 0..self.n {
            l.set(i, i, self.neighbors[i].len() as f64);
        }
        l
    }

    /// BFS distances from `src`; unreachable nodes hold `usize::MAX`.
    fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// True when the graph is loop-free and acyclic-connected.
    pub fn is_tree(&self) -> bool {
        !self.has_self_loops() && self.edges.len() + 1 == self.n && self.is_connected()
    }

    /// 2-colorability. Any self-loop is an odd cycle, so it breaks
    /// bipartiteness immediately.
    pub fn is_bipartite(&self) -> bool {
        if self.has_self_loops() {
            return false;
        }
        let mut color = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.neighbors[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Longest shortest path. Trees use the double-BFS trick; everything else
    /// falls back to all-source BFS.
    pub fn diameter(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.n == 1 {
            return Ok(0);
        }
        if self.edges.len() + 1 == self.n {
            let first = self.bfs_distances(0);
            let far = (0..self.n).max_by_key(|&i| first[i]).unwrap();
            let second = self.bfs_distances(far);
            return Ok(second.into_iter().max().unwrap());
        }
        let mut best = 0;
        for src in 0..self.n {
            let d = self.bfs_distances(src).into_iter().max().unwrap();
            best = best.max(d);
        }
        Ok(best)
    }

    pub fn classify(&self) -> GraphClass {
        if self.is_tree() {
            return GraphClass::Tree;
        }
        match self.regular_degree() {
            Some(k) if self.is_bipartite() => GraphClass::BipartiteRegular(k),
            Some(k) => GraphClass::KRegular(k),
            None => GraphClass::General,
        }
    }
}

/// Structural class of a graph. `CirculantSmallWorld` is a generator tag;
/// classification cannot distinguish it from any other k-regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    Tree,
    KRegular(usize),
    CirculantSmallWorld(usize),
    General,
    BipartiteRegular(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn adjacency_of_two_node_path() {
        let g = path(2);
        let a = g.adjacency();
        assert_eq!(a.get(0, 0), 0.0);
        assert_eq!(a.get(0, 1), 1.0);
        assert_eq!(a.get(1, 0), 1.0);
        assert_eq!(a.get(1, 1), 0.0);
    }

    #[test]
    fn adjacency_of_triangle_is_all_ones_minus_identity() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let a = g.adjacency();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { 1.0 };
                assert_eq!(a.get(i, j), want);
            }
        }
    }

    #[test]
    fn self_loop_convention_in_adjacency_and_degree() {
        let g = Graph::with_self_loops(1, &[], &[2]).unwrap();
        assert_eq!(g.adjacency().get(0, 0), 2.0);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree_matrix().get(0, 0), 2.0);
    }

    #[test]
    fn laplacian_rows_sum_to_zero_for_loop_free() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)]).unwrap();
        let l = g.laplacian();
        for i in 0..5 {
            let s: f64 = l.row(i).iter().sum();
            assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn laplacian_quadratic_form_is_nonnegative() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let l = g.laplacian();
        // x^T L x = sum over edges of (x_u - x_v)^2 >= 0
        let mut seed = 0x9e3779b97f4a7c15u64;
        for _ in 0..20 {
            let x: Vec<f64> = (0..6)
                .map(|_| {
                    seed ^= seed << 13;
                    seed ^= seed >> 7;
                    seed ^= seed << 17;
                    (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                })
                .collect();
            let lx = l.matvec(&x);
            let q: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
            assert!(q >= -1e-12, "quadratic form was {q}");
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(2, &[(0, 0)]).is_err());
        assert!(Graph::new(2, &[(0, 2)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(0, &[]).is_err());
    }

    #[test]
    fn diameter_of_p5_is_4() {
        assert_eq!(path(5).diameter().unwrap(), 4);
    }

    #[test]
    fn diameter_errors_on_disconnected() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert!(matches!(g.diameter(), Err(Error::Disconnected)));
    }

    #[test]
    fn bipartite_cycles() {
        let c6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(c6.is_bipartite());
        assert!(!c5.is_bipartite());
    }

    #[test]
    fn self_loop_breaks_bipartiteness() {
        let g = Graph::with_self_loops(2, &[(0, 1)], &[1, 0]).unwrap();
        assert!(!g.is_bipartite());
    }

    #[test]
    fn classify_basic_shapes() {
        assert_eq!(path(4).classify(), GraphClass::Tree);
        let c6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(c6.classify(), GraphClass::BipartiteRegular(2));
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(c5.classify(), GraphClass::KRegular(2));
        let paw = Graph::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(paw.classify(), GraphClass::General);
    }

    #[test]
    fn degree_sum_counts_loops_once() {
        let g = Graph::with_self_loops(3, &[(0, 1), (1, 2)], &[0, 0, 2]).unwrap();
        assert_eq!(g.degree_sum(), 2 * 2 + 2);
        assert_eq!(g.degree(2), 3);
    }
}
