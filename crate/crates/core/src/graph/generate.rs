//! Random graph generators: uniform labeled trees via Prüfer sequences, a
//! configuration-model sampler for k-regular graphs, and the deterministic
//! circulant small-world construction.
//!
//! Every generator is a pure function of its parameters and the RNG state,
//! so a seeded RNG reproduces the graph exactly.

use rand::seq::SliceRandom;
use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Rejection budget shared by the tree diameter targeting and the
/// configuration-model sampler.
const ATTEMPT_BUDGET: usize = 100_000;

/// Uniform random labeled tree on `n >= 2` nodes, decoded from a uniform
/// Prüfer sequence.
///
/// With `target_diameter` set, resamples until the diameter matches exactly.
/// Uniform trees concentrate their diameter around sqrt(n), so targets far
/// outside that band (the interesting ones) would never survive rejection;
/// once the budget runs out the sampler switches to constrained random
/// growth around a backbone path, which realizes any feasible diameter.
pub fn random_tree<R: Rng>(
    n: usize,
    target_diameter: Option<usize>,
    rng: &mut R,
) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidInput("random_tree needs n >= 2".into()));
    }
    let Some(d) = target_diameter else {
        return Ok(prufer_tree(n, rng));
    };
    if d == 0 || d > n - 1 || (d < 2 && n > 2) {
        return Err(Error::InvalidInput(format!(
            "tree on {n} nodes cannot have diameter {d}"
        )));
    }
    let mut best_miss = usize::MAX;
    for attempt in 0..ATTEMPT_BUDGET {
        let tree = prufer_tree(n, rng);
        let miss = tree.diameter()?.abs_diff(d);
        if miss == 0 {
            return Ok(tree);
        }
        best_miss = best_miss.min(miss);
        // Never landing within 1 of the target in the first chunk of
        // attempts means the target sits far outside the uniform
        // concentration band; skip straight to constrained growth.
        if attempt == ATTEMPT_BUDGET / 20 && best_miss >= 2 {
            break;
        }
    }
    backbone_tree(n, d, rng)
}

/// Random tree with diameter exactly `d`: a backbone path of d+1 random
/// labels, plus the remaining labels attached one by one to uniformly chosen
/// parents whose subtree depth budget still allows a child.
///
/// A node hanging at depth t under backbone position m keeps the diameter at
/// d as long as t <= min(m, d - m): its distance to either backbone end stays
/// within d, and for two such nodes t1 + |m1 - m2| + t2 <= m1 + (m2 - m1) +
/// (d - m2) = d.
fn backbone_tree<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<Graph> {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges = Vec::with_capacity(n - 1);
    for w in labels.windows(2).take(d) {
        edges.push((w[0], w[1]));
    }
    // (label, remaining depth budget) of every node that may take a child.
    let mut slots: Vec<(usize, usize)> = (1..d)
        .map(|m| (labels[m], m.min(d - m)))
        .filter(|&(_, budget)| budget > 0)
        .collect();
    for &label in &labels[d + 1..] {
        if slots.is_empty() {
            return Err(Error::InvalidInput(format!(
                "tree on {n} nodes cannot have diameter {d}"
            )));
        }
        let (parent, budget) = slots[rng.random_range(0..slots.len())];
        edges.push((parent, label));
        if budget > 1 {
            slots.push((label, budget - 1));
        }
    }
    Graph::new(n, &edges)
}

fn prufer_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    if n == 2 {
        return Graph::new(2, &[(0, 1)]).expect("valid two-node tree");
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &a in &seq {
        degree[a] += 1;
    }
    // Min-heap over current leaves keeps the decode deterministic.
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&i| degree[i] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("prufer decode invariant");
        edges.push((leaf, a));
        degree[leaf] -= 1;
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.push(std::cmp::Reverse(a));
        }
    }
    let std::cmp::Reverse(u) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(v) = leaves.pop().expect("two leaves remain");
    edges.push((u, v));
    Graph::new(n, &edges).expect("prufer decode yields a valid tree")
}

/// Connected simple k-regular graph by configuration-model stub pairing.
/// Pairings with self-pairs, duplicate edges, or a disconnected result are
/// rejected wholesale and resampled.
pub fn random_k_regular<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<Graph> {
    if k >= n {
        return Err(Error::InvalidInput(format!(
            "degree k = {k} must be below n = {n}"
        )));
    }
    if n * k % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "n * k = {} must be even",
            n * k
        )));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k = 0 cannot be connected".into()));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat(i).take(k)).collect();
    'attempt: for _ in 0..ATTEMPT_BUDGET {
        stubs.shuffle(rng);
        let mut seen = std::collections::HashSet::with_capacity(n * k / 2);
        let mut edges = Vec::with_capacity(n * k / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        let g = Graph::new(n, &edges).expect("pairing produced canonical edges");
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::BudgetExhausted {
        what: "random_k_regular configuration model",
        budget: ATTEMPT_BUDGET,
    })
}

/// Ring of `n` nodes where node i links to its k/2 nearest neighbors on each
/// side. The adjacency eigenvalues have the closed form
/// mu_j = 2 * sum_{m=1..k/2} cos(2 pi j m / n).
pub fn circulant_small_world(n: usize, k: usize) -> Result<Graph> {
    if k % 2 != 0 {
        return Err(Error::InvalidInput(format!("circulant degree k = {k} must be even")));
    }
    if k >= n {
        return Err(Error::InvalidInput(format!(
            "circulant degree k = {k} must be below n = {n}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k = 0 cannot be connected".into()));
    }
    let mut edges = std::collections::BTreeSet::new();
    for i in 0..n {
        for m in 1..=k / 2 {
            let j = (i + m) % n;
            edges.insert((i.min(j), i.max(j)));
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    Graph::new(n, &edges)
}
