//! Explicit reweighted message passing over the fusion factor graph, used as
//! an executable cross-check of the linear two-step recursion.
//!
//! Messages live in the log domain: with mu(0) = 1 everywhere,
//!
//! ```text
//! log mu_{m->n}(l) = log b_m(l-1) - log mu_{n->m}(l-1)
//! log b_n(l)       = loglik_n + rho * sum_{m in N_n} log mu_{m->n}(l)
//! ```
//!
//! Beliefs (and messages) are only defined up to a per-hypothesis-row
//! constant, so every vector is re-centered by its maximum after each
//! update; comparisons against the linear recursion must center both sides.

use super::LikelihoodTable;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Runs the message-passing recursion for `l_max` iterations and returns the
/// per-iteration n x K log-belief grids, entry `[l][node * K + t]`, each node
/// row centered so its maximum is zero. Index 0 holds the initial beliefs.
///
/// Requires rho in (0, 1], the range where the message form is defined.
pub fn urwbp_message_oracle(
    g: &Graph,
    table: &LikelihoodTable,
    rho: f64,
    l_max: usize,
) -> Result<Vec<Vec<f64>>> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "message oracle needs rho in (0, 1], got {rho}"
        )));
    }
    if table.n != g.n() {
        return Err(Error::InvalidInput(format!(
            "table has {} rows, graph has {} nodes",
            table.n,
            g.n()
        )));
    }
    let n = g.n();
    let kk = table.k;

    // Directed message slots: two per undirected edge, one per self-loop.
    // A self-loop message is its own reverse.
    let mut reverse = Vec::new();
    let mut incoming = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        let a = reverse.len();
        let b = a + 1;
        reverse.push(b);
        reverse.push(a);
        incoming[v].push(a); // u -> v
        incoming[u].push(b); // v -> u
    }
    for i in 0..n {
        for _ in 0..g.self_loops(i) {
            let id = reverse.len();
            reverse.push(id);
            incoming[i].push(id);
        }
    }
    let slots = reverse.len();
    // Slot origin: message a = u -> v originates at u.
    let mut origin = vec![0usize; slots];
    {
        let mut id = 0;
        for &(u, v) in g.edges() {
            origin[id] = u;
            origin[id + 1] = v;
            id += 2;
        }
        for i in 0..n {
            for _ in 0..g.self_loops(i) {
                origin[id] = i;
                id += 1;
            }
        }
    }

    let mut messages = vec![vec![0.0f64; kk]; slots];
    let mut beliefs: Vec<f64> = table.loglik.clone();
    for m in 0..n {
        center_row(&mut beliefs[m * kk..(m + 1) * kk]);
    }
    let mut grids = Vec::with_capacity(l_max + 1);
    grids.push(beliefs.clone());

    for _ in 0..l_max {
        // All messages update synchronously from the previous iteration.
        let mut next_messages = vec![vec![0.0f64; kk]; slots];
        for id in 0..slots {
            let from = origin[id];
            let rev = &messages[reverse[id]];
            let row = &beliefs[from * kk..(from + 1) * kk];
            let out = &mut next_messages[id];
            for t in 0..kk {
                out[t] = row[t] - rev[t];
            }
            center_row(out);
        }
        messages = next_messages;
        let mut next_beliefs = table.loglik.clone();
        for node in 0..n {
            let row = &mut next_beliefs[node * kk..(node + 1) * kk];
            for &id in &incoming[node] {
                for t in 0..kk {
                    row[t] += rho * messages[id][t];
                }
            }
            center_row(row);
        }
        beliefs = next_beliefs;
        grids.push(beliefs.clone());
    }
    Ok(grids)
}

fn center_row(row: &mut [f64]) {
    let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_finite() {
        for v in row.iter_mut() {
            *v -= m;
        }
    }
}
