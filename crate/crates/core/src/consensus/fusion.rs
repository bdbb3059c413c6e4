//! Likelihood fusion: run a consensus algorithm over each hypothesis column
//! of a log-likelihood table, rescale the converged values back to the global
//! log-likelihood sum, and normalize into per-node posteriors.

use super::{bc_init, bc_step, bpc_init, bpc_step, build_weight_matrix, Algorithm};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// n x K grid of log-likelihood values log p(y_m | theta_t) plus a prior over
/// the K hypothesis values.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodTable {
    pub n: usize,
    pub k: usize,
    /// Row-major n x K.
    pub loglik: Vec<f64>,
    pub prior: Vec<f64>,
}

impl LikelihoodTable {
    pub fn new(n: usize, k: usize, loglik: Vec<f64>, prior: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!(
                "hypothesis count K = {k} must be at least 2"
            )));
        }
        if loglik.len() != n * k {
            return Err(Error::InvalidInput(format!(
                "log-likelihood grid has {} entries, expected {n} x {k}",
                loglik.len()
            )));
        }
        if loglik.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "log-likelihood entries must be finite".into(),
            ));
        }
        if prior.len() != k {
            return Err(Error::InvalidInput(format!(
                "prior has {} entries, expected {k}",
                prior.len()
            )));
        }
        if prior.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidInput("prior must be nonnegative".into()));
        }
        let total: f64 = prior.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "prior sums to {total}, expected 1"
            )));
        }
        Ok(LikelihoodTable { n, k, loglik, prior })
    }

    #[inline]
    pub fn loglik_at(&self, node: usize, t: usize) -> f64 {
        self.loglik[node * self.k + t]
    }

    /// The per-node column for hypothesis `t`, i.e. the initial consensus
    /// vector x(0) for that hypothesis.
    pub fn column(&self, t: usize) -> Vec<f64> {
        (0..self.n).map(|m| self.loglik_at(m, t)).collect()
    }
}

/// Runs consensus on every hypothesis column and returns the n x K row-major
/// posterior grid. Each node's converged value is rescaled to the global sum
/// of log-likelihoods (times N for belief consensus, times
/// (2N - rho trace(D)) / 2 for URW-BPC), the log prior is added, and each
/// node's row is exponentiated and normalized.
///
/// Iterations stop once the infinity norm of the per-iteration change falls
/// below `tol`; running out of iterations on any column is an error.
pub fn fuse_posterior(
    g: &Graph,
    table: &LikelihoodTable,
    algo: &Algorithm,
    tol: f64,
    max_iters: usize,
) -> Result<Vec<f64>> {
    if table.n != g.n() {
        return Err(Error::InvalidInput(format!(
            "table has {} rows, graph has {} nodes",
            table.n,
            g.n()
        )));
    }
    let n = g.n();
    let kk = table.k;

    // Single node: the posterior is prior * exp(loglik) with no iterations.
    if n == 1 {
        let mut row: Vec<f64> = (0..kk)
            .map(|t| table.prior[t].ln() + table.loglik_at(0, t))
            .collect();
        normalize_log_row(&mut row);
        return Ok(row);
    }

    let mut global = vec![0.0f64; n * kk];
    match algo {
        Algorithm::Bc(scheme) => {
            let skeleton;
            let w = if g.has_self_loops() {
                // Consensus weights live on the edge set only.
                skeleton = g.loop_free_skeleton();
                build_weight_matrix(&skeleton, scheme)?
            } else {
                build_weight_matrix(g, scheme)?
            };
            for t in 0..kk {
                let x = converge_bc(&w, &table.column(t), tol, max_iters)?;
                for m in 0..n {
                    global[m * kk + t] = n as f64 * x[m];
                }
            }
        }
        Algorithm::UrwBpc(cfg) => {
            let rho = cfg.rho;
            if let Some(k) = g.regular_degree() {
                if k >= 2 && rho >= 2.0 / k as f64 {
                    return Err(Error::InvalidInput(format!(
                        "rho = {rho} is outside the convergent interval (0, {}) for a {k}-regular graph",
                        2.0 / k as f64
                    )));
                }
            }
            let scale = (2.0 * n as f64 - rho * g.degree_sum() as f64) / 2.0;
            for t in 0..kk {
                let x = converge_bpc(g, &table.column(t), rho, tol, max_iters)?;
                for m in 0..n {
                    global[m * kk + t] = scale * x[m];
                }
            }
        }
    }

    let mut posterior = global;
    for m in 0..n {
        let row = &mut posterior[m * kk..(m + 1) * kk];
        for (t, v) in row.iter_mut().enumerate() {
            *v += table.prior[t].ln();
        }
        normalize_log_row(row);
    }
    Ok(posterior)
}

/// In place: row holds unnormalized log weights; leaves probabilities.
fn normalize_log_row(row: &mut [f64]) {
    let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for v in row.iter_mut() {
        *v = (*v - m).exp();
        total += *v;
    }
    for v in row.iter_mut() {
        *v /= total;
    }
}

fn converge_bc(
    w: &crate::linalg::Mat,
    x0: &[f64],
    tol: f64,
    max_iters: usize,
) -> Result<Vec<f64>> {
    let mut state = bc_init(x0);
    for _ in 0..max_iters {
        let prev = state.x_curr.clone();
        bc_step(&mut state, w);
        if inf_change(&state.x_curr, &prev) < tol {
            return Ok(state.x_curr);
        }
    }
    Err(Error::NonConvergence { max_iters })
}

fn converge_bpc(g: &Graph, x0: &[f64], rho: f64, tol: f64, max_iters: usize) -> Result<Vec<f64>> {
    let mut state = bpc_init(g, x0, rho);
    if inf_change(&state.x_curr, &state.x_prev) < tol {
        return Ok(state.x_curr);
    }
    while state.iteration < max_iters {
        bpc_step(g, &mut state, rho);
        if inf_change(&state.x_curr, &state.x_prev) < tol {
            return Ok(state.x_curr);
        }
    }
    Err(Error::NonConvergence { max_iters })
}

fn inf_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Writes the posterior grid as CSV rows `node,theta_index,posterior`.
pub fn write_posterior_csv<W: std::io::Write>(
    posterior: &[f64],
    n: usize,
    k: usize,
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "node,theta_index,posterior")?;
    for m in 0..n {
        for t in 0..k {
            writeln!(out, "{m},{t},{}", posterior[m * k + t])?;
        }
    }
    Ok(())
}
