//! The iterative algorithms: belief consensus `x <- W x` under three weight
//! schemes, and the reweighted belief-propagation consensus (URW-BPC)
//! two-step recursion
//!
//! ```text
//! x(1) = x(0) + rho * A x(0)
//! x(l) = rho * A x(l-1) + (I - rho * D) x(l-2)
//! ```
//!
//! which is the linear form of uniformly reweighted BP on the equality-
//! constrained fusion factor graph. Self-loops count the node's own previous
//! value once per loop in the neighbor sum, matching A_ii = s_i.

mod fusion;
mod oracle;

pub use fusion::{fuse_posterior, write_posterior_csv, LikelihoodTable};
pub use oracle::urwbp_message_oracle;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{symmetric_eigenvalues, Mat};

/// Weighting rule for belief consensus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightScheme {
    /// W_nm = 1 / (max(d_n, d_m) + 1) on edges, diagonal fills to row sum 1.
    Metropolis,
    /// W_nm = xi on edges, diagonal 1 - xi * d_n; needs 0 < xi < 1/d_max.
    UniformWeight(f64),
    /// W = I - eps * L; needs 0 < eps < 2 / lambda_max(L).
    LaplacianStep(f64),
}

impl WeightScheme {
    pub fn name(&self) -> String {
        match self {
            WeightScheme::Metropolis => "metropolis".into(),
            WeightScheme::UniformWeight(xi) => format!("uniform@{xi}"),
            WeightScheme::LaplacianStep(eps) => format!("laplacian@{eps}"),
        }
    }
}

/// Builds the consensus weight matrix for a connected loop-free graph.
/// Metropolis and uniform weights yield a symmetric doubly stochastic W with
/// zeros off the edge set.
pub fn build_weight_matrix(g: &Graph, scheme: &WeightScheme) -> Result<Mat> {
    if g.has_self_loops() {
        return Err(Error::InvalidInput(
            "consensus weights are defined on loop-free graphs".into(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut w = Mat::zeros(n);
    match *scheme {
        WeightScheme::Metropolis => {
            for &(u, v) in g.edges() {
                let wuv = 1.0 / (g.degree(u).max(g.degree(v)) as f64 + 1.0);
                w.set(u, v, wuv);
                w.set(v, u, wuv);
            }
            for i in 0..n {
                let off: f64 = g.neighbors(i).iter().map(|&j| w.get(i, j)).sum();
                w.set(i, i, 1.0 - off);
            }
        }
        WeightScheme::UniformWeight(xi) => {
            let d_max = g.max_degree() as f64;
            if !(xi > 0.0 && xi < 1.0 / d_max) {
                return Err(Error::InvalidInput(format!(
                    "uniform weight xi = {xi} outside (0, 1/{d_max})"
                )));
            }
            for &(u, v) in g.edges() {
                w.set(u, v, xi);
                w.set(v, u, xi);
            }
            for i in 0..n {
                w.set(i, i, 1.0 - xi * g.degree(i) as f64);
            }
        }
        WeightScheme::LaplacianStep(eps) => {
            let l = g.laplacian();
            let lap_max = symmetric_eigenvalues(&l, 1e-12)?
                .into_iter()
                .fold(0.0f64, f64::max);
            if !(eps > 0.0 && eps < 2.0 / lap_max) {
                return Err(Error::InvalidInput(format!(
                    "laplacian step eps = {eps} outside (0, {})",
                    2.0 / lap_max
                )));
            }
            for i in 0..n {
                for j in 0..n {
                    let id = if i == j { 1.0 } else { 0.0 };
                    w.set(i, j, id - eps * l.get(i, j));
                }
            }
        }
    }
    Ok(w)
}

/// Iteration state. Belief consensus only uses `x_curr`; URW-BPC keeps the
/// two-step memory in `x_prev`.
#[derive(Debug, Clone)]
pub struct ConsensusState {
    pub x_curr: Vec<f64>,
    pub x_prev: Vec<f64>,
    pub iteration: usize,
}

/// URW-BPC run parameters. `rho` must be positive; Theorem-2-style interval
/// checks are contextual (they need the graph) and live at the call sites
/// that promise convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpcConfig {
    pub rho: f64,
    pub preserve_check: bool,
}

impl BpcConfig {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidInput(format!(
                "reweighting parameter rho = {rho} must be positive"
            )));
        }
        Ok(BpcConfig {
            rho,
            preserve_check: false,
        })
    }

    pub fn with_preserve_check(mut self) -> Self {
        self.preserve_check = true;
        self
    }
}

pub fn bc_init(x0: &[f64]) -> ConsensusState {
    ConsensusState {
        x_curr: x0.to_vec(),
        x_prev: Vec::new(),
        iteration: 0,
    }
}

/// One belief-consensus step: x <- W x.
pub fn bc_step(state: &mut ConsensusState, w: &Mat) {
    state.x_curr = w.matvec(&state.x_curr);
    state.iteration += 1;
}

/// First URW-BPC update: x(1) = (I + rho A) x(0). Self-loops contribute
/// rho * s_n * x_n.
pub fn bpc_init(g: &Graph, x0: &[f64], rho: f64) -> ConsensusState {
    assert_eq!(x0.len(), g.n());
    let x_curr = (0..g.n())
        .map(|i| {
            let mut acc: f64 = g.neighbors(i).iter().map(|&j| x0[j]).sum();
            acc += g.self_loops(i) as f64 * x0[i];
            x0[i] + rho * acc
        })
        .collect();
    ConsensusState {
        x_curr,
        x_prev: x0.to_vec(),
        iteration: 1,
    }
}

/// One URW-BPC step: new x = rho * A x_curr + (I - rho D) x_prev.
pub fn bpc_step(g: &Graph, state: &mut ConsensusState, rho: f64) {
    debug_assert!(state.iteration >= 1);
    let next: Vec<f64> = (0..g.n())
        .map(|i| {
            let mut acc: f64 = g.neighbors(i).iter().map(|&j| state.x_curr[j]).sum();
            acc += g.self_loops(i) as f64 * state.x_curr[i];
            rho * acc + (1.0 - rho * g.degree(i) as f64) * state.x_prev[i]
        })
        .collect();
    state.x_prev = std::mem::replace(&mut state.x_curr, next);
    state.iteration += 1;
}

/// The quantity alpha_1 = c_1^T z / (c_1^T b_1) with z = [x_curr; x_prev],
/// c_1^T = [1^T, 1^T - rho 1^T D], b_1 = 1. It is preserved by every
/// URW-BPC step and equals the consensus value when the run converges.
pub fn alpha1(g: &Graph, state: &ConsensusState, rho: f64) -> f64 {
    let top: f64 = state.x_curr.iter().sum();
    let bottom: f64 = (0..g.n())
        .map(|i| (1.0 - rho * g.degree(i) as f64) * state.x_prev[i])
        .sum();
    (top + bottom) / (2.0 * g.n() as f64 - rho * g.degree_sum() as f64)
}

/// Closed-form consensus value 2 * sum(x0) / (2N - rho * trace(D)).
/// For trees at rho = 1 this reduces to sum(x0); for k-regular graphs it is
/// sum(x0) / (N (1 - rho k / 2)).
pub fn bpc_consensus_value(g: &Graph, x0: &[f64], rho: f64) -> Result<f64> {
    let denom = 2.0 * g.n() as f64 - rho * g.degree_sum() as f64;
    if denom.abs() < 1e-9 * 2.0 * g.n() as f64 {
        return Err(Error::DegenerateSpectrum(format!(
            "consensus scaling 2N - rho*trace(D) = {denom} is degenerate at rho = {rho}"
        )));
    }
    Ok(2.0 * x0.iter().sum::<f64>() / denom)
}

/// Which algorithm a driver run executes.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Bc(WeightScheme),
    UrwBpc(BpcConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIters,
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub state: ConsensusState,
    pub iterations: usize,
    /// Squared 2-norm distance to the target consensus vector at every
    /// iteration, starting from iteration 0.
    pub trace: Vec<f64>,
    pub reason: StopReason,
    /// Windowed growth verdict; see [`trace_is_diverging`].
    pub diverging: bool,
    /// Max relative drift of alpha_1 over the run, when tracking was enabled.
    pub alpha_drift: Option<f64>,
}

fn err_stats(x: &[f64], target: f64) -> (f64, f64) {
    let mut sq = 0.0;
    let mut inf: f64 = 0.0;
    for &v in x {
        let d = v - target;
        sq += d * d;
        inf = inf.max(d.abs());
    }
    (sq, inf)
}

/// A trace is diverging when it ends non-finite, or when it is still growing
/// over the trailing 20-iteration window and sits above its starting error.
/// The trailing-window form tolerates the transient growth that tree runs
/// show before their finite-time convergence.
pub fn trace_is_diverging(trace: &[f64]) -> bool {
    match trace.last() {
        None => false,
        Some(last) if !last.is_finite() => true,
        Some(&last) => {
            trace.len() > 20 && last > trace[trace.len() - 21] && last > trace[0]
        }
    }
}

/// Runs `algo` from `x0` until the distance to the analytic consensus target
/// drops below `tol` in the infinity norm, or `max_iters` is reached.
///
/// The target is the mean of `x0` for belief consensus and the preserved
/// quantity from [`bpc_consensus_value`] for URW-BPC. Hitting `max_iters` is
/// reported through `reason`, not as an error, so callers can observe
/// divergence for out-of-range rho.
pub fn run_to_convergence(
    g: &Graph,
    x0: &[f64],
    algo: &Algorithm,
    tol: f64,
    max_iters: usize,
) -> Result<RunResult> {
    if x0.len() != g.n() {
        return Err(Error::InvalidInput(format!(
            "initial vector has length {}, graph has {} nodes",
            x0.len(),
            g.n()
        )));
    }
    match algo {
        Algorithm::Bc(scheme) => {
            let w = build_weight_matrix(g, scheme)?;
            let target = x0.iter().sum::<f64>() / g.n() as f64;
            let mut state = bc_init(x0);
            drive(g, &mut state, target, tol, max_iters, None, |g, state| {
                let _ = g;
                bc_step(state, &w);
            })
        }
        Algorithm::UrwBpc(cfg) => {
            let target = bpc_consensus_value(g, x0, cfg.rho)?;
            let rho = cfg.rho;
            let mut state = bc_init(x0); // iteration 0 holds x0 alone
            let track = cfg.preserve_check.then_some(rho);
            drive(g, &mut state, target, tol, max_iters, track, move |g, state| {
                if state.iteration == 0 {
                    *state = bpc_init(g, &state.x_curr, rho);
                } else {
                    bpc_step(g, state, rho);
                }
            })
        }
    }
}

fn drive<F>(
    g: &Graph,
    state: &mut ConsensusState,
    target: f64,
    tol: f64,
    max_iters: usize,
    track_alpha_rho: Option<f64>,
    mut step: F,
) -> Result<RunResult>
where
    F: FnMut(&Graph, &mut ConsensusState),
{
    let mut trace = Vec::with_capacity(max_iters + 1);
    let mut alpha_ref: Option<f64> = None;
    let mut alpha_drift: Option<f64> = None;
    let (sq, inf) = err_stats(&state.x_curr, target);
    trace.push(sq);
    let mut reason = if inf < tol {
        StopReason::Converged
    } else {
        StopReason::MaxIters
    };
    while reason == StopReason::MaxIters && state.iteration < max_iters {
        step(g, state);
        let (sq, inf) = err_stats(&state.x_curr, target);
        trace.push(sq);
        if let Some(rho) = track_alpha_rho {
            // alpha_1 is defined once the two-step memory exists.
            if state.iteration >= 1 {
                let a = alpha1(g, state, rho);
                let reference = *alpha_ref.get_or_insert(a);
                let scale = reference.abs().max(1e-300);
                let drift = (a - reference).abs() / scale;
                alpha_drift = Some(alpha_drift.unwrap_or(0.0).max(drift));
            }
        }
        if !sq.is_finite() {
            reason = StopReason::NonFinite;
        } else if inf < tol {
            reason = StopReason::Converged;
        }
    }
    let diverging = trace_is_diverging(&trace);
    Ok(RunResult {
        iterations: state.iteration,
        state: std::mem::replace(
            state,
            ConsensusState {
                x_curr: Vec::new(),
                x_prev: Vec::new(),
                iteration: 0,
            },
        ),
        trace,
        reason,
        diverging,
        alpha_drift,
    })
}

/// Streams a trace as CSV rows `iteration,error_sq`.
pub fn write_trace_csv<W: std::io::Write>(trace: &[f64], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "iteration,error_sq")?;
    for (i, e) in trace.iter().enumerate() {
        writeln!(out, "{i},{e}")?;
    }
    Ok(())
}
