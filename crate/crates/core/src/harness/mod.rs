//! Monte Carlo experiment runner: normalized-MSE curves, the rate-ratio CDF
//! study, the rho sweep, empirical rate fitting, and spectral report
//! assembly.
//!
//! Every experiment is a pure function of (config, master_seed). Trial t
//! draws from the ChaCha stream `t + 1` of the master seed (stream 0 is
//! reserved for fixed-graph generation), so serial and parallel execution
//! agree bit for bit: trials run on a thread pool but are reduced in trial
//! order.

mod config;

pub use config::{parse_gen_spec, AlgoSpec, ExperimentConfig, GraphSource, InitSpec, RhoChoice};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::consensus::{
    bc_init, bc_step, bpc_init, bpc_step, build_weight_matrix, trace_is_diverging, Algorithm,
    BpcConfig, WeightScheme,
};
use crate::error::{Error, Result};
use crate::graph::{add_self_loops_to_regularize, circulant_small_world, random_k_regular,
    random_tree, read_edge_list, Graph};
use crate::linalg::Mat;
use crate::spectral::{
    adjacency_spectrum, competitor_rate, lambda_magnitude, lambda_tilde_opt,
    metropolis_rate_from_spectrum, mu_tilde, rho_opt, SpectralReport,
};

fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

fn standard_normal_vec<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Per-iteration normalized mean-squared consensus error for one algorithm,
/// averaged over the trials that did not diverge.
#[derive(Debug, Clone)]
pub struct MseSeries {
    pub algorithm: String,
    /// values[l] for l = 0..=iterations; values[0] == 1 whenever the initial
    /// error is nonzero.
    pub values: Vec<f64>,
    pub trials_averaged: usize,
    pub excluded_trials: usize,
}

#[derive(Debug, Clone)]
pub struct MseExperiment {
    pub series: Vec<MseSeries>,
    pub master_seed: u64,
    pub trials: usize,
    pub iterations: usize,
}

/// Runs the configured algorithms side by side and averages the normalized
/// squared consensus error over trials.
///
/// Tree, circulant, and file graphs are fixed across trials; k-regular
/// graphs are redrawn per trial. Both algorithm families are measured
/// against the same target, the average of x(0): belief consensus converges
/// there directly, URW-BPC states are rescaled by (2N - rho trace(D)) / (2N)
/// first. Belief-consensus schemes run on the loop-free skeleton; URW-BPC
/// uses self-loops.
pub fn run_mse_experiment(cfg: &ExperimentConfig) -> Result<MseExperiment> {
    if cfg.algorithms.is_empty() {
        return Err(Error::InvalidInput("no algorithms configured".into()));
    }
    let fixed_graph = match &cfg.graph {
        GraphSource::KRegular { .. } => None,
        source => Some(realize_graph(source, cfg.master_seed)?),
    };
    let fixed_init = match &cfg.init {
        InitSpec::StandardNormal => None,
        InitSpec::FromFile(path) => Some(read_vector(path)?),
    };

    let per_trial: Vec<Vec<Option<Vec<f64>>>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(cfg.master_seed, trial as u64 + 1);
            let graph = match (&fixed_graph, &cfg.graph) {
                (Some(g), _) => g.clone(),
                (None, GraphSource::KRegular { n, k }) => random_k_regular(*n, *k, &mut rng)?,
                _ => unreachable!("non-kregular sources are fixed"),
            };
            let x0 = match &fixed_init {
                Some(v) => {
                    if v.len() != graph.n() {
                        return Err(Error::InvalidInput(format!(
                            "init vector has {} entries, graph has {} nodes",
                            v.len(),
                            graph.n()
                        )));
                    }
                    v.clone()
                }
                None => standard_normal_vec(graph.n(), &mut rng),
            };
            run_trial(&graph, &x0, &cfg.algorithms, cfg.iterations)
        })
        .collect::<Result<Vec<_>>>()?;

    let len = cfg.iterations + 1;
    let mut series = Vec::with_capacity(cfg.algorithms.len());
    for (a, spec) in cfg.algorithms.iter().enumerate() {
        let mut sum = vec![0.0f64; len];
        let mut included = 0usize;
        for trial in &per_trial {
            if let Some(trace) = &trial[a] {
                for (acc, v) in sum.iter_mut().zip(trace) {
                    *acc += v;
                }
                included += 1;
            }
        }
        let values = if included == 0 {
            vec![f64::NAN; len]
        } else {
            let e0 = sum[0] / included as f64;
            if e0 == 0.0 {
                vec![0.0; len]
            } else {
                sum.iter().map(|v| (v / included as f64) / e0).collect()
            }
        };
        series.push(MseSeries {
            algorithm: spec.name(),
            values,
            trials_averaged: included,
            excluded_trials: cfg.trials - included,
        });
    }
    Ok(MseExperiment {
        series,
        master_seed: cfg.master_seed,
        trials: cfg.trials,
        iterations: cfg.iterations,
    })
}

/// One trial: every algorithm runs from the same x(0) on the same graph.
/// Diverging traces come back as `None`.
fn run_trial(
    graph: &Graph,
    x0: &[f64],
    algorithms: &[AlgoSpec],
    iterations: usize,
) -> Result<Vec<Option<Vec<f64>>>> {
    let avg = x0.iter().sum::<f64>() / graph.n() as f64;
    let skeleton = graph.loop_free_skeleton();
    let mut out = Vec::with_capacity(algorithms.len());
    for spec in algorithms {
        let trace = match spec {
            AlgoSpec::Metropolis => {
                bc_series(&build_weight_matrix(&skeleton, &WeightScheme::Metropolis)?, x0, avg, iterations)
            }
            AlgoSpec::Uniform { xi } => {
                bc_series(&build_weight_matrix(&skeleton, &WeightScheme::UniformWeight(*xi))?, x0, avg, iterations)
            }
            AlgoSpec::Laplacian { eps } => {
                bc_series(&build_weight_matrix(&skeleton, &WeightScheme::LaplacianStep(*eps))?, x0, avg, iterations)
            }
            AlgoSpec::UrwBpc { rho } => {
                let rho = resolve_rho(graph, *rho)?;
                bpc_series(graph, x0, rho, avg, iterations)
            }
        };
        let keep = !trace_is_diverging(&trace);
        out.push(keep.then_some(trace));
    }
    Ok(out)
}

/// rho = 1 on trees (finite-time convergence), the Theorem-3 optimum on
/// regular graphs with k >= 2. Other graphs have no closed-form choice;
/// regularize them first.
pub fn resolve_rho(graph: &Graph, choice: RhoChoice) -> Result<f64> {
    match choice {
        RhoChoice::Fixed(rho) => {
            BpcConfig::new(rho)?;
            Ok(rho)
        }
        RhoChoice::Optimal => {
            if graph.is_tree() {
                return Ok(1.0);
            }
            match graph.regular_degree() {
                Some(k) if k >= 2 => {
                    let spectrum = adjacency_spectrum(graph, 1e-12)?;
                    rho_opt(mu_tilde(&spectrum, k, 1e-9)?, k)
                }
                _ => Err(Error::InvalidInput(
                    "urwbpc:opt needs a tree or a regular graph; apply `regularize` first".into(),
                )),
            }
        }
    }
}

fn bc_series(w: &Mat, x0: &[f64], avg: f64, iterations: usize) -> Vec<f64> {
    let mut state = bc_init(x0);
    let mut trace = Vec::with_capacity(iterations + 1);
    trace.push(scaled_err_sq(&state.x_curr, 1.0, avg));
    for _ in 0..iterations {
        bc_step(&mut state, w);
        trace.push(scaled_err_sq(&state.x_curr, 1.0, avg));
    }
    trace
}

fn bpc_series(g: &Graph, x0: &[f64], rho: f64, avg: f64, iterations: usize) -> Vec<f64> {
    let sigma = (2.0 * g.n() as f64 - rho * g.degree_sum() as f64) / (2.0 * g.n() as f64);
    let mut trace = Vec::with_capacity(iterations + 1);
    trace.push(scaled_err_sq(x0, sigma, avg));
    if iterations == 0 {
        return trace;
    }
    let mut state = bpc_init(g, x0, rho);
    trace.push(scaled_err_sq(&state.x_curr, sigma, avg));
    while state.iteration < iterations {
        bpc_step(g, &mut state, rho);
        trace.push(scaled_err_sq(&state.x_curr, sigma, avg));
    }
    trace
}

fn scaled_err_sq(x: &[f64], sigma: f64, avg: f64) -> f64 {
    x.iter()
        .map(|&v| {
            let d = sigma * v - avg;
            d * d
        })
        .sum()
}

/// Materializes a non-per-trial graph source. Random trees draw from the
/// reserved stream 0 of the master seed.
pub fn realize_graph(source: &GraphSource, master_seed: u64) -> Result<Graph> {
    match source {
        GraphSource::Tree { n, diameter } => {
            random_tree(*n, *diameter, &mut stream_rng(master_seed, 0))
        }
        GraphSource::KRegular { n, k } => {
            random_k_regular(*n, *k, &mut stream_rng(master_seed, 0))
        }
        GraphSource::Circulant { n, k } => circulant_small_world(*n, *k),
        GraphSource::File(path) => read_edge_list(path),
        GraphSource::Fixed(g) => Ok(g.clone()),
    }
}

fn read_vector(path: &std::path::Path) -> Result<Vec<f64>> {
    std::fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad vector entry {l:?}")))
        })
        .collect()
}

/// Draws `samples` random k-regular graphs and returns the sorted ratios
/// r = |lambda_2,BPC at rho_opt| / |lambda_2,Metropolis|. The paper-level
/// claim is that every ratio sits strictly below one.
pub fn ratio_cdf_experiment(
    n: usize,
    k: usize,
    samples: usize,
    master_seed: u64,
) -> Result<Vec<f64>> {
    if samples < 1 {
        return Err(Error::InvalidInput("samples must be >= 1".into()));
    }
    let mut ratios: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(master_seed, s as u64 + 1);
            let g = random_k_regular(n, k, &mut rng)?;
            let spectrum = adjacency_spectrum(&g, 1e-12)?;
            let mt = mu_tilde(&spectrum, k, 1e-9)?;
            let bpc = lambda_tilde_opt(mt, k)?;
            let metr = metropolis_rate_from_spectrum(&spectrum, k);
            Ok(bpc / metr)
        })
        .collect::<Result<Vec<_>>>()?;
    ratios.sort_unstable_by(f64::total_cmp);
    Ok(ratios)
}

/// One point of the rho sweep: the predicted slowest-mode magnitude from
/// mu_tilde and from the second-largest adjacency eigenvalue (they coincide
/// on non-bipartite graphs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub rho: f64,
    pub lambda_mu_tilde: f64,
    pub lambda_mu2: f64,
}

/// Predicted |lambda| across a rho grid inside (0, 2/k) for a regular graph.
pub fn rho_sweep(g: &Graph, grid: &[f64]) -> Result<Vec<SweepPoint>> {
    let k = g
        .regular_degree()
        .ok_or_else(|| Error::InvalidInput("rho sweep needs a regular graph".into()))?;
    if k < 2 {
        return Err(Error::InvalidInput("rho sweep needs degree k >= 2".into()));
    }
    let limit = 2.0 / k as f64;
    if let Some(bad) = grid.iter().find(|r| !(**r > 0.0 && **r < limit)) {
        return Err(Error::InvalidInput(format!(
            "rho = {bad} outside the convergent interval (0, {limit})"
        )));
    }
    let spectrum = adjacency_spectrum(g, 1e-12)?;
    let mt = mu_tilde(&spectrum, k, 1e-9)?;
    let mu2 = spectrum.get(1).copied().unwrap_or(mt);
    Ok(grid
        .iter()
        .map(|&rho| SweepPoint {
            rho,
            lambda_mu_tilde: lambda_magnitude(mt, k, rho),
            lambda_mu2: lambda_magnitude(mu2, k, rho),
        })
        .collect())
}

/// Evenly spaced grid of `points` values strictly inside (0, 2/k).
pub fn default_rho_grid(k: usize, points: usize) -> Vec<f64> {
    let limit = 2.0 / k as f64;
    (1..=points)
        .map(|i| limit * i as f64 / (points + 1) as f64)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub rate: f64,
    /// Set when the trace reached (effective) zero: finite-time convergence,
    /// no geometric rate to fit.
    pub finite_time: bool,
}

/// Fits the geometric decay rate of a squared-error trace: the least-squares
/// slope of log error versus iteration, halved in the exponent because the
/// trace stores squared norms. The first 10 entries are discarded as
/// transient and at least 30 fit points are required.
///
/// A trace that collapsed to (effective) zero has no geometric rate and is
/// reported as finite-time convergence instead: any exact zero, or a
/// trailing plateau stuck twenty decades below the trace maximum, the
/// signature of exact consensus plus floating-point noise.
pub fn empirical_rate(trace: &[f64]) -> Result<RateEstimate> {
    if trace.len() <= 10 {
        return Err(Error::InvalidInput(
            "rate fit needs more than 10 trace entries".into(),
        ));
    }
    let tail = &trace[10..];
    let max = tail.iter().copied().fold(0.0f64, f64::max);
    let finite = RateEstimate { rate: 0.0, finite_time: true };
    if max <= 0.0 || tail.iter().any(|&v| v == 0.0) {
        return Ok(finite);
    }
    let floor = 1e-20 * max;
    let plateau_start = (0..tail.len())
        .rev()
        .take_while(|&i| tail[i] <= floor)
        .last();
    if let Some(start) = plateau_start {
        let run = &tail[start..];
        let hi = run.iter().copied().fold(0.0f64, f64::max);
        let lo = run.iter().copied().fold(f64::INFINITY, f64::min);
        if run.len() >= 5 && hi <= 1e6 * lo {
            return Ok(finite);
        }
    }
    if tail.len() < 30 {
        return Err(Error::InvalidInput(format!(
            "rate fit needs at least 30 positive entries after the transient, found {}",
            tail.len()
        )));
    }
    let points: Vec<(f64, f64)> = tail
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64, v.ln()))
        .collect();
    let slope = lsq_slope(&points);
    Ok(RateEstimate {
        rate: (slope / 2.0).exp(),
        finite_time: false,
    })
}

fn lsq_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Relaxed-window geometric fit for short traces, used only for the
/// empirical report field where the spec'd 30-point minimum may not be
/// reachable before the error hits the numerical floor.
fn fit_rate_loose(trace: &[f64], discard: usize, min_points: usize) -> Option<f64> {
    let tail = trace.get(discard..)?;
    let max = tail.iter().copied().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return None;
    }
    let floor = 1e-20 * max;
    let points: Vec<(f64, f64)> = tail
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > floor)
        .map(|(i, &v)| (i as f64, v.ln()))
        .collect();
    (points.len() >= min_points).then(|| (lsq_slope(&points) / 2.0).exp())
}

/// Spectral summary for one graph. Regular graphs with k >= 2 carry the
/// closed-form mu_tilde / rho_opt / |lambda_tilde| fields; non-regular
/// graphs instead carry an empirical URW-BPC rate measured on the
/// self-loop-regularized version at its optimal rho, from a standard-normal
/// start derived from `seed`.
pub fn build_spectral_report(g: &Graph, seed: u64) -> Result<SpectralReport> {
    let mu = adjacency_spectrum(g, 1e-12)?;
    let skeleton = g.loop_free_skeleton();
    let lambda2_metropolis = competitor_rate(g, &WeightScheme::Metropolis)?;
    let xi = 1.0 / (skeleton.max_degree() as f64 + 1.0);
    let lambda2_uniform = if g.n() == 1 {
        0.0
    } else {
        competitor_rate(g, &WeightScheme::UniformWeight(xi))?
    };
    let mut report = SpectralReport {
        mu,
        mu_tilde: None,
        rho_opt: None,
        lambda_tilde_mag: None,
        lambda2_metropolis,
        lambda2_uniform,
        lambda_urwbpc_empirical: None,
        bipartite: g.is_bipartite(),
    };
    match g.regular_degree() {
        Some(k) if k >= 2 => {
            if let Ok(mt) = mu_tilde(&report.mu, k, 1e-9) {
                report.mu_tilde = Some(mt);
                if let Ok(r) = rho_opt(mt, k) {
                    report.rho_opt = Some(r);
                    report.lambda_tilde_mag = Some(lambda_tilde_opt(mt, k)?);
                }
            }
        }
        Some(_) => {}
        None => {
            let reg = add_self_loops_to_regularize(g)?;
            let k = reg.regular_degree().expect("loop regularization yields a regular graph");
            if k >= 2 {
                let spectrum = adjacency_spectrum(&reg, 1e-12)?;
                let mt = mu_tilde(&spectrum, k, 1e-9)?;
                let rho = rho_opt(mt, k)?;
                let x0 = standard_normal_vec(reg.n(), &mut stream_rng(seed, 0));
                let run = crate::consensus::run_to_convergence(
                    &reg,
                    &x0,
                    &Algorithm::UrwBpc(BpcConfig { rho, preserve_check: false }),
                    0.0,
                    80,
                )?;
                report.lambda_urwbpc_empirical = fit_rate_loose(&run.trace, 10, 5);
            }
        }
    }
    Ok(report)
}

/// CSV with one row per iteration and one column per algorithm.
pub fn write_mse_csv<W: std::io::Write>(exp: &MseExperiment, out: &mut W) -> std::io::Result<()> {
    write!(out, "iteration")?;
    for s in &exp.series {
        write!(out, ",{}", s.algorithm)?;
    }
    writeln!(out)?;
    for l in 0..=exp.iterations {
        write!(out, "{l}")?;
        for s in &exp.series {
            write!(out, ",{}", s.values[l])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Sidecar metadata: the seed and per-algorithm excluded-trial counts.
pub fn mse_metadata_json(exp: &MseExperiment) -> String {
    let algos: Vec<serde_json::Value> = exp
        .series
        .iter()
        .map(|s| {
            serde_json::json!({
                "name": s.algorithm,
                "trials_averaged": s.trials_averaged,
                "excluded_trials": s.excluded_trials,
            })
        })
        .collect();
    serde_json::json!({
        "seed": exp.master_seed,
        "trials": exp.trials,
        "iterations": exp.iterations,
        "algorithms": algos,
    })
    .to_string()
}

/// Whole experiment as one JSON object (seed, counts, per-algorithm series).
pub fn mse_to_json(exp: &MseExperiment) -> String {
    let series: Vec<serde_json::Value> = exp
        .series
        .iter()
        .map(|s| {
            serde_json::json!({
                "name": s.algorithm,
                "trials_averaged": s.trials_averaged,
                "excluded_trials": s.excluded_trials,
                "values": s.values,
            })
        })
        .collect();
    serde_json::json!({
        "seed": exp.master_seed,
        "trials": exp.trials,
        "iterations": exp.iterations,
        "series": series,
    })
    .to_string()
}

/// Empirical CDF rows `r,cdf`.
pub fn write_ratio_csv<W: std::io::Write>(ratios: &[f64], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "r,cdf")?;
    let n = ratios.len() as f64;
    for (i, r) in ratios.iter().enumerate() {
        writeln!(out, "{r},{}", (i + 1) as f64 / n)?;
    }
    Ok(())
}

/// Sweep rows `rho,lambda_pred_mu_tilde,lambda_pred_mu2`.
pub fn write_sweep_csv<W: std::io::Write>(points: &[SweepPoint], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "rho,lambda_pred_mu_tilde,lambda_pred_mu2")?;
    for p in points {
        writeln!(out, "{},{},{}", p.rho, p.lambda_mu_tilde, p.lambda_mu2)?;
    }
    Ok(())
}
