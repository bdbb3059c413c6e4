//! Spectral rate analysis.
//!
//! On a k-regular graph the nonzero eigenvalues of the 2N x 2N URW-BPC
//! update matrix come in pairs generated by each adjacency eigenvalue mu:
//! the roots of lambda^2 - mu rho lambda + rho k - 1 = 0. The convergence
//! rate is the largest root magnitude strictly inside the unit circle, which
//! is minimized in closed form by `rho_opt`. Belief-consensus competitors
//! are rated by the second-largest eigenvalue magnitude of their weight
//! matrix.

use num_complex::Complex64;

use crate::consensus::{build_weight_matrix, WeightScheme};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::symmetric_eigenvalues;

/// Relative window within which two magnitudes count as tied and are ordered
/// by descending signed value instead. Keeps golden orderings such as
/// {2, -2, 1, 1, -1, -1} stable under eigensolver roundoff.
const MAGNITUDE_TIE_EPS: f64 = 1e-7;

/// All adjacency eigenvalues, sorted by descending magnitude with near-ties
/// broken by descending signed value. `tol` scales the Jacobi off-diagonal
/// threshold; 1e-12 is the default accuracy contract.
pub fn adjacency_spectrum(g: &Graph, tol: f64) -> Result<Vec<f64>> {
    let mut eig = symmetric_eigenvalues(&g.adjacency(), tol)?;
    sort_by_magnitude(&mut eig);
    Ok(eig)
}

fn sort_by_magnitude(vals: &mut [f64]) {
    vals.sort_unstable_by(|a, b| b.abs().partial_cmp(&a.abs()).expect("finite eigenvalues"));
    if vals.is_empty() {
        return;
    }
    let tie = MAGNITUDE_TIE_EPS * vals[0].abs().max(1.0);
    let mut start = 0;
    for i in 1..=vals.len() {
        let chained = i < vals.len() && (vals[i - 1].abs() - vals[i].abs()).abs() <= tie;
        if !chained {
            vals[start..i].sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite"));
            start = i;
        }
    }
}

/// The largest eigenvalue magnitude strictly inside (-k, k), the quantity
/// that generates the slowest surviving URW-BPC mode. Eigenvalues within
/// relative `tol` of k are treated as on the boundary, which automatically
/// skips both k and -k for bipartite graphs.
pub fn mu_tilde(spectrum: &[f64], k: usize, tol: f64) -> Result<f64> {
    let cutoff = k as f64 * (1.0 - tol);
    spectrum
        .iter()
        .map(|m| m.abs())
        .filter(|m| *m < cutoff)
        .fold(None, |best: Option<f64>, m| Some(best.map_or(m, |b| b.max(m))))
        .ok_or_else(|| {
            Error::DegenerateSpectrum(format!(
                "no eigenvalue strictly inside (-{k}, {k}); rho_opt is undefined"
            ))
        })
}

/// Both roots of lambda^2 - mu rho lambda + (rho k - 1) = 0, returned as
/// (plus branch, minus branch). For a negative discriminant the pair is a
/// complex conjugate pair with common magnitude sqrt(|rho k - 1|).
pub fn lambda_pair(mu: f64, k: usize, rho: f64) -> (Complex64, Complex64) {
    let disc = mu * mu * rho * rho - 4.0 * k as f64 * rho + 4.0;
    let half = 0.5 * mu * rho;
    if disc >= 0.0 {
        let root = 0.5 * disc.sqrt();
        (
            Complex64::new(half + root, 0.0),
            Complex64::new(half - root, 0.0),
        )
    } else {
        let root = 0.5 * (-disc).sqrt();
        (Complex64::new(half, root), Complex64::new(half, -root))
    }
}

/// Magnitude of the larger-magnitude root of the pair generated by `mu`.
/// Equals |mu| rho / 2 + sqrt(disc) / 2 in the real case (the same value for
/// mu and -mu) and sqrt(|rho k - 1|) in the complex case.
pub fn lambda_magnitude(mu: f64, k: usize, rho: f64) -> f64 {
    let (a, b) = lambda_pair(mu, k, rho);
    a.norm().max(b.norm())
}

/// The reweighting parameter that minimizes the convergence rate:
/// rho_opt = (2 / mu_tilde^2) (k - sqrt(k^2 - mu_tilde^2)).
/// At this rho the discriminant of the mu_tilde pair vanishes.
pub fn rho_opt(mu_tilde: f64, k: usize) -> Result<f64> {
    check_mu_k(mu_tilde, k)?;
    let kf = k as f64;
    Ok(2.0 / (mu_tilde * mu_tilde) * (kf - (kf * kf - mu_tilde * mu_tilde).sqrt()))
}

/// The optimized rate |lambda_tilde| = |(1/mu_tilde)(k - sqrt(k^2 - mu_tilde^2))|,
/// i.e. `lambda_magnitude(mu_tilde, k, rho_opt(mu_tilde, k))`.
pub fn lambda_tilde_opt(mu_tilde: f64, k: usize) -> Result<f64> {
    check_mu_k(mu_tilde, k)?;
    let kf = k as f64;
    Ok(((kf - (kf * kf - mu_tilde * mu_tilde).sqrt()) / mu_tilde).abs())
}

fn check_mu_k(mu_tilde: f64, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidInput(format!(
            "optimal reweighting needs degree k >= 2, got {k}"
        )));
    }
    if !(mu_tilde > 0.0 && mu_tilde < k as f64) {
        return Err(Error::DegenerateSpectrum(format!(
            "mu_tilde = {mu_tilde} is outside (0, {k})"
        )));
    }
    Ok(())
}

/// Large-graph limits for random k-regular graphs, where |mu_2| tends to
/// 2 sqrt(k - 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRates {
    pub rho_opt: f64,
    pub lambda_bpc: f64,
    pub lambda_metropolis: f64,
}

/// Evaluates the three limit expressions at degree `k >= 3`. The BPC limit is
/// strictly below the Metropolis limit for every such k.
pub fn limit_rates(k: usize) -> Result<LimitRates> {
    if k < 3 {
        return Err(Error::InvalidInput(format!(
            "limit rates need k >= 3, got {k}"
        )));
    }
    let kf = k as f64;
    let gap = (kf * kf - 4.0 * (kf - 1.0)).sqrt(); // = k - 2
    let rates = LimitRates {
        rho_opt: (kf - gap) / (2.0 * (kf - 1.0)),
        lambda_bpc: (kf - gap) / (2.0 * (kf - 1.0).sqrt()),
        lambda_metropolis: (1.0 + 2.0 * (kf - 1.0).sqrt()) / (kf + 1.0),
    };
    assert!(
        rates.lambda_bpc < rates.lambda_metropolis,
        "BPC limit must beat the Metropolis limit"
    );
    Ok(rates)
}

/// Second-largest eigenvalue magnitude of the scheme's weight matrix: the
/// largest |lambda| over the eigenspace orthogonal to the all-ones vector.
/// Self-loops are ignored (consensus weights live on the edge set).
///
/// For Metropolis weights on a loop-free k-regular graph, W = (A + I)/(k+1)
/// exactly, so the rate is read off the adjacency spectrum without a second
/// decomposition.
pub fn competitor_rate(g: &Graph, scheme: &WeightScheme) -> Result<f64> {
    let skeleton;
    let g = if g.has_self_loops() {
        skeleton = g.loop_free_skeleton();
        &skeleton
    } else {
        g
    };
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.n() == 1 {
        return Ok(0.0);
    }
    if let (WeightScheme::Metropolis, Some(k)) = (scheme, g.regular_degree()) {
        let spectrum = adjacency_spectrum(g, 1e-12)?;
        return Ok(metropolis_rate_from_spectrum(&spectrum, k));
    }
    let w = build_weight_matrix(g, scheme)?;
    let eig = symmetric_eigenvalues(&w, 1e-12)?;
    Ok(drop_closest(&eig, 1.0).map(f64::abs).fold(0.0, f64::max))
}

/// Metropolis rate of a loop-free k-regular graph read off its adjacency
/// spectrum: W = (A + I)/(k + 1), so the rate is max |1 + mu_i| / (k + 1)
/// over everything but the Perron eigenvalue mu_1 = k.
pub fn metropolis_rate_from_spectrum(spectrum: &[f64], k: usize) -> f64 {
    drop_closest(spectrum, k as f64)
        .map(|mu| (1.0 + mu).abs() / (k as f64 + 1.0))
        .fold(0.0, f64::max)
}

/// Iterator over `vals` with the single entry closest to `target` removed;
/// used to strip the Perron eigenvalue before taking the runner-up.
fn drop_closest(vals: &[f64], target: f64) -> impl Iterator<Item = f64> + '_ {
    let skip = vals
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (*a - target)
                .abs()
                .partial_cmp(&(*b - target).abs())
                .expect("finite")
        })
        .map(|(i, _)| i)
        .unwrap_or(usize::MAX);
    vals.iter()
        .enumerate()
        .filter(move |(i, _)| *i != skip)
        .map(|(_, &v)| v)
}

const POWER_MAX_ITERS: usize = 50_000;

/// mu_tilde for a large connected non-bipartite regular graph, estimated by
/// power iteration on A^2 restricted to the complement of the all-ones
/// vector. Costs O(iters * edges) instead of a dense decomposition.
pub fn mu_tilde_power(g: &Graph) -> Result<f64> {
    let Some(_) = g.regular_degree() else {
        return Err(Error::InvalidInput(
            "power-method mu_tilde needs a regular graph".into(),
        ));
    };
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.is_bipartite() {
        return Err(Error::DegenerateSpectrum(
            "bipartite graph: -k sits in the deflated spectrum, use the dense route".into(),
        ));
    }
    let sq = power_squared_rate(g.n(), |x, y| adj_apply(g, x, y));
    Ok(sq)
}

/// Metropolis rate for a large connected loop-free regular graph by power
/// iteration on W^2 = ((A + I)/(k + 1))^2 in the complement of ones.
pub fn metropolis_rate_power(g: &Graph) -> Result<f64> {
    let Some(k) = g.regular_degree() else {
        return Err(Error::InvalidInput(
            "power-method Metropolis rate needs a regular graph".into(),
        ));
    };
    if g.has_self_loops() {
        return Err(Error::InvalidInput(
            "consensus weights are defined on loop-free graphs".into(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let scale = 1.0 / (k as f64 + 1.0);
    let sq = power_squared_rate(g.n(), |x, y| {
        adj_apply(g, x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = (*yi + xi) * scale;
        }
    });
    Ok(sq)
}

fn adj_apply(g: &Graph, x: &[f64], y: &mut Vec<f64>) {
    y.clear();
    y.extend((0..g.n()).map(|i| {
        let mut acc: f64 = g.neighbors(i).iter().map(|&j| x[j]).sum();
        acc += g.self_loops(i) as f64 * x[i];
        acc
    }));
}

/// Power iteration on M^2 restricted to the mean-zero subspace; returns the
/// dominant |eigenvalue| of M there. `apply` must be symmetric and preserve
/// the subspace up to roundoff.
fn power_squared_rate<F: FnMut(&[f64], &mut Vec<f64>)>(n: usize, mut apply: F) -> f64 {
    let mut y: Vec<f64> = (0..n)
        .map(|i| {
            let mut s = i as u64 ^ 0x9e3779b97f4a7c15;
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    project_mean(&mut y);
    normalize(&mut y);
    let mut z = Vec::with_capacity(n);
    let mut zz = Vec::with_capacity(n);
    let mut prev = f64::INFINITY;
    let mut stable = 0;
    for _ in 0..POWER_MAX_ITERS {
        apply(&y, &mut z);
        apply(&z, &mut zz);
        project_mean(&mut zz);
        let rq: f64 = y.iter().zip(&zz).map(|(a, b)| a * b).sum();
        std::mem::swap(&mut y, &mut zz);
        if !normalize(&mut y) {
            return 0.0;
        }
        if (rq - prev).abs() <= 1e-11 * rq.abs().max(1.0) {
            stable += 1;
            if stable >= 5 {
                return rq.max(0.0).sqrt();
            }
        } else {
            stable = 0;
        }
        prev = rq;
    }
    prev.max(0.0).sqrt()
}

fn project_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

fn normalize(x: &mut [f64]) -> bool {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return false;
    }
    for v in x.iter_mut() {
        *v /= norm;
    }
    true
}

/// Spectral summary of one graph. Closed-form fields are present only when
/// the graph is regular with degree >= 2 and the spectrum is not degenerate;
/// the empirical URW-BPC field is filled by the harness for non-regular
/// inputs (after self-loop regularization) where no closed form exists.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    /// Adjacency eigenvalues sorted by descending magnitude.
    pub mu: Vec<f64>,
    pub mu_tilde: Option<f64>,
    pub rho_opt: Option<f64>,
    pub lambda_tilde_mag: Option<f64>,
    pub lambda2_metropolis: f64,
    /// Uniform-weight rate at xi = 1/(d_max + 1).
    pub lambda2_uniform: f64,
    pub lambda_urwbpc_empirical: Option<f64>,
    pub bipartite: bool,
}

impl SpectralReport {
    /// Flat JSON object with every number printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        out.push_str("\"mu\":[");
        for (i, m) in self.mu.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&fmt17(*m));
        }
        out.push_str("],");
        let opt = |v: &Option<f64>| v.map_or("null".to_string(), fmt17);
        out.push_str(&format!("\"mu_tilde\":{},", opt(&self.mu_tilde)));
        out.push_str(&format!("\"rho_opt\":{},", opt(&self.rho_opt)));
        out.push_str(&format!(
            "\"lambda_tilde_mag\":{},",
            opt(&self.lambda_tilde_mag)
        ));
        out.push_str(&format!(
            "\"lambda2_metropolis\":{},",
            fmt17(self.lambda2_metropolis)
        ));
        out.push_str(&format!("\"lambda2_uniform\":{},", fmt17(self.lambda2_uniform)));
        out.push_str(&format!(
            "\"lambda_urwbpc_empirical\":{},",
            opt(&self.lambda_urwbpc_empirical)
        ));
        out.push_str(&format!("\"bipartite\":{}}}", self.bipartite));
        out
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests;
