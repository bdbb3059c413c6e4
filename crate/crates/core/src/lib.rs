//! Distributed likelihood fusion on graphs: belief consensus versus
//! reweighted belief-propagation consensus (URW-BPC).
//!
//! A network of N nodes holds conditionally independent log-likelihoods and
//! must agree on their sum. Belief consensus averages with a doubly
//! stochastic weight matrix; URW-BPC runs the two-step linear recursion that
//! uniformly reweighted BP induces on the equality-constrained fusion factor
//! graph. On trees (rho = 1) URW-BPC converges exactly in at most 2N - 3
//! steps; on k-regular graphs it converges for rho in (0, 2/k) and the rate
//! is minimized in closed form from the second-largest adjacency eigenvalue
//! magnitude, beating Metropolis-weighted consensus.
//!
//! The crate is organized around four layers:
//!
//! - [`graph`]: the graph type, random generators (Prufer trees,
//!   configuration-model k-regular graphs, circulant small worlds), and the
//!   self-loop / edge-deletion regularization transforms.
//! - [`spectral`]: adjacency spectra (cyclic Jacobi), the eigenvalue map of
//!   the URW-BPC update matrix, the optimal reweighting parameter, limit
//!   rates, and competitor rates.
//! - [`consensus`]: the iterations themselves, the preserved quantity, the
//!   message-passing oracle, and posterior fusion.
//! - [`harness`]: seeded Monte Carlo experiments and their CSV/JSON output.

pub mod consensus;
pub mod error;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod spectral;

pub use consensus::{
    Algorithm, BpcConfig, ConsensusState, LikelihoodTable, RunResult, StopReason, WeightScheme,
};
pub use error::{Error, Result};
pub use graph::{Graph, GraphClass};
pub use harness::{AlgoSpec, ExperimentConfig, GraphSource, InitSpec, MseSeries, RhoChoice};
pub use spectral::{LimitRates, SpectralReport};
