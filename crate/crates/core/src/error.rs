use thiserror::Error;

/// Errors for graph construction, spectral analysis, consensus runs, and the
/// experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input failed validation before any computation ran.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A graph file, config file, or likelihood table failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A rejection-sampling generator exhausted its attempt budget, which
    /// signals an infeasible or very improbable target for these parameters.
    #[error("{what}: attempt budget of {budget} exhausted")]
    BudgetExhausted { what: &'static str, budget: usize },

    /// The operation requires a connected graph.
    #[error("graph is not connected")]
    Disconnected,

    /// Edge deletion cannot reach the requested maximum degree without
    /// breaking connectivity.
    #[error("regularization infeasible: {0}")]
    Infeasible(String),

    /// The Jacobi sweep cap was reached before the off-diagonal norm fell
    /// below the threshold.
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    EigenNonConvergence { sweeps: usize },

    /// A closed form is undefined for this spectrum, e.g. there is no
    /// eigenvalue strictly inside (-k, k) so rho_opt does not exist.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// An iterative run hit its iteration cap without meeting the tolerance.
    #[error("no convergence within {max_iters} iterations")]
    NonConvergence { max_iters: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed inputs rather than by numerical
    /// failure. CLI callers map validation errors to exit code 1 and
    /// everything else to exit code 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Parse(_) | Error::Io(_)
        )
    }
}
