use thiserror::Error;

/// Errors raised by the distribution, fitting and quadrature routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or parameter lies outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series hit its term budget before the remainder bound was met.
    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    /// The requested moment does not exist for these parameters.
    #[error("divergent moment: {0}")]
    Divergent(String),

    /// The survival probability underflowed, so the hazard is not representable.
    #[error("survival probability underflows to zero at x = {0}")]
    SurvivalUnderflow(i64),

    /// The histogram places the maximum likelihood estimate on a degenerate boundary.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// No observation exceeds the requested count, so the empirical hazard is undefined.
    #[error("empirical hazard undefined at x = {0}: no observation exceeds it")]
    UndefinedHazard(u64),

    #[error("invalid histogram: {0}")]
    InvalidHistogram(String),

    /// The quadrature refinement guard rejected the result.
    #[error("quadrature unstable: {coarse} ({coarse_nodes} nodes) vs {fine} ({fine_nodes} nodes)")]
    QuadratureUnstable {
        coarse: f64,
        fine: f64,
        coarse_nodes: usize,
        fine_nodes: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
