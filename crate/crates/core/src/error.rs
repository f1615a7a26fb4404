use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("chart domain: {0}")]
    ChartDomain(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("parameter: {0}")]
    Parameter(String),
    #[error("ill-conditioned eigenvalue cluster (gap {gap:.3e})")]
    IllConditioned { gap: f64 },
    #[error("no zero-set point found after {starts} starts")]
    SearchFailure { starts: usize },
    #[error("null orbit: |g(V,V)| = {0:.3e}")]
    NullOrbit(f64),
    #[error("metric ill-conditioned: cond = {0:.3e}")]
    MetricConditioning(f64),
    #[error("sample inconsistent with zero set: residual {0:.3e}")]
    SampleInconsistent(f64),
    #[error("internal contradiction: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
