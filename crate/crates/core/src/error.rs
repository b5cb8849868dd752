use thiserror::Error;

/// Errors surfaced by geometry, quadrature, and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty boundary set")]
    EmptyBoundarySet,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature budget exhausted: {0}")]
    QuadratureBudget(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("stencil exceeds domain")]
    StencilExceedsDomain,

    #[error("recovery did not stabilize")]
    RecoveryDidNotStabilize,

    #[error("layer-cake requires bounded integrand")]
    UnboundedIntegrand,

    #[error("profile outside supported majorant cases")]
    ProfileOutsideCases,

    #[error("measure support escapes E")]
    SupportEscapesBoundary,

    #[error("too many skipped grid points: {skipped} of {total}")]
    TooManySkips { skipped: usize, total: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
