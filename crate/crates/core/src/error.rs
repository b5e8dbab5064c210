use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall in two families: hypothesis violations (the caller asked for
/// something the mathematics does not allow, such as a ping-pong certificate
/// for commuting twists) and malformed input. [`McgError::is_hypothesis_violation`]
/// separates them for the command line front end.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McgError {
    #[error("not a curve: ({p}, {q}) is not a coprime pair")]
    NotACurve { p: String, q: String },

    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("matrix has determinant {det}, expected 1")]
    NotUnimodular { det: String },

    #[error("twist power must be nonzero")]
    ZeroTwistPower,

    #[error("twist factors do not form a multicurve: {0}")]
    NotMulticurve(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("not independent: {0}")]
    NotIndependent(String),

    #[error("not pseudo-Anosov: {0}")]
    NotPseudoAnosov(String),

    #[error("virtually abelian, no free subgroup: {0}")]
    VirtuallyAbelian(String),

    #[error("certification failed: {0}")]
    CertificationFailed(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadratic irrationals over different radicands: {0} and {1}")]
    RadicandMismatch(String, String),

    #[error("io error: {0}")]
    Io(String),
}

impl McgError {
    pub fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        McgError::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }

    /// True for errors that report a violated mathematical precondition.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            McgError::HypothesisViolated(_)
                | McgError::NotIndependent(_)
                | McgError::NotPseudoAnosov(_)
                | McgError::VirtuallyAbelian(_)
                | McgError::CertificationFailed(_)
                | McgError::ZeroTwistPower
                | McgError::NotMulticurve(_)
                | McgError::NotACurve { .. }
                | McgError::NotUnimodular { .. }
                | McgError::InvalidParameter(_)
        )
    }
}

impl From<std::io::Error> for McgError {
    fn from(e: std::io::Error) -> Self {
        McgError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, McgError>;
