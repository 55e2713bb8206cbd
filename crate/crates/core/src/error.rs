use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter fell outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The observation has zero probability under every atom of the prior.
    #[error("impossible observation under prior support")]
    ImpossibleObservation,

    /// The (family, prior) pairing has no closed-form marginal.
    #[error("unsupported conjugacy: {family} with {prior} prior")]
    UnsupportedConjugacy { family: String, prior: String },

    /// The operation is not defined for the given family or prior.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Continuous-prior asymptotics requested for a discrete prior.
    #[error("asymptotics require continuous prior")]
    DiscretePrior,

    /// theta0 is not one of the prior atoms.
    #[error("theta0 = {0} is not an atom of the prior")]
    NotAnAtom(String),

    /// Brute-force enumeration was asked for more than its cap.
    #[error("brute-force enumeration limited to n <= {cap}, got n = {n}")]
    EnumerationCap { n: u32, cap: u32 },

    /// Adaptive quadrature ran out of budget before reaching tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {evaluations} evaluations")]
    Quadrature {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    /// A certified polynomial coefficient disagreed with its reference.
    #[error("coefficient mismatch: {0}")]
    CoefficientMismatch(String),

    /// Malformed input (scenario files, rational literals).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
