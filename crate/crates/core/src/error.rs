use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid rational: {0}")]
    InvalidRational(String),

    #[error("invalid singularity label: {0}")]
    InvalidLabel(String),

    #[error("not a zero chain: {0}")]
    NotAZeroChain(String),

    #[error("ear cutting got stuck: {0}")]
    Inconsistent(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("triangulation is not an accordion")]
    NotAccordion,

    #[error("framed triangulation has no weights")]
    NoWeights,

    #[error("system S_0 + S_{m} is inconsistent for n = {n}")]
    InconsistentSystem { n: usize, m: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("chains are not companions: {0}")]
    NotCompanions(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    /// An internal invariant failed. Seeing this means a bug or a
    /// counterexample, never bad user input.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Short machine-readable tag used by the CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::InvalidChain(_) => "invalid_chain",
            Error::InvalidRational(_) => "invalid_rational",
            Error::InvalidLabel(_) => "invalid_label",
            Error::NotAZeroChain(_) => "not_a_zero_chain",
            Error::Inconsistent(_) => "inconsistent",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::NotAccordion => "not_accordion",
            Error::NoWeights => "no_weights",
            Error::InconsistentSystem { .. } => "inconsistent_system",
            Error::Precondition(_) => "precondition",
            Error::NotCompanions(_) => "not_companions",
            Error::OutOfRange(_) => "out_of_range",
            Error::Invariant(_) => "invariant",
        }
    }

    /// True for failures that indicate a broken invariant rather than bad input.
    pub fn is_finding(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
