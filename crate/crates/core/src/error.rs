use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or unsupported user input.
    #[error("input error: {0}")]
    Input(String),

    /// The rational prime divides disc(T), so Kummer splitting may not
    /// describe the ideal factorization.
    #[error("prime {p} divides the discriminant of the defining polynomial")]
    IndexRisk { p: u64 },

    /// The curve (or an element) cannot be reduced modulo a prime above `p`.
    #[error("bad reduction at a prime above {p}")]
    BadReduction { p: u64 },

    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    SingularCurve,

    /// A high-precision evaluation could not certify its result.
    #[error("precision {bits} bits insufficient: {reason}")]
    Precision { bits: u32, reason: String },

    /// The requested size is beyond what the exhaustive routines handle.
    #[error("capability error: {0}")]
    Capability(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("need more data: {0}")]
    NeedMoreData(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
