use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("{what} cap exceeded: {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operands live in different fields")]
    FieldMismatch,

    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,

    #[error("linear map is not invertible")]
    NotInvertible,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bound insufficient: no univariate eliminant in x{var} at degree {degree}")]
    BoundInsufficient { var: usize, degree: u32 },

    #[error("no membership witness at degree {degree}")]
    WitnessNotFound { degree: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::CapExceeded {
            what,
            value: value.into(),
            cap: cap.into(),
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
