use thiserror::Error;

/// Errors produced by the enumeration toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "{what} refuses n = {n} (limit {limit}); pass the unsafe-n acknowledgment to override"
    )]
    GuardExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("inverse collision in big-cycle enumeration at n = {n}: {perm}")]
    InverseCollision { n: usize, perm: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
