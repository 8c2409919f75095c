use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical quantity is outside its valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation was called with inconsistent or unsupported parameters.
    #[error("usage error: {0}")]
    Usage(String),

    /// A brute-force or bit-exact verification found a mismatch.
    #[error("verification failure: {0}")]
    Verification(String),

    /// An internal consistency assertion failed. Indicates a bug, not bad input.
    #[error("internal assertion: {0}")]
    Internal(String),

    /// Input document could not be parsed or violates the schema.
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
    pub fn schema(msg: impl Into<String>) -> Self {
        Error::Schema(msg.into())
    }

    /// Process exit code convention: 1 validation, 2 verification, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Usage(_) | Error::Schema(_) => 1,
            Error::Verification(_) => 2,
            Error::Internal(_) => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_convention() {
        assert_eq!(Error::domain("x").exit_code(), 1);
        assert_eq!(Error::usage("x").exit_code(), 1);
        assert_eq!(Error::schema("x").exit_code(), 1);
        assert_eq!(Error::verification("x").exit_code(), 2);
        assert_eq!(Error::internal("x").exit_code(), 3);
    }
}
