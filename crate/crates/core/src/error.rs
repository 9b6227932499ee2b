use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants are grouped by how a caller should react: [`Error::Validation`]
/// and [`Error::Parse`] mean the input was wrong, [`Error::Numeric`] and
/// friends mean sampling broke down on otherwise valid input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("matrix is not positive definite ({context})")]
    NotPositiveDefinite { context: String },

    #[error("ill-conditioned system in {context}: condition estimate {condition:.3e}")]
    IllConditioned { context: String, condition: f64 },

    #[error("numeric failure at iteration {iteration}: {source}")]
    Iteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// True for failures that come from the numerics rather than the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::IllConditioned { .. }
                | Error::Iteration { .. }
                | Error::Numeric(_)
        )
    }

    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        if self.is_numeric() {
            3
        } else {
            2
        }
    }
}
