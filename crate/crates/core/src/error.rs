use alloc::string::String;
use core::fmt;

/// Errors raised by the numerical modules. Each variant names the module
/// that produced it so that front-ends can report module-qualified messages.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch {
        module: &'static str,
        detail: String,
    },
    InvalidInput {
        module: &'static str,
        detail: String,
    },
    Singular {
        module: &'static str,
        detail: String,
    },
    Precondition {
        module: &'static str,
        detail: String,
    },
    Numerical {
        module: &'static str,
        detail: String,
    },
}

impl Error {
    pub fn module(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { module, .. }
            | Error::InvalidInput { module, .. }
            | Error::Singular { module, .. }
            | Error::Precondition { module, .. }
            | Error::Numerical { module, .. } => module,
        }
    }

    pub(crate) fn dim(module: &'static str, detail: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            module,
            detail: detail.into(),
        }
    }
    pub(crate) fn input(module: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidInput {
            module,
            detail: detail.into(),
        }
    }
    pub(crate) fn singular(module: &'static str, detail: impl Into<String>) -> Self {
        Error::Singular {
            module,
            detail: detail.into(),
        }
    }
    pub(crate) fn pre(module: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            module,
            detail: detail.into(),
        }
    }
    pub(crate) fn numerical(module: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            module,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, module, detail) = match self {
            Error::DimensionMismatch { module, detail } => ("dimension mismatch", module, detail),
            Error::InvalidInput { module, detail } => ("invalid input", module, detail),
            Error::Singular { module, detail } => ("singular matrix", module, detail),
            Error::Precondition { module, detail } => ("precondition failed", module, detail),
            Error::Numerical { module, detail } => ("numerical failure", module, detail),
        };
        write!(f, "{module}: {kind}: {detail}")
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
