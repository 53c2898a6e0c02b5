//! Error types shared across the crate.

use std::fmt;

/// A malformed literal, interval, model, or data file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// Where the problem was found (file, field, or line), when known.
    pub location: Option<String>,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError { message: message.into(), location: None }
    }

    pub fn at(mut self, location: impl Into<String>) -> Self {
        if self.location.is_none() {
            self.location = Some(location.into());
        }
        self
    }

    /// Prefixes the location with an enclosing one, e.g. a file name before a field.
    pub fn within(mut self, outer: impl Into<String>) -> Self {
        let outer = outer.into();
        self.location = Some(match self.location.take() {
            Some(inner) => format!("{outer}: {inner}"),
            None => outer,
        });
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "{loc}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

/// Failures of the condition checkers.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point {0} lies outside the domain")]
    OutsideDomain(String),
    #[error("{0} is a global condition and has no pointwise verdict")]
    GlobalOnly(String),
    #[error("{0} is only available on the {1} backend")]
    WrongBackend(String, &'static str),
}

/// Unknown condition or hypothesis names.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NameError {
    #[error("unknown condition `{0}`")]
    Condition(String),
    #[error("unknown hypothesis atom `{0}`")]
    Atom(String),
    #[error("unknown scope `{0}` (expected pointwise or global)")]
    Scope(String),
    #[error("{0} is a global condition; use the global scope")]
    NotPointwise(String),
}
