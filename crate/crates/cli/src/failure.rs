use std::fmt;
use std::path::Path;

use netconv::{Error, TouchstoneError};

/// A terminal error: exit status, a greppable class and a one-line message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub class: &'static str,
    pub message: String,
}

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

impl Failure {
    pub fn new(code: i32, class: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            class,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, "usage", message)
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new(EXIT_INPUT, "io", format!("{}: {err}", path.display()))
    }

    pub fn parse(path: &Path, message: impl fmt::Display) -> Self {
        Self::new(EXIT_INPUT, "parse", format!("{}: {message}", path.display()))
    }

    pub fn touchstone(path: &Path, err: TouchstoneError) -> Self {
        match err {
            TouchstoneError::Network(inner) => Self::parse(path, inner),
            other => Self::parse(path, other),
        }
    }

    pub fn network(err: Error) -> Self {
        let (frequency, inner) = match err {
            Error::AtFrequency { frequency, source } => (Some(frequency), *source),
            other => (None, other),
        };
        let (code, class) = match inner {
            Error::SingularConversion { .. } | Error::SingularMatrix(_) => (EXIT_SINGULAR, "singular-conversion"),
            Error::IncompatibleOperands(_) => (EXIT_SINGULAR, "incompatible"),
            Error::PortCountMismatch { .. } => (EXIT_INPUT, "invalid-target"),
            _ => (EXIT_INPUT, "invalid-input"),
        };
        let message = match frequency {
            Some(f) => format!("at {f} Hz: {inner}"),
            None => inner.to_string(),
        };
        Self::new(code, class, message)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // keep it on one line whatever the source message contains
        let flat = self.message.replace('\n', " ");
        write!(f, "netconv: {}: {}", self.class, flat)
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Self::network(err)
    }
}
