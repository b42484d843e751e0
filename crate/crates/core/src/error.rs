use alloc::boxed::Box;
use core::fmt;

use crate::engine::EngineKind;

/// Errors reported by strings, engines and scanners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A deletion was requested on an empty string.
    EmptyString,
    /// The engine cannot perform this border modification.
    Unsupported {
        engine: EngineKind,
        op: &'static str,
    },
    /// A fingerprint was requested for a slice whose length is not `k`.
    FragmentLength { expected: usize, got: usize },
    /// An absolute position outside the current string.
    OutOfRange { pos: i64 },
    /// The input is shorter than a single window.
    TooShort { needed: usize, got: usize },
    /// A parameter violates its documented range.
    InvalidParameter(&'static str),
    /// An operation inside a replayed sequence failed.
    AtOp { index: usize, source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyString => f.write_str("deletion from an empty string"),
            Error::Unsupported { engine, op } => {
                write!(f, "engine `{engine}` does not support {op}")
            }
            Error::FragmentLength { expected, got } => {
                write!(f, "fragment has length {got}, expected {expected}")
            }
            Error::OutOfRange { pos } => write!(f, "position {pos} is outside the string"),
            Error::TooShort { needed, got } => write!(
                f,
                "input of length {got} is shorter than one window ({needed} letters needed)"
            ),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::AtOp { index, source } => write!(f, "operation #{index} failed: {source}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::AtOp { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
