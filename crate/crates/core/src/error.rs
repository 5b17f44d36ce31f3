// SPDX-License-Identifier: Apache-2.0

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degenerate vertex set: {0}")]
    DegenerateSet(String),
    #[error("invalid vertex pair: {0}")]
    InvalidPair(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("scale error: {0}")]
    Scale(String),
    #[error("insufficient vertices: need {needed}, graph has {actual}")]
    InsufficientVertices { needed: u128, actual: usize },
    #[error("condition error: {0}")]
    Condition(String),
    #[error("infeasible delta: {0}")]
    InfeasibleDelta(String),
    #[error("consistency error: {0}")]
    Consistency(String),
}

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
