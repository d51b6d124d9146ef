use thiserror::Error;

use crate::series::SumResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A Fibonacci/Lucas index (or a sequence term used as one) is beyond the cap.
    #[error("index {index} exceeds the configured index cap {cap}")]
    IndexCap { index: i128, cap: u64 },

    #[error("division by zero in Q(sqrt 5)")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    /// The term cap was hit before the tail bound cleared the requested precision.
    #[error("term cap {cap} reached before reaching {digits} certified digits")]
    TermCap {
        cap: u64,
        digits: u32,
        best: Box<SumResult>,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
