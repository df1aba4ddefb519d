use thiserror::Error;

use crate::series::CoefficientRing;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero precision: a series needs at least one coefficient")]
    ZeroPrecision,

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(CoefficientRing, CoefficientRing),

    #[error("not invertible: constant term {constant} is not a unit in {ring}")]
    NotInvertible {
        constant: String,
        ring: CoefficientRing,
    },

    #[error("empty extraction: offset {offset} is not below precision {precision}")]
    EmptyExtraction { offset: u64, precision: usize },

    #[error("invalid modulus {0}: must satisfy 2 <= m <= {max}", max = crate::series::MAX_MODULUS)]
    InvalidModulus(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("oracle bound exceeded: n = {n} > {max}")]
    OracleBound { n: u64, max: u64 },

    #[error("parse error at column {column}: {message}")]
    Parse {
        input: String,
        column: usize,
        message: String,
    },

    #[error("resource ceiling: estimated cost {estimate} exceeds ceiling {ceiling}")]
    ResourceCeiling { estimate: u128, ceiling: u128 },

    #[error("unknown name {0:?}")]
    UnknownName(String),
}

impl Error {
    /// Render a parse error as the offending input with a caret under the column.
    pub fn pointer(&self) -> Option<String> {
        match self {
            Error::Parse { input, column, .. } => Some(format!(
                "{input}\n{}^",
                " ".repeat(column.saturating_sub(1))
            )),
            _ => None,
        }
    }
}
