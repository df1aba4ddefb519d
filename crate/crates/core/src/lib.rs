//! Truncated q-series engine for congruences of colored partition functions.

pub mod congruence;
pub mod dissection;
pub mod error;
pub mod eta;
pub mod grammar;
pub mod partitions;
pub mod scan;
pub mod series;

pub use error::{Error, Result};
pub use series::{CoefficientRing, Series};
