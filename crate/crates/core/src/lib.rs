pub mod catalog;
pub mod error;
pub mod expr;
pub mod numerics;
pub mod operator;
pub mod quadrature;
pub mod series;

pub use error::{Error, Result};
pub use numerics::{ExactScalar, Field, Scalar};
