//! Exact and floating-point computations on metric Lie algebras.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod curvature;
pub mod derivations;
pub mod error;
pub mod linalg;
pub mod metric;
pub mod moment;
pub mod nice;
pub mod scalar;

pub use algebra::{classify, parse_structure, Classification, StructureTensor};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use metric::{parse_metric, signature, Metric, Signature, TensorShape};
pub use scalar::{Float, Rational, Scalar};
