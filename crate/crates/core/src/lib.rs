//! Exact Čech–Deligne cocycle calculus for bundle gerbes with connection on
//! supermanifolds presented by combinatorial good covers.

pub mod body_soul;
pub mod cech_solve;
pub mod cover;
pub mod deligne;
pub mod error;
pub mod examples;
pub mod expr;
pub mod intlin;
pub mod keytree;
pub mod manifest;
pub mod number;
pub mod poincare;
pub mod ratlin;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod superalg;
pub mod testing;

pub use error::{Error, Result};
pub use number::{GaussRat, Rational};
pub use scalar::{GenId, Mono, Ring, Scalar};
pub use superalg::{ChartMap, ExtMono, SuperAlgebra, SuperForm, SuperFunction};
