//! Exact and numerical machinery for the coefficients of `F_{j,N}(τ)/η(τ)`,
//! where `F_{j,N}` is a false theta function, together with a truncated
//! convergent series that reproduces them.

pub mod arith;
pub mod error;
pub mod gauss;
pub mod kloosterman;
pub mod multipliers;
pub mod rademacher;
pub mod series_oracle;
pub mod special_functions;
pub mod verify;

pub use arith::ExactRational;
pub use error::{Error, Result};
pub use kloosterman::{BoundScanReport, KloostermanKey, MultiplierRow, ScanKey};
pub use multipliers::SL2Matrix;
pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use rademacher::ConvergenceRow;
pub use series_oracle::CoefficientParams;
pub use special_functions::Quadrature;
