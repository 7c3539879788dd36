//! Arbitrary-precision arctangent and pi via enhanced midpoint integration.
//!
//! * [`fixed`], [`rational`], [`precision`]: decimal fixed-point and exact
//!   rational arithmetic with an explicit guard-digit policy.
//! * [`series`]: the generalized arctangent expansion and its baselines.
//! * [`quadrature`]: the midpoint rule with even-derivative corrections.
//! * [`machin`]: two-term Machin-like formulas built from the nested radical
//!   sequence, and their evaluation.
//! * [`convergence`], [`selfcheck`], [`report`], [`cli`]: the command-line
//!   front end and its data products.

pub mod cli;
pub mod convergence;
pub mod error;
pub mod fixed;
pub mod machin;
pub mod precision;
pub mod quadrature;
pub mod rational;
pub mod report;
pub mod selfcheck;
pub mod series;

pub use error::{EmiError, Result};
pub use fixed::FixedReal;
pub use precision::Precision;
pub use rational::BigRational;
