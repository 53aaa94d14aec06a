//! Design of graded-viscosity polymer slug banks.
//!
//! A bank of `n` slugs with decreasing polymer concentrations `c_1 > … > c_{n+1}`
//! is injected so that no slug's mixing zone overtakes the next one. Given a
//! viscosity curve and a fingering model this crate computes the switch
//! times, the polymer volume, optimal partitions, and the limiting profile
//! reached as `n → ∞`.
//!
//! ```
//! use tapering::{optimize, FingeringModel, OptimizerOptions, ViscosityModel};
//!
//! let mu = ViscosityModel::linear(1.0, 9.0).unwrap();
//! let best = optimize(&FingeringModel::Tfe, &mu, 2, &OptimizerOptions::default()).unwrap();
//! assert!((best.gain - 0.1983).abs() < 1e-4);
//! ```

// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conditions;
pub mod error;
pub mod fluid;
pub mod interp;
pub mod optimizer;
pub mod quadrature;
pub mod report;
pub mod scenario;
pub mod schedule;
pub mod simplex;

pub use error::{Error, Result};
pub use fluid::{FingeringModel, FluxFactor, ViscosityModel};
pub use optimizer::{optimize, OptimizationResult, OptimizerOptions};
pub use schedule::SlugConfiguration;
