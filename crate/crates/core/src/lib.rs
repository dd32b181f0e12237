//! Sampling and quadrature toolkit: Monte Carlo, Latin Hypercube and Sobol'
//! quasi-Monte Carlo samplers, uniformity diagnostics, variance-based
//! sensitivity analysis and convergence benchmarks on classified test
//! functions.

pub mod discrepancy;
pub mod error;
pub mod functions;
pub mod integrate;
pub mod io;
pub mod lhs;
pub mod points;
pub mod quantile;
pub mod rng;
pub mod sensitivity;
pub mod sobol;
pub mod sum;

pub use error::{Error, Result};
pub use points::PointSet;
