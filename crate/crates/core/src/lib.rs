//! Connection probabilities in Bernoulli bond percolation and the pipe-dust
//! continuum model.
//!
//! - [`graph`]: finite graphs, theta graphs, gluing, lattice patches.
//! - [`exact`]: exact two-terminal polynomials and root isolation.
//! - [`mc`]: seeded, worker-count-invariant Monte Carlo on bond percolation.
//! - [`dust`]: pipe-dust sampling and continuum connectivity.
//! - [`analysis`]: closed-form bounds and thresholds.
//! - [`output`]: CSV rows and SVG charts.

pub mod analysis;
pub mod dust;
pub mod error;
pub mod exact;
pub mod graph;
pub mod mc;
pub mod output;
pub mod parallel;

pub use error::{Error, Result};
