//! Simulation and statistics for a kinetic SDE driven by a squared Bessel
//! process: `dS = (2f(t,Y) + 1) dt + 2√S dB` with `Y ~ BESQ(δ)`, and the
//! Monte Carlo machinery used to check its large-time behaviour.

pub mod bessel;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod functionals;
pub mod kinetic;
pub mod rng;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
