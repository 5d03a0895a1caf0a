//! Third-order finite difference WENO solvers for hyperbolic conservation
//! laws, with classical JS/Z weighting and a trainable shallow-network
//! weighting function, plus the benchmark problems and harness around them.

pub mod bench;
pub mod error;
pub mod euler;
pub mod problems;
pub mod riemann;
pub mod snn;
pub mod solver1d;
pub mod solver2d;
pub mod training;
pub mod weno;

pub use error::{Error, Result};
