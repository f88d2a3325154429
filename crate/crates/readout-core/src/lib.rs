//! Gaussian phase-space simulation of dispersive qubit readout through
//! networks of parametrically coupled linear modes.
//!
//! The crate lowers a declarative [`network_model::ModeNetwork`] to
//! quadrature-basis coefficient arrays, evolves or solves the moments of the
//! off-diagonal qubit block and of the pointer states, and derives dephasing,
//! measurement rate, efficiency, scattering, gain and nonreciprocity from
//! them. A truncated Fock-space integrator in [`fock_oracle`] checks the
//! Gaussian results on small instances, and [`protocols`] holds the pulsed
//! calibration models (catch-and-release, chevrons, diagnostic optimum).
//!
//! Units: angular frequencies in rad/µs, rates in 1/µs, times in µs. Use
//! [`units::mhz`] to convert a linear frequency f/2π in MHz.

pub mod error;
pub mod fock_oracle;
pub mod gaussian_dynamics;
pub mod linalg;
pub mod network_model;
pub mod ode;
pub mod protocols;
pub mod scattering_io;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
