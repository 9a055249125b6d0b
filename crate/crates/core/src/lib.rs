//! Numerical solvers for memory-kernel heat flux, the telegraph equation and
//! its parabolic and ballistic limits, the Schrödinger equation with and
//! without a second-order relaxation term, the mass-independent pilot-wave
//! equation, and the closed-form frequency roots that tie them together.
//!
//! Every solver works on a uniform 1-D [`grid::SpatialGrid`]. Periodic grids
//! use Fourier-spectral derivatives with exact per-mode time stepping where
//! the equation allows it; Dirichlet grids fall back to second-order finite
//! differences with trapezoidal (Crank-Nicolson type) time stepping.
//!
//! Natural units (ħ = c = G = 1) are the working default for time marching;
//! SI constants are available through [`constants::PhysicalConstants::codata_2018`].

// `!(x > 0.0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod export;
pub mod grid;
pub mod modes;
pub mod quantum;
pub mod telegraph;

mod fd;
mod propagator;
mod spectral;
mod tridiag;

pub use error::{Error, Result};
pub use num_complex::Complex64;
