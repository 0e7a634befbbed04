//! Restricted fractional Laplacian on an interval, the singular semilinear
//! problem (-Δ)^s u = u^{-q} + f h(u) + μ, and numerical certificates for the
//! a-priori structure of its solutions.

pub mod analysis;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod grid;
pub mod nonlinearity;
pub mod operator;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
