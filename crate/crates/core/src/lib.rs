//! Gamma, digamma and polygamma evaluation, rigorous interval enclosures of
//! the polygamma functions, adaptive quadrature of their integral
//! representations, and a verifier for harmonic-mean, sum, product and
//! convexity inequalities involving `psi'`.

pub mod cli;
pub mod error;
pub mod inequalities;
pub mod interval;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
