//! Exact univariate polynomials and rational functions with arbitrary-precision
//! rational coefficients.

mod polynomial;
mod rational_function;

pub use polynomial::{integer_roots, Polynomial};
pub use rational_function::RationalFunction;
