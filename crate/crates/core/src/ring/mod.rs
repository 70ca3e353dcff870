//! Exact rationals, the graded constant ring and its numeric evaluation.

pub mod constants;
pub mod monomial;
pub mod poly;
pub mod precision;
pub mod rational;
pub mod symbolic;

pub use constants::{eval_constant, eval_constant_alt};
pub use monomial::{Constant, GradedMonomial};
pub use poly::PiPolynomial;
pub use precision::PrecisionValue;
pub use rational::Rational;
pub use symbolic::{Homogeneity, SymbolicValue};
