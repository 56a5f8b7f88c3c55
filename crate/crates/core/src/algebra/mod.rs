//! Exact field arithmetic, linear algebra and polynomial algebra.

pub mod bivariate;
pub mod field;
pub mod matrix;
pub mod roots;
pub mod univariate;

pub use bivariate::{poly_gcd, resultant, BivariatePolynomial, Exponent, Variable};
pub use field::{is_prime, parse_rational, Field, Scalar};
pub use matrix::{mat_kernel, mat_rank, ExactMatrix};
pub use roots::{isolate_real_roots, simplest_between, RootInterval};
pub use univariate::UniPoly;
