//! Exact rationals, polynomials, integer and rational matrices, and certified
//! complex root approximations.

pub mod intmat;
pub mod lll;
pub mod mp;
pub mod poly;
pub mod ratmat;
pub mod rational;
pub mod realmat;
pub mod roots;

pub use intmat::{hnf_rows, integer_kernel, IntMatrix};
pub use num_rational::BigRational;
pub use poly::{cyclotomic, totient, RationalPoly};
pub use rational::{format_rational, parse_rational};
pub use roots::{poly_complex_roots, ComplexApprox};
