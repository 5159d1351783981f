//! Exact scalars, polynomials, rational functions and linear algebra.

pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod scalar;

pub use linalg::{graded, kernel_of_rows, Echelon, Matrix, SparseVec};
pub use poly::{monomials, Monomial, Poly};
pub use ratfn::{ratfn_sum_reduce, RationalFn};
pub use scalar::{binomial, factorial, Scalar};
