//! Apolarity toolkit over exact fields.
//!
//! * [`field`]: rationals and prime fields.
//! * [`poly`]: sparse polynomials, the contraction action, text I/O.
//! * [`linalg`]: exact row reduction, kernels, subspaces.
//! * [`apolarity`]: annihilator ideals of arbitrary polynomials by linear algebra.
//! * [`binomial`]: complete-intersection classification and explicit
//!   annihilator generators for binomials.
//! * [`lefschetz`]: graded apolar algebras and strong Lefschetz witnesses.
//! * [`harness`]: end-to-end verification records and the corpus runner.

pub mod apolarity;
pub mod binomial;
pub mod field;
pub mod harness;
pub mod lefschetz;
pub mod linalg;
pub mod poly;
