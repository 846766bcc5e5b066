//! PostLie algebra structures on sl(2,C).
//!
//! A PostLie product on sl(2,C) has the form `x∘y = [f(x), y]` where the
//! matrix `A` of `f` satisfies `A′((tr A + 1)I₃ − A) = A*`. This crate
//! provides exact and floating 3×3 linear algebra, identity checkers for the
//! PostLie, Jacobi and Rota–Baxter axioms, the SO(3,C) congruence action,
//! the five canonical solution families with a classifier, canonical forms
//! of complex symmetric matrices, and a multistart Newton solver that
//! rediscovers the classification numerically.

pub mod error;
pub mod json;
pub mod linalg;
pub mod mateq;
pub mod scalar;
pub mod sl2;
pub mod so3c;
pub mod solver;
pub mod symcanon;

pub use error::{Error, Result};
pub use linalg::{Mat3, Vec3};
pub use scalar::{Complex64, GaussianRational, Scalar};
