//! Minors of random matrices over small finite fields.
//!
//! The crate evaluates exact probabilities and bounds for the event that a
//! fixed matroid is a minor of the column matroid of a uniformly random
//! `m x n` matrix over GF(q), and checks them against brute-force
//! enumeration and seeded Monte Carlo simulation.

pub mod formulas;
pub mod gf;
pub mod matrix;
pub mod matroid;
pub mod minor;
pub mod oracle;
pub mod sampler;
pub mod sweep;
pub mod validate;

pub use gf::{Field, GfError};
pub use matrix::{FqMatrix, MatrixError};
pub use matroid::{Matroid, MatroidError, MatroidStats};
