//! Exact experiments with bounded-support shifted partial derivatives.
//!
//! The crate covers the algebra needed to compare the shifted-partials
//! measure of homogeneous depth-4 circuits against Nisan–Wigderson
//! polynomials, and the random restriction built on GF(2^k) linear algebra.
//!
//! - [`gf2lin`]: GF(2^k) arithmetic and F_2 matrices.
//! - [`poly`]: monomials, polynomials, lex order, shifts.
//! - [`nw`]: the NW polynomial family.
//! - [`measure`]: exact dimension of shifted-partials spans.
//! - [`circuit`]: homogeneous ΣΠΣΠ circuits and their measure bound.
//! - [`restrict`]: the restriction procedure and Monte Carlo harnesses.
//! - [`bounds`]: closed-form bounds, constraints, parameter search.
//! - [`cli`]: command implementations behind the `shiftpd` binary.

pub mod bounds;
pub mod circuit;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod gf2lin;
pub mod measure;
pub mod nw;
pub mod poly;
pub mod restrict;

pub use error::{Error, Result};
