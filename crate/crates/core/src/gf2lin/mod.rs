//! GF(2^k) arithmetic and bit-packed linear algebra over F_2.
//!
//! Systems are always written in row-vector form, `x · M = B`.

mod eval;
mod field;
mod matrix;

pub use eval::{
    coefficient_vector, coefficients_from_vector, eval_matrix, mult_matrix, phi, phi_inv,
    stacked_eval,
};
pub use field::{
    gf_mul, is_irreducible, modulus_table_text, parse_override, Elem, Gf2kField, MAX_DEGREE,
    MODULI_ENV, MODULUS_TABLE,
};
pub use matrix::{in_span, solve_affine, AffineSolution, AffineSolve, BitVector, EchelonBasis, Gf2Matrix};

/// Rank of `a` (free-function form).
pub fn rank(a: &Gf2Matrix) -> usize {
    a.rank()
}
