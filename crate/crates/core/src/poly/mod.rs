//! Sparse multivariate polynomials with exact rational coefficients.

mod monomial;
mod polynomial;
mod random;
mod shifts;
mod text;

pub use monomial::{is_extension, lex_compare, monomial_distance, Monomial, VarId};
pub use polynomial::{leading_monomial, partial_derivative, shift, Coeff, Polynomial};
pub use random::random_sparse;
pub use shifts::{
    all_monomials_of_degree, degree_count, enumerate_shift_monomials, shift_count,
    ShiftMonomials, VarSpace,
};
pub use text::{int, is_zero_one, parse_polynomial, to_file_text, to_inline_text};
