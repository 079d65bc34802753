//! Multiplication matrices and evaluation matrices of GF(2^k) over F_2.

use super::field::{Elem, Gf2kField};
use super::matrix::{BitVector, Gf2Matrix};
use crate::error::Result;

/// Coordinates of a field element in F_2^k (identity on bit patterns).
pub fn phi(a: Elem, field: &Gf2kField) -> BitVector {
    BitVector::from_u64(a as u64, field.k() as usize)
}

/// Inverse of [`phi`].
pub fn phi_inv(v: &BitVector) -> Elem {
    v.to_u64() as Elem
}

/// The coefficient vector `[f] ∈ F_2^{dk}`: `phi` of each coefficient,
/// constant term first.
pub fn coefficient_vector(coeffs: &[Elem], field: &Gf2kField) -> BitVector {
    let k = field.k() as usize;
    let mut v = BitVector::zeros(coeffs.len() * k);
    for (e, &a) in coeffs.iter().enumerate() {
        for u in 0..k {
            v.set(e * k + u, (a >> u) & 1 == 1);
        }
    }
    v
}

/// Inverse of [`coefficient_vector`] for `d` coefficients.
pub fn coefficients_from_vector(v: &BitVector, d: usize, field: &Gf2kField) -> Vec<Elem> {
    let k = field.k() as usize;
    (0..d)
        .map(|e| {
            (0..k).fold(0, |acc, u| acc | ((v.get(e * k + u) as Elem) << u))
        })
        .collect()
}

/// `M(α)`: the k×k matrix with `M(α)·phi(β) = phi(α·β)`; column `t` is
/// `phi(α·z^t)`.
pub fn mult_matrix(alpha: Elem, field: &Gf2kField) -> Result<Gf2Matrix> {
    field.check(alpha)?;
    let k = field.k() as usize;
    let mut m = Gf2Matrix::zeros(k, k);
    for t in 0..k {
        let col = field.mul_unchecked(alpha, 1 << t);
        for u in 0..k {
            m.set(u, t, (col >> u) & 1 == 1);
        }
    }
    Ok(m)
}

/// `Eval_α`: the dk×k matrix with `[f] · Eval_α = phi(f(α))` for every `f`
/// of degree below `d`.
///
/// Block `e` (rows `e·k .. e·k + k`) is the transpose of `M(α^e)`, which is
/// what the row-vector convention requires.
pub fn eval_matrix(alpha: Elem, d: usize, field: &Gf2kField) -> Result<Gf2Matrix> {
    field.check(alpha)?;
    let k = field.k() as usize;
    let mut out = Gf2Matrix::zeros(d * k, k);
    let mut power: Elem = 1;
    for e in 0..d {
        for u in 0..k {
            // row u of the block is phi(z^u · α^e)
            let row = field.mul_unchecked(power, 1 << u);
            for t in 0..k {
                out.set(e * k + u, t, (row >> t) & 1 == 1);
            }
        }
        power = field.mul_unchecked(power, alpha);
    }
    Ok(out)
}

/// Eval matrices for a set of points placed side by side.
pub fn stacked_eval(points: &[Elem], d: usize, field: &Gf2kField) -> Result<Gf2Matrix> {
    let rows = d * field.k() as usize;
    points.iter().try_fold(Gf2Matrix::zeros(rows, 0), |acc, &p| {
        acc.hstack(&eval_matrix(p, d, field)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_mult_matrices() {
        for k in 1..=6 {
            let f = Gf2kField::from_table(k).unwrap();
            assert_eq!(mult_matrix(1, &f).unwrap(), Gf2Matrix::identity(k as usize));
            assert!(mult_matrix(0, &f).unwrap().is_zero());
        }
    }

    #[test]
    fn k2_mult_matrix_by_z() {
        let f = Gf2kField::from_table(2).unwrap();
        let m = mult_matrix(2, &f).unwrap();
        // columns phi(2·1) = (0,1), phi(2·2) = (1,1)
        assert_eq!(m.column(0).to_string(), "01");
        assert_eq!(m.column(1).to_string(), "11");
    }

    #[test]
    fn k1_eval_examples() {
        let f = Gf2kField::from_table(1).unwrap();
        assert_eq!(eval_matrix(0, 2, &f).unwrap().to_string(), "1\n0");
        assert_eq!(eval_matrix(1, 2, &f).unwrap().to_string(), "1\n1");
        // f(1) = a0 + a1 over all four f
        let e = eval_matrix(1, 2, &f).unwrap();
        for a0 in 0..2 {
            for a1 in 0..2 {
                let v = coefficient_vector(&[a0, a1], &f);
                assert_eq!(phi_inv(&e.vec_mul(&v).unwrap()), a0 ^ a1);
            }
        }
    }

    #[test]
    fn coefficient_vector_roundtrip() {
        let f = Gf2kField::from_table(3).unwrap();
        let c = vec![5, 0, 7, 2];
        let v = coefficient_vector(&c, &f);
        assert_eq!(v.len(), 12);
        assert_eq!(coefficients_from_vector(&v, 4, &f), c);
    }

    #[test]
    fn out_of_range_alpha() {
        let f = Gf2kField::from_table(2).unwrap();
        assert!(mult_matrix(4, &f).is_err());
        assert!(eval_matrix(9, 2, &f).is_err());
    }
}
