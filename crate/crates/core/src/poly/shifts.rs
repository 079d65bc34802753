//! Variable spaces and enumeration of shift monomials.

use num_bigint::BigUint;

use super::monomial::{Monomial, VarId};
use super::Polynomial;
use crate::combinatorics::{binomial, Combinations, Compositions};

/// An ordered set of variables that shifts range over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpace {
    vars: Vec<VarId>,
}

impl VarSpace {
    /// `x[1], ..., x[N]`.
    pub fn flat(n_vars: u32) -> Self {
        VarSpace {
            vars: (0..n_vars).map(VarId::flat).collect(),
        }
    }

    /// The `n × n` grid in row-major order.
    pub fn grid(n: u32) -> Self {
        VarSpace {
            vars: (0..n)
                .flat_map(|i| (0..n).map(move |j| VarId::new(i, j)))
                .collect(),
        }
    }

    /// Sorted, deduplicated.
    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        let mut vars: Vec<VarId> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        VarSpace { vars }
    }

    /// The flat space `x[1..=N]` when every variable of `p` is flat, with
    /// `N` its largest index; otherwise the smallest grid containing them.
    pub fn covering(p: &Polynomial) -> Self {
        let vars = p.vars();
        if vars.iter().all(|v| v.row == 0) {
            VarSpace::flat(vars.iter().map(|v| v.col + 1).max().unwrap_or(0))
        } else {
            VarSpace::grid(vars.iter().map(|v| v.row.max(v.col) + 1).max().unwrap_or(0))
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }
}

/// Streams every monomial of support exactly `m` and degree exactly `ell`
/// over the given variables, each exactly once.
pub struct ShiftMonomials<'a> {
    vars: &'a [VarId],
    ell: u32,
    subsets: Combinations,
    current: Option<(Vec<usize>, Compositions)>,
}

impl Iterator for ShiftMonomials<'_> {
    type Item = Monomial;

    fn next(&mut self) -> Option<Monomial> {
        loop {
            if let Some((subset, comps)) = &mut self.current {
                if let Some(exps) = comps.next() {
                    return Some(Monomial::from_pairs(
                        subset.iter().zip(exps).map(|(&i, e)| (self.vars[i], e)),
                    ));
                }
            }
            let subset = self.subsets.next()?;
            let comps = Compositions::new(self.ell, subset.len());
            self.current = Some((subset, comps));
        }
    }
}

/// Shift monomials of support `m` and degree `ell` over `space`.
///
/// Empty when `m > N` or `m > ell`. The case `m = 0` yields the unit
/// monomial iff `ell = 0`.
pub fn enumerate_shift_monomials(space: &VarSpace, ell: u32, m: u32) -> ShiftMonomials<'_> {
    let m = m as usize;
    let subsets = if m > space.len() || m > ell as usize {
        Combinations::new(0, 1)
    } else {
        Combinations::new(space.len(), m)
    };
    ShiftMonomials {
        vars: &space.vars,
        ell,
        subsets,
        current: None,
    }
}

/// `C(N, m) · C(ℓ−1, m−1)`, the number of shift monomials.
pub fn shift_count(n_vars: u64, ell: u64, m: u64) -> BigUint {
    if m == 0 {
        return BigUint::from((ell == 0) as u32);
    }
    if ell == 0 {
        return BigUint::default();
    }
    binomial(n_vars, m) * binomial(ell - 1, m - 1)
}

/// Every monomial of degree exactly `ell` over `space` (any support).
pub fn all_monomials_of_degree(space: &VarSpace, ell: u32) -> impl Iterator<Item = Monomial> + '_ {
    let top = (ell as usize).min(space.len()) as u32;
    let lo = if ell == 0 { 0 } else { 1 };
    (lo..=top).flat_map(move |m| enumerate_shift_monomials(space, ell, m))
}

/// `C(N + ℓ − 1, ℓ)`, the number of degree-`ell` monomials.
pub fn degree_count(n_vars: u64, ell: u64) -> BigUint {
    if n_vars == 0 {
        return BigUint::from((ell == 0) as u32);
    }
    binomial(n_vars + ell - 1, ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_examples() {
        let s2 = VarSpace::flat(2);
        let v: Vec<_> = enumerate_shift_monomials(&s2, 2, 2).collect();
        assert_eq!(v, vec![Monomial::product([VarId::flat(0), VarId::flat(1)])]);

        let s3 = VarSpace::flat(3);
        assert_eq!(enumerate_shift_monomials(&s3, 3, 2).count(), 6);
        let sq: HashSet<_> = enumerate_shift_monomials(&s3, 2, 1).collect();
        let expected: HashSet<_> = (0..3)
            .map(|i| Monomial::from_pairs([(VarId::flat(i), 2)]))
            .collect();
        assert_eq!(sq, expected);
    }

    #[test]
    fn out_of_range_is_empty() {
        let s = VarSpace::flat(2);
        assert_eq!(enumerate_shift_monomials(&s, 5, 3).count(), 0);
        assert_eq!(enumerate_shift_monomials(&s, 1, 2).count(), 0);
        assert_eq!(enumerate_shift_monomials(&s, 0, 0).count(), 1);
    }

    #[test]
    fn degree_counts() {
        let s = VarSpace::flat(4);
        for ell in 0..5 {
            let all: HashSet<_> = all_monomials_of_degree(&s, ell).collect();
            assert_eq!(BigUint::from(all.len()), degree_count(4, ell as u64));
            assert!(all.iter().all(|m| m.degree() == ell));
        }
    }

    #[test]
    fn grid_order() {
        let g = VarSpace::grid(2);
        assert_eq!(g.vars()[1], VarId::new(0, 1));
        assert_eq!(g.vars()[2], VarId::new(1, 0));
    }
}
