use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::monomial::{Monomial, VarId};
use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Coeff = BigRational;

/// A sparse polynomial with exact rational coefficients.
///
/// Canonical: no zero coefficients are stored, so structural equality is
/// polynomial equality. Terms are kept in ascending monomial order.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Coeff::one(), m)
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(Monomial::var(v))
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Sum of the given monomials, coefficient 1 each.
    pub fn sum_of_monomials<I: IntoIterator<Item = Monomial>>(monos: I) -> Self {
        Self::from_terms(monos.into_iter().map(|m| (m, Coeff::one())))
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    /// Terms in descending monomial order (canonical print order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter().rev()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Maximum monomial under the lex order.
    pub fn leading_monomial(&self) -> Result<&Monomial> {
        self.terms.keys().next_back().ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_coeff(&self) -> Result<&Coeff> {
        self.terms.values().next_back().ok_or(Error::ZeroPolynomial)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Largest support among the terms' monomials.
    pub fn max_support(&self) -> usize {
        self.terms.keys().map(Monomial::support).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Coeff::one())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    /// Multiply every monomial by `gamma`; coefficients are unchanged.
    pub fn shift(&self, gamma: &Monomial) -> Polynomial {
        // multiplication by a monomial is injective and order preserving
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(gamma), c.clone()))
                .collect(),
        }
    }

    /// Iterated formal partial derivative `∂_γ`.
    pub fn partial_derivative(&self, gamma: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((mult, q)) = m.derivative(gamma) {
                out.add_term(q, c * Coeff::from_integer(BigInt::from(mult)));
            }
        }
        out
    }

    /// Set every variable in `killed` to zero.
    pub fn substitute_zero(&self, killed: &HashSet<VarId>) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.vars().any(|v| killed.contains(&v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Apply a variable renaming; must be injective on this polynomial's
    /// variables.
    pub fn rename<F: Fn(VarId) -> VarId>(&self, f: F) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_pairs(m.exponents().iter().map(|&(v, e)| (f(v), e))),
                c.clone(),
            )
        }))
    }
}

/// `Lead-Mon(P)`.
pub fn leading_monomial(p: &Polynomial) -> Result<Monomial> {
    p.leading_monomial().cloned()
}

/// `∂_γ(P)`.
pub fn partial_derivative(p: &Polynomial, gamma: &Monomial) -> Polynomial {
    p.partial_derivative(gamma)
}

/// `γ · P`.
pub fn shift(p: &Polynomial, gamma: &Monomial) -> Polynomial {
    p.shift(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VarId {
        VarId::flat(i)
    }

    fn q(n: i64) -> Coeff {
        Coeff::from_integer(n.into())
    }

    #[test]
    fn cancellation_keeps_canonical_form() {
        let x = Polynomial::var(v(0));
        let y = Polynomial::var(v(1));
        let p = x.add(&y).sub(&y);
        assert_eq!(p, x);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.scale(&q(0)), Polynomial::zero());
    }

    #[test]
    fn derivative_examples() {
        let x = Monomial::var(v(0));
        let y = Monomial::var(v(1));
        assert!(Polynomial::monomial(y.clone()).partial_derivative(&x).is_zero());
        let xy = x.mul(&y);
        assert_eq!(
            Polynomial::monomial(xy.clone()).partial_derivative(&xy),
            Polynomial::one()
        );
        let x2y = Monomial::from_pairs([(v(0), 2), (v(1), 1)]);
        assert_eq!(
            Polynomial::monomial(x2y).partial_derivative(&x),
            Polynomial::term(q(2), xy)
        );
    }

    #[test]
    fn shift_examples() {
        let x = Monomial::var(v(0));
        let y = Monomial::var(v(1));
        let p = Polynomial::sum_of_monomials([x.clone(), y.clone()]);
        assert_eq!(p.shift(&Monomial::one()), p);
        assert_eq!(
            p.shift(&x),
            Polynomial::sum_of_monomials([Monomial::from_pairs([(v(0), 2)]), x.mul(&y)])
        );
    }

    #[test]
    fn leading_monomial_examples() {
        let a = Monomial::product([VarId::new(0, 1), VarId::new(1, 2)]);
        let b = Monomial::product([VarId::new(0, 2), VarId::new(1, 1)]);
        let p = Polynomial::sum_of_monomials([a.clone(), b]);
        assert_eq!(leading_monomial(&p).unwrap(), a);
        assert_eq!(
            leading_monomial(&Polynomial::monomial(a.clone())).unwrap(),
            a
        );
        assert_eq!(leading_monomial(&Polynomial::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn homogeneity() {
        let x = Monomial::var(v(0));
        let p = Polynomial::sum_of_monomials([x.mul(&x), Monomial::var(v(1))]);
        assert!(!p.is_homogeneous());
        assert!(Polynomial::zero().is_homogeneous());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn expansion_of_difference_of_squares() {
        let x = Polynomial::var(v(0));
        let y = Polynomial::var(v(1));
        let p = x.add(&y).mul(&x.sub(&y));
        let expected = Polynomial::from_terms([
            (Monomial::from_pairs([(v(0), 2)]), q(1)),
            (Monomial::from_pairs([(v(1), 2)]), q(-1)),
        ]);
        assert_eq!(p, expected);
    }
}
