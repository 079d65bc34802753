//! Brute-force reference implementations used only by tests.
//!
//! Everything here works on dense exponent vectors over flat variables and
//! plain rational Gaussian elimination, sharing no code with the library's
//! measure route.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use shiftpd::poly::{Monomial, Polynomial, VarId};

pub type Exps = Vec<u32>;
pub type Dense = BTreeMap<Exps, BigRational>;

pub fn to_dense(p: &Polynomial, n_vars: u32) -> Dense {
    p.terms()
        .map(|(m, c)| ((0..n_vars).map(|i| m.exponent(VarId::new(0, i))).collect(), c.clone()))
        .collect()
}

pub fn from_exps(e: &[u32]) -> Monomial {
    Monomial::from_pairs(e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (VarId::new(0, i as u32), k)))
}

/// All exponent vectors of total degree `deg` over `n` variables.
pub fn exps_of_degree(n: usize, deg: u32) -> Vec<Exps> {
    fn rec(n: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(n, deg, &mut Vec::new(), &mut out);
    out
}

pub fn support(e: &[u32]) -> usize {
    e.iter().filter(|&&k| k > 0).count()
}

fn falling(a: u32, b: u32) -> BigInt {
    (0..b).fold(BigInt::one(), |acc, i| acc * BigInt::from(a - i))
}

pub fn derivative(p: &Dense, theta: &[u32]) -> Dense {
    let mut out = Dense::new();
    for (e, c) in p {
        if e.iter().zip(theta).all(|(a, b)| a >= b) {
            let f = e.iter().zip(theta).fold(BigInt::one(), |acc, (&a, &b)| acc * falling(a, b));
            let q: Exps = e.iter().zip(theta).map(|(a, b)| a - b).collect();
            *out.entry(q).or_insert_with(BigRational::zero) += c * BigRational::from_integer(f);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn shift(p: &Dense, g: &[u32]) -> Dense {
    p.iter()
        .map(|(e, c)| (e.iter().zip(g).map(|(a, b)| a + b).collect(), c.clone()))
        .collect()
}

/// Rank of the span of nonzero polynomials by dense rational elimination.
pub fn rank_of(polys: &[Dense]) -> usize {
    let basis: BTreeSet<&Exps> = polys.iter().flat_map(|p| p.keys()).collect();
    let index: BTreeMap<&Exps, usize> = basis.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let cols = basis.len();
    let mut rows: Vec<Vec<BigRational>> = polys
        .iter()
        .map(|p| {
            let mut row = vec![BigRational::zero(); cols];
            for (e, c) in p {
                row[index[e]] = c.clone();
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dim of the span of `γ·∂_θ P` over every degree-`r` `θ` and every
/// degree-`ell` `γ` (with support exactly `m` when given).
pub fn brute_dim(p: &Polynomial, n_vars: u32, r: u32, ell: u32, m: Option<u32>) -> usize {
    let dense = to_dense(p, n_vars);
    let mut derivs: Vec<Dense> = exps_of_degree(n_vars as usize, r)
        .iter()
        .map(|t| derivative(&dense, t))
        .filter(|d| !d.is_empty())
        .collect();
    derivs.sort();
    derivs.dedup();
    let shifts: Vec<Exps> = exps_of_degree(n_vars as usize, ell)
        .into_iter()
        .filter(|g| m.is_none_or(|m| support(g) == m as usize))
        .collect();
    let gens: Vec<Dense> = derivs.iter().flat_map(|d| shifts.iter().map(move |g| shift(d, g))).collect();
    rank_of(&gens)
}

/// A nonzero random polynomial over `n_vars` flat variables.
pub fn random_poly<R: Rng>(rng: &mut R, n_vars: u32, max_degree: u32, max_terms: usize) -> Polynomial {
    loop {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=max_terms) {
            let e: Exps = {
                let deg = rng.gen_range(0..=max_degree);
                let mut e = vec![0u32; n_vars as usize];
                for _ in 0..deg {
                    e[rng.gen_range(0..n_vars as usize)] += 1;
                }
                e
            };
            let c = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
            terms.push((from_exps(&e), BigRational::from_integer(c.into())));
        }
        let p = Polynomial::from_terms(terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// `C(n, k)` as `u128` by the multiplicative formula.
pub fn choose(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}
