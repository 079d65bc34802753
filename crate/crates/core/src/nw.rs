//! The Nisan–Wigderson polynomial `NW_d` over an `n × n` grid, `n = 2^k`.
//!
//! Row `i` and column `j` of the grid are both field elements of GF(2^k) in
//! bit-pattern order. The monomial of a univariate `f` of degree below `d`
//! is `m_f = ∏_i x[i, f(i)]`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::gf2lin::{Elem, Gf2kField};
use crate::poly::{Monomial, Polynomial, VarId};

/// Default cap on the number of monomials materialized at once.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NWParams {
    k: u32,
    d: u32,
    field: Gf2kField,
}

impl NWParams {
    /// `n = 2^k` and `1 <= d < n`, over the standard field for `k`.
    pub fn new(k: u32, d: u32) -> Result<Self> {
        Self::with_field(Gf2kField::standard(k)?, d)
    }

    pub fn with_field(field: Gf2kField, d: u32) -> Result<Self> {
        let n = field.order();
        if d == 0 || d as u64 >= n {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= d < n, got d={d}, n={n}"
            )));
        }
        Ok(NWParams {
            k: field.k(),
            d,
            field,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        1 << self.k
    }

    /// Number of variables, `n²`.
    pub fn num_vars(&self) -> u64 {
        (self.n() as u64).pow(2)
    }

    pub fn field(&self) -> &Gf2kField {
        &self.field
    }

    /// `n^d`, the number of monomials of `NW_d`.
    pub fn num_monomials(&self) -> u128 {
        (self.n() as u128).checked_pow(self.d).unwrap_or(u128::MAX)
    }

    fn check_budget(&self, budget: u64) -> Result<()> {
        let needed = self.num_monomials();
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        Ok(())
    }
}

/// Streams `(f, m_f)` over all coefficient vectors `f` (constant term
/// first), in base-`n` counting order with the constant term varying
/// fastest.
pub struct NwMonomials {
    params: NWParams,
    next: Option<Vec<Elem>>,
}

impl Iterator for NwMonomials {
    type Item = (Vec<Elem>, Monomial);

    fn next(&mut self) -> Option<Self::Item> {
        let f = self.next.take()?;
        let m = monomial_for(&f, &all_rows(&self.params), &self.params);
        let n = self.params.n();
        let mut succ = f.clone();
        let mut carry = true;
        for c in succ.iter_mut() {
            *c += 1;
            if *c < n {
                carry = false;
                break;
            }
            *c = 0;
        }
        if !carry {
            self.next = Some(succ);
        }
        Some((f, m))
    }
}

pub fn nw_monomials(p: &NWParams) -> NwMonomials {
    NwMonomials {
        params: *p,
        next: Some(vec![0; p.d() as usize]),
    }
}

/// All rows `0..n`.
pub fn all_rows(p: &NWParams) -> Vec<Elem> {
    (0..p.n()).collect()
}

/// `NW_d`, fully expanded. Fails when `n^d` exceeds `budget`.
pub fn generate_nw(p: &NWParams, budget: u64) -> Result<Polynomial> {
    p.check_budget(budget)?;
    Ok(Polynomial::sum_of_monomials(nw_monomials(p).map(|(_, m)| m)))
}

/// `m_f^S = ∏_{i ∈ S} x[i, f(i)]`.
pub fn monomial_for(f: &[Elem], rows: &[Elem], p: &NWParams) -> Monomial {
    let field = p.field();
    Monomial::product(
        rows.iter()
            .map(|&i| VarId::new(i, field.eval_poly(f, i))),
    )
}

/// `𝓜^S`: every monomial that picks one column in each row of `S`.
pub fn derivative_index_set(rows: &[Elem], p: &NWParams) -> Vec<Monomial> {
    let n = p.n();
    let mut out = vec![Vec::<VarId>::new()];
    for &i in rows {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |j| {
                    let mut v = prefix.clone();
                    v.push(VarId::new(i, j));
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Monomial::product).collect()
}

/// `NW_d` with every variable in `killed` set to zero.
pub fn restrict_nw(p: &NWParams, killed: &HashSet<VarId>, budget: u64) -> Result<Polynomial> {
    p.check_budget(budget)?;
    Ok(Polynomial::sum_of_monomials(
        nw_monomials(p)
            .map(|(_, m)| m)
            .filter(|m| !m.vars().any(|v| killed.contains(&v))),
    ))
}

/// Recover `f` from `m_f` by interpolating through rows `0..d`; `None` when
/// the monomial is not an NW monomial.
pub fn invert_monomial(m: &Monomial, p: &NWParams) -> Option<Vec<Elem>> {
    let n = p.n();
    if m.degree() != n || !m.is_multilinear() || m.support() != n as usize {
        return None;
    }
    let mut value = vec![None; n as usize];
    for v in m.vars() {
        if v.row >= n || v.col >= n || value[v.row as usize].is_some() {
            return None;
        }
        value[v.row as usize] = Some(v.col);
    }
    let d = p.d() as usize;
    let points: Vec<Elem> = (0..d as Elem).collect();
    let ys: Vec<Elem> = points.iter().map(|&x| value[x as usize].unwrap()).collect();
    let f = interpolate(&points, &ys, p.field());
    let candidate = monomial_for(&f, &all_rows(p), p);
    (candidate == *m).then_some(f)
}

/// Lagrange interpolation over GF(2^k); returns coefficients, constant first.
pub fn interpolate(xs: &[Elem], ys: &[Elem], field: &Gf2kField) -> Vec<Elem> {
    let d = xs.len();
    let mut out = vec![0; d];
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        // basis polynomial ∏_{j≠i} (X - x_j) / (x_i - x_j)
        let mut basis = vec![1];
        let mut denom = 1;
        for (j, &xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![0; basis.len() + 1];
            for (t, &c) in basis.iter().enumerate() {
                next[t + 1] ^= c;
                next[t] ^= field.mul_unchecked(c, xj);
            }
            basis = next;
            denom = field.mul_unchecked(denom, xi ^ xj);
        }
        let scale = field.mul_unchecked(yi, field.inv(denom).expect("distinct points"));
        for (t, &c) in basis.iter().enumerate() {
            out[t] ^= field.mul_unchecked(c, scale);
        }
    }
    out
}

/// Largest number of shared variables over all pairs of distinct monomials.
pub fn max_pairwise_agreement(monos: &[Monomial]) -> usize {
    let sets: Vec<HashSet<VarId>> = monos.iter().map(|m| m.vars().collect()).collect();
    let mut best = 0;
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            best = best.max(sets[a].intersection(&sets[b]).count());
        }
    }
    best
}
