//! Exact dimension of spaces of shifted partial derivatives.
//!
//! For a polynomial `P`, derivative monomials `θ` of degree `r` and shift
//! monomials `γ` of degree `ℓ` (optionally of support exactly `m`), the
//! measure is `dim span{γ · ∂_θ P}` over the rationals.

mod echelon;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use echelon::{sparse_rank, IntEchelon, SparseRow};

use crate::combinatorics::binomial_i;
use crate::error::{Error, Result};
use crate::gf2lin::Elem;
use crate::nw::{derivative_index_set, nw_monomials, NWParams};
use crate::poly::{
    all_monomials_of_degree, degree_count, enumerate_shift_monomials, monomial_distance,
    shift_count, Monomial, Polynomial, VarSpace,
};

/// Default cap on the number of generators `(θ, γ)` of a query.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Which derivative monomials `θ` to use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivativeIndex {
    /// Every degree-`r` monomial with a nonzero derivative.
    AllOfDegree,
    /// An explicit set, e.g. `𝓜^S`; each must have degree `r`.
    Explicit(Vec<Monomial>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureQuery {
    pub r: u32,
    pub ell: u32,
    /// Shift support; `None` allows every support.
    pub m: Option<u32>,
    pub index: DerivativeIndex,
}

impl MeasureQuery {
    /// Shifts of every support.
    pub fn unrestricted(r: u32, ell: u32) -> Self {
        MeasureQuery {
            r,
            ell,
            m: None,
            index: DerivativeIndex::AllOfDegree,
        }
    }

    /// Shifts of support exactly `m`.
    pub fn bounded(r: u32, ell: u32, m: u32) -> Self {
        MeasureQuery {
            r,
            ell,
            m: Some(m),
            index: DerivativeIndex::AllOfDegree,
        }
    }

    pub fn with_index(mut self, index: Vec<Monomial>) -> Self {
        self.index = DerivativeIndex::Explicit(index);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(m) = self.m {
            if m < 1 || m > self.ell {
                return Err(Error::InvalidParameter(format!(
                    "shift support must satisfy 1 <= m <= ell, got m={m}, ell={}",
                    self.ell
                )));
            }
        }
        if let DerivativeIndex::Explicit(v) = &self.index {
            if let Some(bad) = v.iter().find(|t| t.degree() != self.r) {
                return Err(Error::InvalidParameter(format!(
                    "derivative monomial {bad} does not have degree {}",
                    self.r
                )));
            }
        }
        Ok(())
    }
}

/// Serialized result of a measure query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureReport {
    pub r: u32,
    pub ell: u32,
    pub m: Option<u32>,
    /// Number of `(θ, γ)` pairs considered.
    pub generators: u64,
    /// Rows of the coefficient matrix (distinct nonzero derivatives × shifts).
    pub rows: u64,
    /// Columns: distinct monomials appearing.
    pub cols: u64,
    pub dim: u64,
}

/// Derivative monomials for a query: the explicit set, or every degree-`r`
/// divisor of a term of `P`.
pub fn derivative_monomials(p: &Polynomial, q: &MeasureQuery) -> Vec<Monomial> {
    match &q.index {
        DerivativeIndex::Explicit(v) => v.clone(),
        DerivativeIndex::AllOfDegree => {
            let set: BTreeSet<Monomial> = p
                .monomials()
                .flat_map(|m| m.divisors_of_degree(q.r))
                .collect();
            set.into_iter().collect()
        }
    }
}

/// Distinct nonzero derivatives `∂_θ P`.
pub fn distinct_derivatives(p: &Polynomial, thetas: &[Monomial]) -> Vec<Polynomial> {
    let derivs: Vec<Polynomial> = thetas
        .par_iter()
        .map(|t| p.partial_derivative(t))
        .collect();
    let mut seen = HashSet::new();
    derivs
        .into_iter()
        .filter(|d| !d.is_zero() && seen.insert(d.clone()))
        .collect()
}

/// Number of shift monomials a query ranges over.
pub fn shift_space_size(space: &VarSpace, q: &MeasureQuery) -> BigUint {
    let n = space.len() as u64;
    match q.m {
        Some(m) => shift_count(n, q.ell as u64, m as u64),
        None => degree_count(n, q.ell as u64),
    }
}

/// The shift monomials of a query.
pub fn shift_monomials(space: &VarSpace, q: &MeasureQuery) -> Vec<Monomial> {
    match q.m {
        Some(m) => enumerate_shift_monomials(space, q.ell, m).collect(),
        None => all_monomials_of_degree(space, q.ell).collect(),
    }
}

/// Clear denominators: an integer row proportional to `p`, columns via
/// `col`.
fn integer_row(p: &Polynomial, col: &HashMap<Monomial, usize>, gamma: &Monomial) -> SparseRow {
    let lcm = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut row: SparseRow = p
        .terms()
        .map(|(m, c)| (col[&m.mul(gamma)], (c * &lcm).to_integer()))
        .collect();
    row.sort_unstable_by_key(|e| e.0);
    row
}

/// Rank of the span of `{γ·Q : Q ∈ polys, γ ∈ shifts}`, with the column
/// count. Columns are ordered lex-descending so pivots are leading
/// monomials.
pub fn shifted_span_rank(polys: &[Polynomial], shifts: &[Monomial]) -> (u64, u64, u64) {
    let monos: BTreeSet<Monomial> = polys
        .par_iter()
        .flat_map_iter(|p| {
            shifts
                .iter()
                .flat_map(move |g| p.monomials().map(move |m| m.mul(g)))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let col: HashMap<Monomial, usize> = monos
        .into_iter()
        .rev()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let rows: Vec<SparseRow> = polys
        .par_iter()
        .flat_map_iter(|p| shifts.iter().map(|g| integer_row(p, &col, g)))
        .collect();
    let n_rows = rows.len() as u64;
    (sparse_rank(rows) as u64, n_rows, col.len() as u64)
}

/// `Dim⟨∂^r P⟩_ℓ` or `Dim⟨∂^r P⟩_(ℓ,m)`, with a full report.
pub fn shifted_partials_report(
    p: &Polynomial,
    q: &MeasureQuery,
    space: &VarSpace,
    budget: u64,
) -> Result<MeasureReport> {
    q.validate()?;
    let thetas = derivative_monomials(p, q);
    let n_shifts = shift_space_size(space, q);
    let generators = BigUint::from(thetas.len()) * &n_shifts;
    if generators > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: u128::try_from(&generators).unwrap_or(u128::MAX),
            budget,
        });
    }
    let generators = u64::try_from(&generators).unwrap();
    let derivs = distinct_derivatives(p, &thetas);
    let shifts = shift_monomials(space, q);
    let (dim, rows, cols) = shifted_span_rank(&derivs, &shifts);
    Ok(MeasureReport {
        r: q.r,
        ell: q.ell,
        m: q.m,
        generators,
        rows,
        cols,
        dim,
    })
}

/// The measure itself.
pub fn shifted_partials_dim(
    p: &Polynomial,
    q: &MeasureQuery,
    space: &VarSpace,
    budget: u64,
) -> Result<u64> {
    Ok(shifted_partials_report(p, q, space, budget)?.dim)
}

/// Number of distinct leading monomials in the span of `polys`.
///
/// Computed by a separate route from [`shifted_span_rank`]: rational
/// elimination directly on polynomials, keeping one monic basis element per
/// leading monomial.
pub fn leading_monomial_count(polys: &[Polynomial]) -> usize {
    leading_monomials(polys).len()
}

/// The set of leading monomials of the span.
pub fn leading_monomials(polys: &[Polynomial]) -> BTreeSet<Monomial> {
    let mut basis: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for p in polys {
        let mut p = p.clone();
        while let Ok(lead) = p.leading_monomial().cloned() {
            match basis.get(&lead) {
                Some(b) => {
                    let c = p.leading_coeff().unwrap().clone();
                    p = p.sub(&b.scale(&c));
                }
                None => {
                    let c = p.leading_coeff().unwrap().clone();
                    basis.insert(lead, p.scale(&c.recip()));
                    break;
                }
            }
        }
    }
    basis.into_keys().collect()
}

fn shifts_budget(space: &VarSpace, ell: u32, m: u32, budget: u64) -> Result<()> {
    let c = shift_count(space.len() as u64, ell as u64, m as u64);
    if c > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: u128::try_from(&c).unwrap_or(u128::MAX),
            budget,
        });
    }
    Ok(())
}

/// `|S_α ∩ S_β|` where `S_α = {γα : deg γ = ℓ, supp γ = m}`.
pub fn shift_intersection_count(
    alpha: &Monomial,
    beta: &Monomial,
    space: &VarSpace,
    ell: u32,
    m: u32,
    budget: u64,
) -> Result<u64> {
    if !alpha.is_multilinear() || !beta.is_multilinear() || alpha.degree() != beta.degree() {
        return Err(Error::Precondition(
            "shift intersection needs multilinear monomials of equal degree".into(),
        ));
    }
    shifts_budget(space, ell, m, budget)?;
    let sa: HashSet<Monomial> = enumerate_shift_monomials(space, ell, m)
        .map(|g| g.mul(alpha))
        .collect();
    Ok(enumerate_shift_monomials(space, ell, m)
        .filter(|g| sa.contains(&g.mul(beta)))
        .count() as u64)
}

/// `C(N−Δ, m−Δ) · C(ℓ−1, m−1)` with `Δ` the distance of `α` and `β`.
pub fn shift_intersection_bound(
    alpha: &Monomial,
    beta: &Monomial,
    n_vars: u64,
    ell: u32,
    m: u32,
) -> BigUint {
    let delta = monomial_distance(alpha, beta) as i64;
    binomial_i(n_vars as i64 - delta, m as i64 - delta) * binomial_i(ell as i64 - 1, m as i64 - 1)
}

/// `Lead-Mon(∂_α NW_d)` for every `α ∈ 𝓜^S` with nonzero derivative.
pub fn nw_derivative_leads(p: &NWParams, rows: &[Elem], budget: u64) -> Result<Vec<Monomial>> {
    let needed = p.num_monomials();
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let index: HashSet<Monomial> = derivative_index_set(rows, p).into_iter().collect();
    let mut lead: HashMap<Monomial, Monomial> = HashMap::new();
    let rset: HashSet<Elem> = rows.iter().copied().collect();
    for (_, mf) in nw_monomials(p) {
        let alpha = Monomial::product(mf.vars().filter(|v| rset.contains(&v.row)));
        debug_assert!(index.contains(&alpha));
        let q = mf.div(&alpha).unwrap();
        lead.entry(alpha)
            .and_modify(|cur| {
                if q > *cur {
                    *cur = q.clone();
                }
            })
            .or_insert(q);
    }
    let mut out: Vec<Monomial> = lead.into_values().collect();
    out.sort();
    Ok(out)
}

/// `|⋃_{α ∈ 𝓜^S} LM_{ℓ,m}(α)|` for `NW_d`, by direct enumeration.
pub fn nw_union_leading_count(
    p: &NWParams,
    rows: &[Elem],
    ell: u32,
    m: u32,
    budget: u64,
) -> Result<u64> {
    let (n, d, r) = (p.n(), p.d(), rows.len() as u32);
    if n <= d + r || r >= d {
        return Err(Error::Precondition(format!(
            "need n - r > d and r < d, got n={n}, d={d}, r={r}"
        )));
    }
    let mut uniq = rows.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() != rows.len() || rows.iter().any(|&i| i >= n) {
        return Err(Error::InvalidParameter("row set must be distinct rows below n".into()));
    }
    let space = VarSpace::grid(n);
    shifts_budget(&space, ell, m, budget)?;
    let leads = nw_derivative_leads(p, rows, budget)?;
    let shifts: Vec<Monomial> = enumerate_shift_monomials(&space, ell, m).collect();
    let total = (leads.len() as u128) * (shifts.len() as u128);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    let union: HashSet<Monomial> = leads
        .par_iter()
        .flat_map_iter(|l| shifts.iter().map(move |g| g.mul(l)))
        .collect();
    Ok(union.len() as u64)
}

/// Inclusion–exclusion lower bound
/// `n^r·C(N,m)C(ℓ−1,m−1) − C(n^r,2)·C(N−D,m−D)C(ℓ−1,m−1)`, `D = n−d−r`;
/// may be negative.
pub fn ie_lower_bound(n: u64, d: u64, r: u64, ell: u64, m: u64) -> BigInt {
    let big_n = (n * n) as i64;
    let nr = BigUint::from(n).pow(r as u32);
    let dd = n as i64 - d as i64 - r as i64;
    let shifts = binomial_i(big_n, m as i64) * binomial_i(ell as i64 - 1, m as i64 - 1);
    let pairs = if nr < BigUint::from(2u32) {
        BigUint::zero()
    } else {
        &nr * (&nr - 1u32) / 2u32
    };
    let overlap = binomial_i(big_n - dd, m as i64 - dd) * binomial_i(ell as i64 - 1, m as i64 - 1);
    BigInt::from(&nr * shifts) - BigInt::from(pairs * overlap)
}

/// `D = n − d − r` exactly, and whether `n^r·C(N−D, m−D) ≤ C(N, m)`.
pub fn ie_gate_holds(n: u64, d: u64, r: u64, m: u64) -> bool {
    let big_n = (n * n) as i64;
    let dd = n as i64 - d as i64 - r as i64;
    BigUint::from(n).pow(r as u32) * binomial_i(big_n - dd, m as i64 - dd)
        <= binomial_i(big_n, m as i64)
}

/// Sign helper for reports.
pub fn is_nonnegative(x: &BigInt) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nw::{generate_nw, DEFAULT_BUDGET as NW_BUDGET};
    use crate::poly::{parse_polynomial, VarId};

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn first_derivatives_of_two_products() {
        let q = p("x[1]*x[2] + x[3]*x[4]");
        let dim = shifted_partials_dim(&q, &MeasureQuery::unrestricted(1, 0), &VarSpace::flat(4), DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(dim, 4);
    }

    #[test]
    fn order_zero_no_shift() {
        let q = p("3*x[1]^2*x[2] - x[3]");
        let dim = shifted_partials_dim(&q, &MeasureQuery::unrestricted(0, 0), &VarSpace::flat(3), DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(dim, 1);
        assert_eq!(
            shifted_partials_dim(&Polynomial::zero(), &MeasureQuery::unrestricted(0, 0), &VarSpace::flat(3), DEFAULT_BUDGET)
                .unwrap(),
            0
        );
    }

    #[test]
    fn square_with_support_one_shift() {
        let q = p("x[1]^2");
        let dim = shifted_partials_dim(&q, &MeasureQuery::bounded(1, 1, 1), &VarSpace::flat(2), DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(dim, 2);
    }

    #[test]
    fn leading_monomial_counts() {
        assert_eq!(leading_monomial_count(&[p("x[1]")]), 1);
        assert_eq!(leading_monomial_count(&[p("x[1]"), p("x[1] + x[2]")]), 2);
        assert_eq!(leading_monomial_count(&[p("x[1] + x[2]"), p("2*x[1] + 2*x[2]")]), 1);
    }

    #[test]
    fn intersection_examples() {
        let s = VarSpace::flat(4);
        let a = Monomial::product([VarId::flat(0), VarId::flat(1)]);
        let b = Monomial::product([VarId::flat(2), VarId::flat(3)]);
        let c = shift_intersection_count(&a, &b, &s, 2, 2, DEFAULT_BUDGET).unwrap();
        assert!(BigUint::from(c) <= shift_intersection_bound(&a, &b, 4, 2, 2));
        assert_eq!(c, 1);
        let same = shift_intersection_count(&a, &a, &s, 3, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(BigUint::from(same), shift_count(4, 3, 2));
    }

    #[test]
    fn union_count_r0_is_shift_count() {
        let params = NWParams::new(2, 2).unwrap();
        let c = nw_union_leading_count(&params, &[], 2, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(BigUint::from(c), shift_count(16, 2, 2));
    }

    #[test]
    fn union_count_vs_ie_bound() {
        let params = NWParams::new(2, 2).unwrap();
        for (ell, m) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let c = nw_union_leading_count(&params, &[0], ell, m, DEFAULT_BUDGET).unwrap();
            assert!(BigInt::from(c) >= ie_lower_bound(4, 2, 1, ell as u64, m as u64));
            assert!(BigUint::from(c) <= BigUint::from(4u32) * shift_count(16, ell as u64, m as u64));
        }
    }

    #[test]
    fn leads_match_generic_lead_computation() {
        let params = NWParams::new(2, 2).unwrap();
        let nw = generate_nw(&params, NW_BUDGET).unwrap();
        let leads = nw_derivative_leads(&params, &[1], NW_BUDGET).unwrap();
        let mut generic: Vec<Monomial> = derivative_index_set(&[1], &params)
            .iter()
            .map(|a| nw.partial_derivative(a).leading_monomial().unwrap().clone())
            .collect();
        generic.sort();
        assert_eq!(leads, generic);
    }

    #[test]
    fn invalid_support_rejected() {
        let q = p("x[1]");
        assert!(shifted_partials_dim(&q, &MeasureQuery::bounded(0, 1, 2), &VarSpace::flat(2), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn budget_rejected() {
        let q = p("x[1]*x[2]*x[3]");
        assert!(matches!(
            shifted_partials_dim(&q, &MeasureQuery::unrestricted(1, 6), &VarSpace::flat(30), 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
