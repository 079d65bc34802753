use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

/// Variable `x[row, col]` of the n×n grid, both 0-based internally.
///
/// The derived ordering is *index* order. Under the monomial order the
/// variable with the smaller index is the larger one: `x[i1,j1] > x[i2,j2]`
/// iff `i1 < i2`, or `i1 == i2` and `j1 < j2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub row: u32,
    pub col: u32,
}

impl VarId {
    pub const fn new(row: u32, col: u32) -> Self {
        VarId { row, col }
    }

    /// Flat variable number `i` (0-based), placed on row 0.
    pub const fn flat(i: u32) -> Self {
        VarId { row: 0, col: i }
    }

    /// Compare under the variable order (`Greater` means larger variable).
    pub fn order_cmp(&self, other: &VarId) -> Ordering {
        other.cmp(self)
    }
}

impl fmt::Display for VarId {
    /// Rows print 1-based, columns 0-based (columns are field elements).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.row + 1, self.col)
    }
}

/// A monomial: sparse map from variables to positive exponents, sorted by
/// variable index.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// From `(variable, exponent)` pairs; zero exponents are dropped and
    /// repeated variables accumulate.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut exps: Vec<(VarId, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        exps.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial { exps: out }
    }

    /// Product of the given variables, each to the first power.
    pub fn product<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Self::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn exponents(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map_or(0, |i| self.exps[i].1)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    /// Number of distinct variables.
    pub fn support(&self) -> usize {
        self.exps.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_multilinear(&self) -> bool {
        self.exps.iter().all(|&(_, e)| e == 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    /// Does `other` divide `self` (exponent-wise `≤`)?
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other.exps.iter().all(|&(v, e)| self.exponent(v) >= e)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divisible_by(other) {
            return None;
        }
        let exps = self
            .exps
            .iter()
            .filter_map(|&(v, e)| {
                let r = e - other.exponent(v);
                (r > 0).then_some((v, r))
            })
            .collect();
        Some(Monomial { exps })
    }

    /// `∂_γ(self) = c · self/γ`; returns `(c, self/γ)` or `None` when zero.
    /// `c` is the product of falling factorials `e!/(e-g)!`.
    pub fn derivative(&self, gamma: &Monomial) -> Option<(BigUint, Monomial)> {
        let q = self.div(gamma)?;
        let mut c = BigUint::one();
        for &(v, g) in &gamma.exps {
            let e = self.exponent(v);
            for t in 0..g {
                c *= e - t;
            }
        }
        Some((c, q))
    }

    /// Every divisor of `self` of total degree `r`.
    pub fn divisors_of_degree(&self, r: u32) -> Vec<Monomial> {
        fn rec(
            exps: &[(VarId, u32)],
            left: u32,
            cur: &mut Vec<(VarId, u32)>,
            out: &mut Vec<Monomial>,
        ) {
            if left == 0 {
                out.push(Monomial { exps: cur.clone() });
                return;
            }
            let Some((&(v, e), rest)) = exps.split_first() else {
                return;
            };
            let remaining: u32 = rest.iter().map(|&(_, e)| e).sum();
            let lo = left.saturating_sub(remaining);
            for take in (lo..=e.min(left)).rev() {
                if take > 0 {
                    cur.push((v, take));
                }
                rec(rest, left - take, cur, out);
                if take > 0 {
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        if r <= self.degree() {
            rec(&self.exps, r, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// The lexicographic monomial order: scan variables from largest to
/// smallest; the first variable with differing exponents decides, larger
/// exponent wins.
pub fn lex_compare(a: &Monomial, b: &Monomial) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.exps.get(i), b.exps.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                // a has a positive exponent on a larger variable that b lacks
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `big` is an extension of `small` when `small` divides `big`.
pub fn is_extension(big: &Monomial, small: &Monomial) -> bool {
    big.divisible_by(small)
}

/// Multiset distance: `min(|S1| - |S1∩S2|, |S2| - |S1∩S2|)` where the
/// cardinalities count multiplicity.
pub fn monomial_distance(a: &Monomial, b: &Monomial) -> u32 {
    let common: u32 = a
        .exps
        .iter()
        .map(|&(v, e)| e.min(b.exponent(v)))
        .sum();
    (a.degree() - common).min(b.degree() - common)
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (i, &(v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
