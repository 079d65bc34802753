//! Sparse fraction-free row echelon form over the integers.
//!
//! A row is a list of `(column, value)` pairs sorted by column with nonzero
//! integer values. Column 0 is the largest monomial, so a row's pivot
//! (first column) is the leading monomial of the polynomial it encodes.
//! Elimination uses `a·row − b·pivot_row` with the gcd of the two leading
//! entries divided out first, followed by removal of the row content; no
//! fractions ever appear.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type SparseRow = Vec<(usize, BigInt)>;

/// Echelon basis with at most one row per pivot column.
#[derive(Clone, Debug, Default)]
pub struct IntEchelon {
    pivots: HashMap<usize, SparseRow>,
}

fn make_primitive(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g == BigInt::from(1) {
            break;
        }
    }
    let negate = row.first().is_some_and(|(_, v)| v.is_negative());
    if g > BigInt::from(1) {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if negate {
        for (_, v) in row.iter_mut() {
            *v = -&*v;
        }
    }
}

/// `a·x − b·y` on sorted sparse rows.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ci = x.get(i).map_or(usize::MAX, |e| e.0);
        let cj = y.get(j).map_or(usize::MAX, |e| e.0);
        let (col, val) = if ci < cj {
            i += 1;
            (ci, a * &x[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(b * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, a * &x[i - 1].1 - b * &y[j - 1].1)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

impl IntEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Pivot columns, ascending.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pivots.keys().copied().collect();
        v.sort_unstable();
        v
    }

    /// Reduce `row` against the basis until its pivot is new or it
    /// vanishes.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        make_primitive(&mut row);
        while let Some((col, lead)) = row.first().cloned() {
            let Some(p) = self.pivots.get(&col) else {
                break;
            };
            let g = lead.gcd(&p[0].1);
            let a = &p[0].1 / &g;
            let b = &lead / &g;
            row = combine(&a, &row, &b, p);
            make_primitive(&mut row);
        }
        row
    }

    /// Insert a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let r = self.reduce(row);
        match r.first() {
            Some(&(col, _)) => {
                self.pivots.insert(col, r);
                true
            }
            None => false,
        }
    }
}

/// Rank of a set of sparse rows.
pub fn sparse_rank<I: IntoIterator<Item = SparseRow>>(rows: I) -> usize {
    let mut e = IntEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[(usize, i64)]) -> SparseRow {
        v.iter().map(|&(c, x)| (c, BigInt::from(x))).collect()
    }

    #[test]
    fn dependent_rows_are_detected() {
        let rows = vec![
            row(&[(0, 2), (1, 4)]),
            row(&[(0, -3), (1, -6)]),
            row(&[(1, 5), (2, 1)]),
            row(&[(0, 1), (1, 7), (2, 1)]),
        ];
        assert_eq!(sparse_rank(rows), 2);
    }

    #[test]
    fn permutation_has_full_rank() {
        let rows = (0..5).map(|i| row(&[((i * 3) % 5, 1)]));
        assert_eq!(sparse_rank(rows), 5);
    }

    #[test]
    fn empty_and_zero_rows() {
        assert_eq!(sparse_rank(Vec::<SparseRow>::new()), 0);
        assert_eq!(sparse_rank(vec![Vec::new()]), 0);
    }
}
