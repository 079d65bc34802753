//! Bit vectors and bit-packed matrices over F_2.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length vector over F_2, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// The low `len` bits of `value`, bit `i` at position `i`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len.min(64) {
            v.set(i, (value >> i) & 1 == 1);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Bits `0..min(len, 64)` as an integer.
    pub fn to_u64(&self) -> u64 {
        (0..self.len.min(64)).fold(0, |acc, i| acc | ((self.get(i) as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over F_2.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Index of the lowest set bit.
    pub fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Concatenate `self` followed by `other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut v = BitVector::zeros(self.len + other.len);
        for i in 0..self.len {
            v.set(i, self.get(i));
        }
        for i in 0..other.len {
            v.set(self.len + i, other.get(i));
        }
        v
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        let mut v = BitVector::zeros(len);
        for i in 0..len {
            v.set(i, self.get(start + i));
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => {
                    return Err(Error::Parse {
                        pos: i,
                        msg: format!("expected 0 or 1, found `{c}`"),
                    })
                }
            }
        }
        Ok(v)
    }
}

/// Incremental echelon basis of a subspace of F_2^len.
///
/// Each stored vector has a distinct pivot (its lowest set bit after
/// reduction) and is zero at the pivots of all vectors inserted before it,
/// so reducing in insertion order is a complete membership test.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    len: usize,
    basis: Vec<(usize, BitVector)>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis {
            len,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (p, b) in &self.basis {
            if r.get(*p) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert `v`; returns `true` when it was independent of the basis.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        match r.lowest_one() {
            Some(p) => {
                self.basis.push((p, r));
                true
            }
            None => false,
        }
    }

    pub fn vectors(&self) -> impl Iterator<Item = &BitVector> {
        self.basis.iter().map(|(_, b)| b)
    }
}

/// A dense bit-packed matrix over F_2, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(Gf2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Build from column vectors of equal length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column of length {} in a matrix with {rows} rows",
                    c.len()
                )));
            }
            for i in 0..rows {
                m.set(i, j, c.get(i));
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.data[i].set(j, b);
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            c.set(i, self.get(i, j));
        }
        c
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.xor_assign(b);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = BitVector::zeros(other.cols);
            for k in 0..self.cols {
                if self.get(i, k) {
                    acc.xor_assign(&other.data[k]);
                }
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    /// Row vector times matrix: `x · A`.
    pub fn vec_mul(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{}",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        let mut acc = BitVector::zeros(self.cols);
        for i in 0..self.rows {
            if x.get(i) {
                acc.xor_assign(&self.data[i]);
            }
        }
        Ok(acc)
    }

    /// Matrix times column vector: `A · y`.
    pub fn mul_vec(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                y.len()
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            out.set(i, self.data[i].dot(y));
        }
        Ok(out)
    }

    /// Stack `self` above `other`.
    pub fn vstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Gf2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Place `other` to the right of `self`.
    pub fn hstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of heights {} and {}",
                self.rows, other.rows
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.concat(b))
            .collect();
        Ok(Gf2Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        self.data.iter().filter(|r| basis.insert(r)).count()
    }

    /// Basis of the left null space `{x : x · A = 0}`.
    pub fn left_kernel(&self) -> Vec<BitVector> {
        match solve_affine(self, &BitVector::zeros(self.cols)) {
            Ok(AffineSolve::Feasible(sol)) => sol.kernel,
            _ => unreachable!("homogeneous systems are feasible"),
        }
    }

    /// Basis of the right null space `{y : A · y = 0}`.
    pub fn right_kernel(&self) -> Vec<BitVector> {
        self.transpose().left_kernel()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        write!(f, "{self}")
    }
}

impl FromStr for Gf2Matrix {
    type Err = Error;

    /// Rows of `0`/`1` characters, one per line; blank lines ignored.
    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<BitVector> = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(BitVector::from_str)
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, BitVector::len);
        Gf2Matrix::from_rows(cols, rows)
    }
}

/// The full solution set `{x : x · M = B}` of a feasible system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: BitVector,
    pub kernel: Vec<BitVector>,
}

impl AffineSolution {
    /// log2 of the number of solutions.
    pub fn log2_size(&self) -> usize {
        self.kernel.len()
    }

    /// All solutions; only sensible when the kernel is small.
    pub fn enumerate(&self) -> Vec<BitVector> {
        let mut out = Vec::with_capacity(1 << self.kernel.len());
        for mask in 0u64..(1u64 << self.kernel.len()) {
            let mut x = self.particular.clone();
            for (t, k) in self.kernel.iter().enumerate() {
                if (mask >> t) & 1 == 1 {
                    x.xor_assign(k);
                }
            }
            out.push(x);
        }
        out
    }
}

/// Outcome of [`solve_affine`]; infeasibility is distinct from an empty kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolve {
    Feasible(AffineSolution),
    Infeasible,
}

impl AffineSolve {
    pub fn feasible(self) -> Option<AffineSolution> {
        match self {
            AffineSolve::Feasible(s) => Some(s),
            AffineSolve::Infeasible => None,
        }
    }
}

/// Solve `x · M = B` for `x ∈ F_2^{rows}`.
///
/// Rows of `M` are eliminated while tracking which original rows were
/// combined; rows that vanish give the kernel, and reducing `B` gives the
/// particular solution.
pub fn solve_affine(m: &Gf2Matrix, b: &BitVector) -> Result<AffineSolve> {
    if b.len() != m.cols {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} columns",
            b.len(),
            m.cols
        )));
    }
    let width = m.cols + m.rows;
    let mut basis = EchelonBasis::new(width);
    let mut kernel = Vec::new();
    for i in 0..m.rows {
        let aug = m.data[i].concat(&BitVector::unit(m.rows, i));
        let r = basis.reduce(&aug);
        match r.lowest_one() {
            Some(p) if p < m.cols => basis.basis.push((p, r)),
            Some(_) => kernel.push(r.slice(m.cols, m.rows)),
            None => unreachable!("tracking part keeps rows nonzero"),
        }
    }
    // reduce B; the tracking part accumulates the combination used
    let r = basis.reduce(&b.concat(&BitVector::zeros(m.rows)));
    if r.slice(0, m.cols).is_zero() {
        Ok(AffineSolve::Feasible(AffineSolution {
            particular: r.slice(m.cols, m.rows),
            kernel,
        }))
    } else {
        Ok(AffineSolve::Infeasible)
    }
}

/// Is `v` in the column span of `cols`?
pub fn in_span(cols: &Gf2Matrix, v: &BitVector) -> Result<bool> {
    if v.len() != cols.rows {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against columns of length {}",
            v.len(),
            cols.rows
        )));
    }
    let mut basis = EchelonBasis::new(cols.rows);
    for j in 0..cols.cols {
        basis.insert(&cols.column(j));
    }
    Ok(basis.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Gf2Matrix {
        s.parse().unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Gf2Matrix::identity(5).rank(), 5);
        assert_eq!(m("11\n11").rank(), 1);
        assert_eq!(Gf2Matrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn print_parse() {
        let a = m("101\n011\n");
        assert_eq!(a.to_string(), "101\n011");
        assert!("10\n2".parse::<Gf2Matrix>().is_err());
        assert!("10\n101".parse::<Gf2Matrix>().is_err());
    }

    #[test]
    fn empty_span() {
        let empty = Gf2Matrix::zeros(3, 0);
        assert!(in_span(&empty, &BitVector::zeros(3)).unwrap());
        assert!(!in_span(&empty, &BitVector::unit(3, 1)).unwrap());
    }

    #[test]
    fn solve_feasible_and_infeasible() {
        // x·M = B with M = [[1,1],[1,1]]
        let a = m("11\n11");
        let sol = solve_affine(&a, &"11".parse().unwrap()).unwrap().feasible().unwrap();
        assert_eq!(sol.kernel.len(), 1);
        for x in sol.enumerate() {
            assert_eq!(a.vec_mul(&x).unwrap().to_string(), "11");
        }
        assert_eq!(
            solve_affine(&a, &"10".parse().unwrap()).unwrap(),
            AffineSolve::Infeasible
        );
    }

    #[test]
    fn zero_width_system_has_full_space() {
        let a = Gf2Matrix::zeros(3, 0);
        let sol = solve_affine(&a, &BitVector::zeros(0)).unwrap().feasible().unwrap();
        assert_eq!(sol.log2_size(), 3);
    }

    #[test]
    fn kernels() {
        let a = m("100\n010\n110");
        let lk = a.left_kernel();
        assert_eq!(lk.len(), 1);
        assert!(a.vec_mul(&lk[0]).unwrap().is_zero());
        let rk = m("110\n011").right_kernel();
        assert_eq!(rk.len(), 1);
        assert_eq!(rk[0].to_string(), "111");
    }

    #[test]
    fn mismatched_dimensions() {
        let a = Gf2Matrix::zeros(2, 3);
        assert!(a.mul(&Gf2Matrix::zeros(2, 2)).is_err());
        assert!(solve_affine(&a, &BitVector::zeros(2)).is_err());
        assert!(a.vec_mul(&BitVector::zeros(3)).is_err());
    }
}
