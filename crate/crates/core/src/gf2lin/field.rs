//! Arithmetic in GF(2^k).
//!
//! Elements are bit patterns `0..2^k`, bit `i` holding the coefficient of
//! `z^i`. The coordinate map to F_2^k is the identity on these patterns.

use std::env;

use crate::error::{Error, Result};

/// A field element, stored as its bit pattern.
pub type Elem = u32;

/// Lexicographically first irreducible polynomial of degree `k`, for
/// `k = 1..=20`. Entry `k - 1` belongs to degree `k`.
pub const MODULUS_TABLE: [u32; 20] = [
    0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b, 0x20009, 0x40009, 0x80027, 0x100009,
];

/// Environment variable overriding table entries, e.g. `4=0x19,8=0x11d`.
pub const MODULI_ENV: &str = "SHIFTPD_MODULI";

/// Largest extension degree accepted with an explicit modulus.
pub const MAX_DEGREE: u32 = 31;

/// The field GF(2^k) under a fixed irreducible modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gf2kField {
    k: u32,
    modulus: u64,
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Exhaustive factor search: `p` is irreducible over F_2 iff no polynomial of
/// degree `1..=deg(p)/2` divides it.
pub fn is_irreducible(p: u64) -> bool {
    let k = degree(p);
    if k < 1 {
        return false;
    }
    let half = k / 2;
    // every q with 1 <= deg(q) <= half
    (2u64..(1u64 << (half + 1))).all(|q| poly_rem(p, q) != 0)
}

impl Gf2kField {
    /// Build a field from an explicit modulus, validating degree and
    /// irreducibility.
    pub fn new(k: u32, modulus: u64) -> Result<Self> {
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(k));
        }
        if degree(modulus) != k as i32 {
            return Err(Error::InvalidModulus {
                k,
                modulus,
                reason: format!("degree is {}", degree(modulus)),
            });
        }
        if !is_irreducible(modulus) {
            return Err(Error::InvalidModulus {
                k,
                modulus,
                reason: "reducible over F_2".into(),
            });
        }
        Ok(Gf2kField { k, modulus })
    }

    /// The table field for degree `k`, ignoring any environment override.
    pub fn from_table(k: u32) -> Result<Self> {
        if k == 0 || k as usize > MODULUS_TABLE.len() {
            return Err(Error::UnsupportedDegree(k));
        }
        Ok(Gf2kField {
            k,
            modulus: MODULUS_TABLE[k as usize - 1] as u64,
        })
    }

    /// The field used throughout: the table entry, unless `SHIFTPD_MODULI`
    /// names a modulus for this `k`.
    pub fn standard(k: u32) -> Result<Self> {
        match env::var(MODULI_ENV) {
            Ok(spec) if !spec.trim().is_empty() => match parse_override(&spec)?
                .into_iter()
                .find(|(kk, _)| *kk == k)
            {
                Some((_, modulus)) => Gf2kField::new(k, modulus),
                None => Gf2kField::from_table(k),
            },
            _ => Gf2kField::from_table(k),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, `2^k`.
    pub fn order(&self) -> u64 {
        1u64 << self.k
    }

    pub fn check(&self, a: Elem) -> Result<()> {
        if (a as u64) < self.order() {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                value: a as u64,
                k: self.k,
            })
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    /// Multiply two in-range elements (shift-and-add, reduce on overflow).
    pub fn mul_unchecked(&self, a: Elem, b: Elem) -> Elem {
        let top = 1u64 << self.k;
        let mut acc = 0u64;
        let mut x = a as u64;
        let mut y = b as u64;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            y >>= 1;
            x <<= 1;
            if x & top != 0 {
                x ^= self.modulus;
            }
        }
        acc as Elem
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Result<Elem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(acc, base);
            }
            base = self.mul_unchecked(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// Evaluate the polynomial with coefficients `coeffs` (constant first) at `x`.
    pub fn eval_poly(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.mul_unchecked(acc, x) ^ c)
    }
}

/// `gf_mul(a, b, F)`: the product in `F`, rejecting out-of-range operands.
pub fn gf_mul(a: Elem, b: Elem, field: &Gf2kField) -> Result<Elem> {
    field.mul(a, b)
}

/// Parse an override such as `4=0x19, 8=0x11d`.
pub fn parse_override(spec: &str) -> Result<Vec<(u32, u64)>> {
    let bad = |msg: String| Error::InvalidParameter(format!("{MODULI_ENV}: {msg}"));
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|entry| {
            let (k, m) = entry
                .split_once('=')
                .ok_or_else(|| bad(format!("entry `{entry}` is not k=modulus")))?;
            let k: u32 = k
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad degree in `{entry}`")))?;
            let m = m.trim();
            let m = m.strip_prefix("0x").or_else(|| m.strip_prefix("0X")).unwrap_or(m);
            let modulus = u64::from_str_radix(m, 16)
                .map_err(|_| bad(format!("bad hex modulus in `{entry}`")))?;
            Gf2kField::new(k, modulus)?;
            Ok((k, modulus))
        })
        .collect()
}

/// The modulus table rendered as `k=0x..` lines.
pub fn modulus_table_text() -> String {
    MODULUS_TABLE
        .iter()
        .enumerate()
        .map(|(i, m)| format!("{}={:#x}\n", i + 1, m))
        .collect()
}
