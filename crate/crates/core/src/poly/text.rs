//! Polynomial text format.
//!
//! A polynomial is a sum of terms `coef*x[i,j]^e*...`. Rows `i` are 1-based,
//! columns `j` are 0-based. The shorthand `x[k]` (1-based) names flat
//! variable `k`, which is the same variable as `x[1,k-1]`.
//!
//! The parser accepts general expressions: `+`, `-`, `*`, `^` with a
//! non-negative integer exponent, parentheses, integer or `a/b` rational
//! literals, and `#` comments. Outside parentheses a line break separates
//! terms like `+`, so the one-term-per-line file form parses directly.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, VarId};
use super::polynomial::{Coeff, Polynomial};
use crate::error::{Error, Result};

fn write_term(out: &mut String, c: &Coeff, m: &Monomial) {
    write!(out, "{c}").unwrap();
    if !m.is_one() {
        write!(out, "*{m}").unwrap();
    }
}

/// Canonical file form: one term per line, lex-descending, trailing newline.
/// The zero polynomial is the single line `0`.
pub fn to_file_text(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for (m, c) in p.terms_desc() {
        write_term(&mut out, c, m);
        out.push('\n');
    }
    out
}

/// Canonical single-line form, e.g. `1*x[1,0]^2 - 1*x[1,1]^2`.
pub fn to_inline_text(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms_desc().enumerate() {
        if i == 0 {
            write_term(&mut out, c, m);
        } else if c.is_negative() {
            out.push_str(" - ");
            write_term(&mut out, &-c.clone(), m);
        } else {
            out.push_str(" + ");
            write_term(&mut out, c, m);
        }
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_inline_text(self))
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

/// Parse a polynomial in either text form.
pub fn parse_polynomial(s: &str) -> Result<Polynomial> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        depth: 0,
    };
    p.skip_blank(true);
    if p.peek().is_none() {
        return Err(p.err("empty input"));
    }
    let poly = p.sum()?;
    p.skip_blank(true);
    match p.peek() {
        None => Ok(poly),
        Some(c) => Err(p.err(&format!("unexpected `{}`", c as char))),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Skip spaces and comments; newlines too when `newlines` is set.
    fn skip_blank(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            match c {
                b' ' | b'\t' | b'\r' => self.pos += 1,
                b'\n' if newlines => self.pos += 1,
                b'#' => {
                    while self.peek().is_some_and(|c| c != b'\n') {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn skip_ws(&mut self) {
        self.skip_blank(self.depth > 0);
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Polynomial> {
        let mut acc = self.signed_product()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.product_after_op()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.product_after_op()?);
                }
                Some(b'\n') if self.depth == 0 => {
                    self.skip_blank(true);
                    match self.peek() {
                        None | Some(b')') => break,
                        _ => acc = acc.add(&self.signed_product()?),
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product_after_op(&mut self) -> Result<Polynomial> {
        // an operator may be followed by a line break in file-like inputs
        self.skip_blank(true);
        self.product()
    }

    fn signed_product(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.product()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()
            }
            _ => self.product(),
        }
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            let mut acc = Polynomial::one();
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.depth += 1;
                self.skip_ws();
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.depth -= 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Polynomial::var(self.var_index()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let mut c = Coeff::from_integer(num);
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    c /= Coeff::from_integer(den);
                }
                Ok(Polynomial::constant(c))
            }
            Some(c) => Err(self.err(&format!("unexpected `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn small(&mut self) -> Result<u32> {
        self.skip_blank(false);
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| self.err("index too large"))
    }

    fn var_index(&mut self) -> Result<VarId> {
        if !self.eat(b'[') {
            return Err(self.err("expected `[` after `x`"));
        }
        let first = self.small()?;
        let v = if self.eat(b',') {
            let col = self.small()?;
            if first == 0 {
                return Err(self.err("rows are numbered from 1"));
            }
            VarId::new(first - 1, col)
        } else {
            if first == 0 {
                return Err(self.err("flat variables are numbered from 1"));
            }
            VarId::flat(first - 1)
        };
        if !self.eat(b']') {
            return Err(self.err("expected `]`"));
        }
        Ok(v)
    }
}

/// Integer coefficient helper used by generators and tests.
pub fn int(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

/// `true` when every coefficient of `p` is 1.
pub fn is_zero_one(p: &Polynomial) -> bool {
    p.terms().all(|(_, c)| c.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn roundtrip_both_forms() {
        let q = p("3/2*x[1,0]^2*x[2,1] - x[2,0] + 7");
        assert_eq!(p(&to_file_text(&q)), q);
        assert_eq!(p(&to_inline_text(&q)), q);
        assert_eq!(to_inline_text(&q), "3/2*x[1,0]^2*x[2,1] - 1*x[2,0] + 7");
    }

    #[test]
    fn file_form_is_lex_descending() {
        let q = p("x[2,0] + x[1,1] + x[1,0]");
        assert_eq!(to_file_text(&q), "1*x[1,0]\n1*x[1,1]\n1*x[2,0]\n");
    }

    #[test]
    fn flat_shorthand() {
        assert_eq!(p("x[1]*x[3]"), p("x[1,0]*x[1,2]"));
    }

    #[test]
    fn expressions_expand() {
        assert_eq!(p("(x[1] + x[2])*(x[1] - x[2])"), p("x[1]^2 - x[2]^2"));
        assert_eq!(p("0"), Polynomial::zero());
        assert_eq!(to_file_text(&Polynomial::zero()), "0\n");
    }

    #[test]
    fn newline_separates_terms() {
        assert_eq!(p("1*x[1]\n-1*x[2]\n\n"), p("x[1] - x[2]"));
        assert_eq!(p("# header\nx[1]\n"), p("x[1]"));
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(parse_polynomial("x[1,"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("x[0,1]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("2 $ x[1]"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_polynomial("").is_err());
        assert!(parse_polynomial("1/0").is_err());
    }
}
