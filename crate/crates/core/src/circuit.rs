//! Homogeneous depth-4 circuits `Σ_i Π_j Q_{i,j}`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_i};
use crate::error::{Error, Result};
use crate::poly::{int, parse_polynomial, to_inline_text, Monomial, Polynomial, VarId};

/// Default cap on expanded term counts.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A sum of products of sparse polynomials, with declared degree `n` and
/// variable count `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Depth4Circuit {
    products: Vec<Vec<Polynomial>>,
    degree: u32,
    num_vars: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitReport {
    pub homogeneous: bool,
    /// Largest support of any bottom monomial.
    pub s: usize,
    /// Top fan-in.
    pub t: usize,
    /// `(product, factor)` pairs (0-based) whose factor is not homogeneous.
    pub non_homogeneous: Vec<(usize, usize)>,
    /// Products whose factor degrees do not add up to the declared degree.
    pub degree_mismatch: Vec<usize>,
}

impl Depth4Circuit {
    pub fn new(products: Vec<Vec<Polynomial>>, degree: u32, num_vars: u32) -> Self {
        Depth4Circuit {
            products,
            degree,
            num_vars,
        }
    }

    pub fn products(&self) -> &[Vec<Polynomial>] {
        &self.products
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn top_fanin(&self) -> usize {
        self.products.len()
    }

    pub fn validate(&self) -> CircuitReport {
        let mut non_homogeneous = Vec::new();
        let mut degree_mismatch = Vec::new();
        let mut s = 0;
        for (i, prod) in self.products.iter().enumerate() {
            let mut total = 0;
            for (j, q) in prod.iter().enumerate() {
                if !q.is_homogeneous() {
                    non_homogeneous.push((i, j));
                }
                total += q.degree().unwrap_or(0);
                s = s.max(q.max_support());
            }
            if total != self.degree {
                degree_mismatch.push(i);
            }
        }
        CircuitReport {
            homogeneous: non_homogeneous.is_empty() && degree_mismatch.is_empty(),
            s,
            t: self.products.len(),
            non_homogeneous,
            degree_mismatch,
        }
    }

    /// `Ok` when homogeneous; otherwise the first offending factor.
    pub fn check_homogeneous(&self) -> Result<CircuitReport> {
        let rep = self.validate();
        if let Some(&(product, factor)) = rep.non_homogeneous.first() {
            return Err(Error::NonHomogeneous { product, factor });
        }
        if let Some(&i) = rep.degree_mismatch.first() {
            return Err(Error::Precondition(format!(
                "product {i} does not have degree {}",
                self.degree
            )));
        }
        Ok(rep)
    }

    /// Upper bound on the number of terms of the expansion.
    pub fn expansion_size_bound(&self) -> u128 {
        self.products
            .iter()
            .map(|p| {
                p.iter()
                    .try_fold(1u128, |acc, q| acc.checked_mul(q.num_terms() as u128))
                    .unwrap_or(u128::MAX)
            })
            .fold(0u128, |a, b| a.saturating_add(b))
    }

    pub fn expand(&self, budget: u64) -> Result<Polynomial> {
        let needed = self.expansion_size_bound();
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        Ok(self.products.iter().fold(Polynomial::zero(), |acc, prod| {
            acc.add(&prod.iter().fold(Polynomial::one(), |a, q| a.mul(q)))
        }))
    }

    /// Remove every bottom monomial containing a killed variable; products
    /// with a factor that becomes zero are dropped.
    pub fn apply_restriction(&self, killed: &HashSet<VarId>) -> Depth4Circuit {
        let products = self
            .products
            .iter()
            .map(|prod| prod.iter().map(|q| q.substitute_zero(killed)).collect::<Vec<_>>())
            .filter(|prod| prod.iter().all(|q| !q.is_zero()))
            .collect();
        Depth4Circuit {
            products,
            degree: self.degree,
            num_vars: self.num_vars,
        }
    }
}

impl fmt::Display for Depth4Circuit {
    /// One product per line, factors as `(…)*(…)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for prod in &self.products {
            let line: Vec<String> = prod.iter().map(|q| format!("({})", to_inline_text(q))).collect();
            writeln!(f, "{}", line.join("*"))?;
        }
        Ok(())
    }
}

/// Parse the circuit text format. Blank lines and `#` comments are ignored.
/// The declared degree is taken from the first product and the variable
/// count from the largest variable seen, unless given.
pub fn parse_circuit(text: &str, degree: Option<u32>, num_vars: Option<u32>) -> Result<Depth4Circuit> {
    let mut products = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            products.push(parse_product(body, offset)?);
        }
        offset += line.len();
    }
    let degree = degree.unwrap_or_else(|| {
        products
            .first()
            .map(|p: &Vec<Polynomial>| p.iter().map(|q| q.degree().unwrap_or(0)).sum())
            .unwrap_or(0)
    });
    let num_vars = num_vars.unwrap_or_else(|| infer_num_vars(&products));
    Ok(Depth4Circuit::new(products, degree, num_vars))
}

fn parse_product(line: &str, offset: usize) -> Result<Vec<Polynomial>> {
    let mut factors = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = line.as_bytes();
    let mut push = |s: usize, e: usize| -> Result<()> {
        parse_polynomial(&line[s..e]).map(|p| factors.push(p)).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos: pos + offset + s,
                msg,
            },
            other => other,
        })
    };
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                push(start, i)?;
                start = i + 1;
            }
            _ => {}
        }
    }
    push(start, line.len())?;
    Ok(factors)
}

fn infer_num_vars(products: &[Vec<Polynomial>]) -> u32 {
    let vars: Vec<VarId> = products
        .iter()
        .flatten()
        .flat_map(|q| q.vars())
        .collect();
    if vars.iter().all(|v| v.row == 0) {
        vars.iter().map(|v| v.col + 1).max().unwrap_or(0)
    } else {
        let side = vars.iter().map(|v| v.row.max(v.col) + 1).max().unwrap_or(0);
        side * side
    }
}

/// `T · C(n+r, r) · Σ_{i=0}^{n−r} Σ_{j=0}^{rs} C(N, m+j)·C(ℓ+i−1, m+j−1)`,
/// evaluated without checking parameter ranges.
pub fn circuit_measure_count(n: u64, big_n: u64, r: u64, ell: u64, m: u64, s: u64, t: u64) -> BigUint {
    if r > n {
        return BigUint::default();
    }
    let mut sum = BigUint::default();
    for i in 0..=(n - r) {
        for j in 0..=(r * s) {
            sum += binomial(big_n, m + j) * binomial_i(ell as i64 + i as i64 - 1, (m + j) as i64 - 1);
        }
    }
    BigUint::from(t) * binomial(n + r, r) * sum
}

/// Checked form of [`circuit_measure_count`]: requires `m + rs <= N/2` and
/// `m + rs <= ℓ/2`.
pub fn circuit_measure_upper_bound(
    n: u64,
    big_n: u64,
    r: u64,
    ell: u64,
    m: u64,
    s: u64,
    t: u64,
) -> Result<BigUint> {
    let w = m + r * s;
    if 2 * w > big_n || 2 * w > ell {
        return Err(Error::Precondition(format!(
            "need m + rs <= N/2 and m + rs <= ell/2, got m + rs = {w}, N = {big_n}, ell = {ell}"
        )));
    }
    Ok(circuit_measure_count(n, big_n, r, ell, m, s, t))
}

/// A random homogeneous circuit of degree `n` over `N` flat variables,
/// with `T` products and bottom support at most `s`. Coefficients are
/// nonzero integers in `-3..=3`.
pub fn random_circuit<R: Rng>(rng: &mut R, n: u32, num_vars: u32, t: usize, s: usize) -> Depth4Circuit {
    let products = (0..t)
        .map(|_| {
            let mut left = n;
            let mut factors = Vec::new();
            while left > 0 {
                let e = rng.gen_range(1..=left);
                left -= e;
                factors.push(random_homogeneous(rng, e, num_vars, s));
            }
            factors
        })
        .collect();
    Depth4Circuit::new(products, n, num_vars)
}

fn random_homogeneous<R: Rng>(rng: &mut R, degree: u32, num_vars: u32, s: usize) -> Polynomial {
    loop {
        let terms = rng.gen_range(1..=3);
        let mut p = Polynomial::zero();
        for _ in 0..terms {
            let support = rng.gen_range(1..=s.min(degree as usize).min(num_vars as usize));
            let mut vars: Vec<u32> = Vec::new();
            while vars.len() < support {
                let v = rng.gen_range(0..num_vars);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            // spread `degree` over the chosen variables, each at least 1
            let mut exps = vec![1u32; support];
            for _ in 0..degree - support as u32 {
                exps[rng.gen_range(0..support)] += 1;
            }
            let mono = Monomial::from_pairs(vars.into_iter().map(VarId::flat).zip(exps));
            let mut c = rng.gen_range(-3i64..=3);
            if c == 0 {
                c = 1;
            }
            p.add_term(mono, int(c));
        }
        if !p.is_zero() {
            return p;
        }
    }
}
