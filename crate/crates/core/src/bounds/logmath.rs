//! log2 helpers for quantities too large to materialize.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Signed;
use statrs::function::gamma::ln_gamma;

/// log2 of a positive big integer, accurate to double precision.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    (top.iter_u64_digits().next().unwrap() as f64).log2() + shift as f64
}

/// log2 of a positive rational; `-inf` for zero, NaN for negatives.
pub fn log2_rational(x: &BigRational) -> f64 {
    if x.is_negative() {
        return f64::NAN;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    log2_biguint(num) - log2_biguint(den)
}

/// log2 C(n, k) via log-gamma; `-inf` outside `0 <= k <= n`.
pub fn log2_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n || n < 0.0 {
        return f64::NEG_INFINITY;
    }
    if k == 0.0 || k == n {
        return 0.0;
    }
    (ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)) / std::f64::consts::LN_2
}

/// log2 Σ 2^{x_i}, stable.
pub fn log2_sum_exp2(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp2()).sum::<f64>().log2()
}

/// log2(2^a − 2^b) for `a >= b`.
pub fn log2_diff_exp2(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    a + (-(b - a).exp2()).ln_1p() / std::f64::consts::LN_2
}
