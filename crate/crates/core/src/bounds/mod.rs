//! Closed-form bounds, their constraint systems, and parameter search.
//!
//! Every quantity is available two ways: an exact big-rational value when
//! it is small enough to materialize, and a log2 value computed through
//! log-gamma that works for `n` up to `2^20`.

mod logmath;
mod report;
mod search;
mod stirling;

pub use logmath::{log2_binomial, log2_biguint, log2_diff_exp2, log2_rational, log2_sum_exp2};
pub use report::{write_csv, BoundsRow, CSV_HEADERS};
pub use search::{
    asymptotic_sweep, composed_bound, fit_through_origin, parameter_search, ComposedBound, SearchGrid,
    SearchResult, SweepRow,
};
pub use stirling::{stirling_sweep, stirling_window_check, StirlingCheck, StirlingSweep};

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::restrict::Eps;

/// Plain bounds or the variant after the restriction, where the `n^r`
/// factor erodes to `n^{(1−εn/d)r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plain,
    Restricted,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Mode::Plain),
            "restricted" => Ok(Mode::Restricted),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

/// Constants that the asymptotic statements leave unspecified.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsConfig {
    /// Constant in the `φ(n−d−r)²/N` slack of the r-bullet.
    pub slack_c: f64,
    /// Constant in the Stirling-window residual bound.
    pub stirling_c: f64,
    /// Allowed window for `ℓ/N`.
    pub band: (f64, f64),
    /// Largest `n` for which exact big-integer values are computed.
    pub exact_max_n: u64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig { slack_c: 8.0, stirling_c: 8.0, band: (0.125, 8.0), exact_max_n: 256 }
    }
}

/// How a parameter set was produced from the constant recipe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Recipe {
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

/// One point of the parameter space, `N = n²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet {
    pub n: u64,
    pub d: u64,
    pub r: u64,
    pub ell: u64,
    pub m: u64,
    pub s: u64,
    pub t: u64,
    pub eps: Eps,
    pub recipe: Option<Recipe>,
}

impl ParamSet {
    pub fn new(n: u64, d: u64, r: u64, ell: u64, m: u64, s: u64) -> Self {
        ParamSet { n, d, r, ell, m, s, t: 1, eps: Eps::zero(), recipe: None }
    }

    pub fn with_t(mut self, t: u64) -> Self {
        self.t = t;
        self
    }

    pub fn with_eps(mut self, eps: Eps) -> Self {
        self.eps = eps;
        self
    }

    pub fn big_n(&self) -> u64 {
        self.n * self.n
    }

    /// `δ = d/n`.
    pub fn delta(&self) -> f64 {
        self.d as f64 / self.n as f64
    }

    /// `φ = N/m`.
    pub fn phi(&self) -> f64 {
        self.big_n() as f64 / self.m as f64
    }

    /// `η = m/ℓ`.
    pub fn eta(&self) -> f64 {
        self.m as f64 / self.ell as f64
    }

    /// Exponent of `n` in the lower bound: `r`, or `(1−εn/d)r` when restricted.
    pub fn n_exponent(&self, mode: Mode) -> Ratio<i128> {
        let r = Ratio::from_integer(self.r as i128);
        match mode {
            Mode::Plain => r,
            Mode::Restricted => {
                if self.d == 0 {
                    return r;
                }
                let e = Ratio::new(*self.eps.numer() as i128, *self.eps.denom() as i128);
                let erosion = e * Ratio::new(self.n as i128, self.d as i128);
                (Ratio::one() - erosion) * r
            }
        }
    }
}

/// A bound held as an exact rational (when materialized) and as log2.
#[derive(Clone, Debug, PartialEq)]
pub struct BigBound {
    pub exact: Option<BigRational>,
    pub log2: f64,
    /// The exact value replaces a non-integral power of 2 by its floor, so
    /// it is a lower bound on the true value rather than equal to it.
    pub floor_guarded: bool,
}

impl BigBound {
    fn from_exact(x: BigRational) -> Self {
        BigBound { log2: log2_rational(&x), exact: Some(x), floor_guarded: false }
    }

    /// `|log2(exact) − log2|`, when an unguarded exact value exists.
    pub fn dual_path_gap(&self) -> Option<f64> {
        match (&self.exact, self.floor_guarded) {
            (Some(x), false) => Some((log2_rational(x) - self.log2).abs()),
            _ => None,
        }
    }

    /// The exact value when it is an integer.
    pub fn exact_integer(&self) -> Option<BigUint> {
        let x = self.exact.as_ref()?;
        if x.is_integer() && !x.is_negative() {
            x.to_integer().to_biguint()
        } else {
            None
        }
    }
}

/// `n^e` for a rational exponent: exact when it is rational, otherwise
/// `2^{⌊e·log2 n⌋}` with the guard flag set.
fn exact_power(n: u64, e: Ratio<i128>) -> (BigRational, bool) {
    let as_rational = |base: BigUint, p: i128| -> BigRational {
        let v = base.pow(p.unsigned_abs() as u32);
        if p >= 0 {
            BigRational::from_integer(BigInt::from(v))
        } else {
            BigRational::new(BigInt::one(), BigInt::from(v))
        }
    };
    if e.is_integer() {
        return (as_rational(BigUint::from(n), e.to_integer()), false);
    }
    if n.is_power_of_two() {
        let ke = e * Ratio::from_integer(n.trailing_zeros() as i128);
        let guarded = !ke.is_integer();
        return (as_rational(BigUint::from(2u32), ke.floor().to_integer()), guarded);
    }
    let bits = ratio_f64(e) * (n as f64).log2();
    (as_rational(BigUint::from(2u32), bits.floor() as i128), true)
}

fn ratio_f64(e: Ratio<i128>) -> f64 {
    e.numer().to_f64().unwrap() / e.denom().to_f64().unwrap()
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn log2_nw_lower(p: &ParamSet, mode: Mode) -> f64 {
    let big_n = p.big_n() as f64;
    -1.0 + ratio_f64(p.n_exponent(mode)) * (p.n as f64).log2()
        + log2_binomial(big_n, p.m as f64)
        + log2_binomial(p.ell as f64 - 1.0, p.m as f64 - 1.0)
}

/// `0.5·n^e·C(N,m)·C(ℓ−1,m−1)` with `e` from [`ParamSet::n_exponent`],
/// evaluated without checking constraints.
pub fn nw_lower_bound_unchecked(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> BigBound {
    let log2 = log2_nw_lower(p, mode);
    if p.n > cfg.exact_max_n {
        return BigBound { exact: None, log2, floor_guarded: false };
    }
    let (power, guarded) = exact_power(p.n, p.n_exponent(mode));
    let bin = binomial(p.big_n(), p.m)
        * if p.ell >= 1 && p.m >= 1 { binomial(p.ell - 1, p.m - 1) } else { BigUint::from((p.ell == 0 && p.m == 0) as u32) };
    let exact = half() * power * BigRational::from_integer(BigInt::from(bin));
    if guarded {
        BigBound { exact: Some(exact), log2, floor_guarded: true }
    } else {
        let mut b = BigBound::from_exact(exact);
        // keep the log-gamma value so the two paths stay independent
        b.log2 = log2;
        b
    }
}

/// `0.5·n^r·C(N,m)·C(ℓ−1,m−1)`, after checking the plain constraints.
pub fn nw_lower_bound(p: &ParamSet, cfg: &BoundsConfig) -> Result<BigBound> {
    require(p, Mode::Plain, cfg)?;
    Ok(nw_lower_bound_unchecked(p, Mode::Plain, cfg))
}

/// `0.5·n^{(1−εn/d)r}·C(N,m)·C(ℓ−1,m−1)`, after checking the restricted
/// constraints.
pub fn restricted_nw_lower_bound(p: &ParamSet, cfg: &BoundsConfig) -> Result<BigBound> {
    require(p, Mode::Restricted, cfg)?;
    Ok(nw_lower_bound_unchecked(p, Mode::Restricted, cfg))
}

/// log2 of the circuit measure count, through
/// `Σ_i C(ℓ+i−1, m+j−1) = C(ℓ+n−r, m+j) − C(ℓ−1, m+j)`.
pub fn log2_circuit_count(n: u64, big_n: u64, r: u64, ell: u64, m: u64, s: u64, t: u64) -> f64 {
    if r > n || ell == 0 || t == 0 {
        return f64::NEG_INFINITY;
    }
    let (nf, ellf) = (big_n as f64, ell as f64);
    let top = ellf + (n - r) as f64;
    let terms: Vec<f64> = (0..=r * s)
        .map(|j| {
            let q = (m + j) as f64;
            log2_binomial(nf, q) + log2_diff_exp2(log2_binomial(top, q), log2_binomial(ellf - 1.0, q))
        })
        .collect();
    (t as f64).log2() + log2_binomial((n + r) as f64, r as f64) + log2_sum_exp2(&terms)
}

/// Exact circuit measure count in closed form over `j` only; agrees with
/// [`crate::circuit::circuit_measure_count`].
pub fn circuit_count_closed_form(n: u64, big_n: u64, r: u64, ell: u64, m: u64, s: u64, t: u64) -> BigUint {
    if r > n || ell == 0 {
        return BigUint::zero();
    }
    let mut sum = BigUint::zero();
    for j in 0..=r * s {
        let q = m + j;
        sum += binomial(big_n, q) * (binomial(ell + n - r, q) - binomial(ell - 1, q));
    }
    BigUint::from(t) * binomial(n + r, r) * sum
}

/// The lower bound over the circuit count, evaluated without checking
/// constraints.
pub fn topfanin_ratio_unchecked(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> BigBound {
    let num = nw_lower_bound_unchecked(p, mode, cfg);
    let big_n = p.big_n();
    let log2 = num.log2 - log2_circuit_count(p.n, big_n, p.r, p.ell, p.m, p.s, p.t);
    let exact = num.exact.and_then(|x| {
        let den = circuit_count_closed_form(p.n, big_n, p.r, p.ell, p.m, p.s, p.t);
        (!den.is_zero()).then(|| x / BigRational::from_integer(BigInt::from(den)))
    });
    BigBound { exact, log2, floor_guarded: num.floor_guarded }
}

/// Ratio of the NW lower bound to the circuit measure count at top
/// fan-in `p.t`; `log2` of it lower-bounds `log2` of the top fan-in
/// needed when `p.t = 1`.
pub fn topfanin_ratio(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> Result<BigBound> {
    require(p, mode, cfg)?;
    Ok(topfanin_ratio_unchecked(p, mode, cfg))
}

/// One evaluated constraint; `margin >= 0` roughly means satisfied, and
/// `holds` is decided exactly where the constraint is integral.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub holds: bool,
    pub margin: f64,
    /// Whether the constraint gates feasibility; the others are reported only.
    pub hard: bool,
}

pub const CONSTRAINT_NAMES: [&str; 9] = [
    "positive",
    "m_rs_le_half_n",
    "m_rs_le_half_ell",
    "ell_n_band",
    "n_minus_r_gt_d",
    "r_lt_d_minus_1",
    "r_bullet_plus",
    "r_bullet_minus",
    "ie_gate",
];

/// `(rhs_plus, rhs_minus)` of the r-bullet
/// `r <= ((n−d)·log2 φ ± C·φ·(n−d−r)²/N) / (L + log2 φ)`,
/// with `L = log2 n`, or `(1−εn/d)·log2 n` when restricted.
pub fn r_bullet_rhs(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> (f64, f64) {
    if p.m == 0 || p.n < 2 {
        return (f64::NEG_INFINITY, f64::NEG_INFINITY);
    }
    let phi = p.phi();
    let lphi = phi.log2();
    let ln = (p.n as f64).log2();
    let l = match (mode, p.r) {
        (Mode::Plain, _) | (_, 0) => ln,
        (Mode::Restricted, r) => ratio_f64(p.n_exponent(mode)) / r as f64 * ln,
    };
    let dist = p.n as f64 - p.d as f64 - p.r as f64;
    let slack = cfg.slack_c * phi * dist * dist / p.big_n() as f64;
    let base = (p.n as f64 - p.d as f64) * lphi;
    let den = l + lphi;
    ((base + slack) / den, (base - slack) / den)
}

/// `(holds, margin)` of `n^e·C(N−D, m−D) <= C(N, m)` with `D = n−d−r`;
/// margin is the log2 gap. Decided exactly when `n^e` is exact.
pub fn ie_gate(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> (bool, f64) {
    if p.n < p.d + p.r {
        return (false, f64::NEG_INFINITY);
    }
    let dd = p.n - p.d - p.r;
    let big_n = p.big_n();
    if dd > p.m {
        return (true, f64::INFINITY);
    }
    let e = p.n_exponent(mode);
    let lhs_log = ratio_f64(e) * (p.n as f64).log2()
        + log2_binomial((big_n - dd) as f64, (p.m - dd) as f64);
    let margin = log2_binomial(big_n as f64, p.m as f64) - lhs_log;
    if p.n <= cfg.exact_max_n {
        let (power, guarded) = exact_power(p.n, e);
        if !guarded {
            let lhs = power * BigRational::from_integer(BigInt::from(binomial(big_n - dd, p.m - dd)));
            let rhs = BigRational::from_integer(BigInt::from(binomial(big_n, p.m)));
            return (lhs <= rhs, margin);
        }
    }
    (margin >= -1e-6, margin)
}

/// Evaluate every constraint bullet, in [`CONSTRAINT_NAMES`] order.
pub fn check_constraints(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> Vec<ConstraintCheck> {
    let c = |name, holds, margin: f64, hard| ConstraintCheck { name, holds, margin, hard };
    let (n, d, r) = (p.n as i128, p.d as i128, p.r as i128);
    let big_n = p.big_n() as i128;
    let w = p.m as i128 + r * p.s as i128;
    let ell = p.ell as i128;

    let pos_margin = [p.n as i128 - 2, r - 1, ell - 1, p.m as i128 - 1, p.s as i128 - 1, p.t as i128 - 1]
        .into_iter()
        .min()
        .unwrap();
    let ratio = if p.n == 0 { f64::NAN } else { p.ell as f64 / p.big_n() as f64 };
    let band_margin = if ratio.is_nan() { f64::NEG_INFINITY } else { (ratio - cfg.band.0).min(cfg.band.1 - ratio) };
    let band_holds = p.n > 0 && {
        // exact: lo·N <= ℓ <= hi·N
        let (lo, hi) = (cfg.band.0, cfg.band.1);
        lo * p.big_n() as f64 <= p.ell as f64 && p.ell as f64 <= hi * p.big_n() as f64
    };
    let (plus, minus) = r_bullet_rhs(p, mode, cfg);
    let (ie_holds, ie_margin) = ie_gate(p, mode, cfg);

    vec![
        c("positive", pos_margin >= 0, pos_margin as f64, true),
        c("m_rs_le_half_n", 2 * w <= big_n, (big_n - 2 * w) as f64 / 2.0, true),
        c("m_rs_le_half_ell", 2 * w <= ell, (ell - 2 * w) as f64 / 2.0, true),
        c("ell_n_band", band_holds, band_margin, true),
        c("n_minus_r_gt_d", n - r > d, (n - r - d) as f64, true),
        c("r_lt_d_minus_1", r < d - 1, (d - 1 - r) as f64, true),
        c("r_bullet_plus", r as f64 <= plus, plus - r as f64, false),
        c("r_bullet_minus", r as f64 <= minus, minus - r as f64, true),
        c("ie_gate", ie_holds, ie_margin, false),
    ]
}

/// Whether every hard constraint holds.
pub fn is_feasible(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> bool {
    check_constraints(p, mode, cfg).iter().all(|c| !c.hard || c.holds)
}

fn require(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> Result<()> {
    let failed: Vec<String> = check_constraints(p, mode, cfg)
        .into_iter()
        .filter(|c| c.hard && !c.holds)
        .map(|c| format!("{} (margin {})", c.name, c.margin))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::ConstraintViolation(failed.join(", ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_measure_count;

    fn cfg() -> BoundsConfig {
        BoundsConfig::default()
    }

    #[test]
    fn small_lower_bound_value() {
        let p = ParamSet::new(4, 2, 1, 4, 2, 1);
        let b = nw_lower_bound_unchecked(&p, Mode::Plain, &cfg());
        assert_eq!(b.exact_integer(), Some(BigUint::from(720u32)));
        assert!(b.dual_path_gap().unwrap() < 1e-6);
    }

    #[test]
    fn collapsed_lower_bound() {
        let p = ParamSet::new(4, 2, 0, 1, 1, 1);
        let b = nw_lower_bound_unchecked(&p, Mode::Plain, &cfg());
        assert_eq!(b.exact.unwrap(), BigRational::from_integer(8.into()));
    }

    #[test]
    fn restricted_erosion() {
        let base = ParamSet::new(16, 8, 2, 40, 6, 1);
        let plain = nw_lower_bound_unchecked(&base, Mode::Plain, &cfg());
        let zero = nw_lower_bound_unchecked(&base, Mode::Restricted, &cfg());
        assert_eq!(plain.exact, zero.exact);
        // εn/d = 1 removes the power of n
        let full = base.clone().with_eps(Eps::new(1, 2));
        let b = nw_lower_bound_unchecked(&full, Mode::Restricted, &cfg());
        let expected = half() * BigRational::from_integer(BigInt::from(binomial(256, 6) * binomial(39, 5)));
        assert_eq!(b.exact.unwrap(), expected);
        // εn/d = 1/2 leaves n^1
        let q = base.with_eps(Eps::new(1, 4));
        let b = nw_lower_bound_unchecked(&q, Mode::Restricted, &cfg());
        assert!(!b.floor_guarded);
        assert!(b.dual_path_gap().unwrap() < 1e-6);
        assert_eq!(b.exact.unwrap(), expected * BigRational::from_integer(16.into()));
    }

    #[test]
    fn guarded_power() {
        // n = 16, exponent 1/3: 2^{4/3} floors to 2
        let (v, g) = exact_power(16, Ratio::new(1, 3));
        assert!(g);
        assert_eq!(v, BigRational::from_integer(2.into()));
        let (v, g) = exact_power(16, Ratio::new(-1, 2));
        assert!(!g);
        assert_eq!(v, BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn closed_form_matches_double_sum() {
        for (n, r, ell, m, s) in [(4u64, 1u64, 8u64, 2u64, 1u64), (8, 2, 30, 3, 2), (3, 0, 2, 1, 1), (5, 5, 7, 2, 1)] {
            let big_n = n * n;
            assert_eq!(
                circuit_count_closed_form(n, big_n, r, ell, m, s, 3),
                circuit_measure_count(n, big_n, r, ell, m, s, 3)
            );
            let exact = log2_biguint(&circuit_measure_count(n, big_n, r, ell, m, s, 3));
            assert!((exact - log2_circuit_count(n, big_n, r, ell, m, s, 3)).abs() < 1e-6);
        }
    }

    #[test]
    fn ratio_log_shifts_with_t() {
        let p = ParamSet::new(8, 4, 1, 40, 5, 1);
        let a = topfanin_ratio_unchecked(&p, Mode::Plain, &cfg());
        let b = topfanin_ratio_unchecked(&p.clone().with_t(8), Mode::Plain, &cfg());
        assert!((a.log2 - 3.0 - b.log2).abs() < 1e-9);
        assert!(a.dual_path_gap().unwrap() < 1e-6);
    }

    #[test]
    fn degenerate_point_violates_several() {
        let p = ParamSet { t: 0, ..ParamSet::new(0, 0, 0, 0, 0, 0) };
        let failed = check_constraints(&p, Mode::Plain, &cfg()).iter().filter(|c| !c.holds).count();
        assert!(failed >= 3);
        assert!(topfanin_ratio(&p, Mode::Plain, &cfg()).is_err());
    }

    #[test]
    fn m_above_half_fails_first_bullet() {
        let p = ParamSet::new(16, 8, 2, 1000, 127, 1);
        let checks = check_constraints(&p, Mode::Plain, &cfg());
        assert!(!checks[1].holds && checks[1].margin < 0.0);
        let ok = ParamSet::new(16, 8, 2, 1000, 126, 1);
        assert!(check_constraints(&ok, Mode::Plain, &cfg())[1].holds);
    }

    #[test]
    fn ie_gate_matches_measure_module() {
        use crate::measure::ie_gate_holds;
        for m in 1..10 {
            for r in 0..3 {
                let p = ParamSet::new(6, 2, r, 20, m, 1);
                assert_eq!(ie_gate(&p, Mode::Plain, &cfg()).0, ie_gate_holds(6, 2, r, m), "m={m} r={r}");
            }
        }
    }
}
