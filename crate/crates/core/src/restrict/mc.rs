//! Monte Carlo estimates of survival and subspace-inclusion probabilities.
//!
//! Trial `t` of a run with seed `s` uses seed `s.wrapping_add(t)`, so a
//! result depends only on `(parameters, trials, seed)` and not on the
//! thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{monomial_survives, run_restriction, Eps};
use crate::error::{Error, Result};
use crate::gf2lin::{BitVector, EchelonBasis, Elem};
use crate::nw::NWParams;
use crate::poly::Monomial;

/// Which runs count towards a survival estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Always,
    /// Every listed row is compact.
    Compact(Vec<Elem>),
    /// No listed row is compact.
    NonCompact(Vec<Elem>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McResult {
    pub trials: u64,
    /// Trials satisfying the conditioning event.
    pub qualifying: u64,
    pub successes: u64,
    pub frequency: f64,
    /// 95% Wilson score interval.
    pub lo: f64,
    pub hi: f64,
}

impl McResult {
    fn from_counts(trials: u64, qualifying: u64, successes: u64) -> Result<Self> {
        if qualifying == 0 {
            return Err(Error::NoQualifyingTrials { trials });
        }
        let (lo, hi) = wilson_interval(successes, qualifying);
        Ok(McResult {
            trials,
            qualifying,
            successes,
            frequency: successes as f64 / qualifying as f64,
            lo,
            hi,
        })
    }

    /// `p + 3·sqrt(p(1−p)/qualifying)`: the acceptance threshold for a
    /// claimed upper bound `p`.
    pub fn three_sigma_threshold(&self, p: f64) -> f64 {
        p + 3.0 * (p * (1.0 - p) / self.qualifying as f64).sqrt()
    }
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = n as f64;
    let p = k as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Frequency with which `m` survives `R_ε`, among runs meeting `cond`.
pub fn survival_probability_mc(
    params: &NWParams,
    eps: Eps,
    m: &Monomial,
    cond: &Condition,
    trials: u64,
    seed: u64,
) -> Result<McResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    super::constraints_per_row(eps, params.k())?;
    let (q, s) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let o = run_restriction(params, eps, seed.wrapping_add(t)).expect("validated parameters");
            let qualifies = match cond {
                Condition::Always => true,
                Condition::Compact(rows) => rows.iter().all(|&i| o.is_compact(i)),
                Condition::NonCompact(rows) => rows.iter().all(|&i| !o.is_compact(i)),
            };
            let survives = qualifies && monomial_survives(&o, m);
            (qualifies as u64, survives as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    McResult::from_counts(trials, q, s)
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> BitVector {
    let mut v = BitVector::zeros(len);
    for i in 0..len {
        v.set(i, rng.gen());
    }
    v
}

/// Frequency with which the span `W` of the first `dim_w` unit vectors of
/// F_2^{dim_v} lies in a uniform random `dim_u`-dimensional subspace `U`.
///
/// `U` is sampled by drawing uniform vectors and keeping those independent
/// of the ones kept so far, which makes the spanned subspace uniform.
pub fn subspace_inclusion_mc(
    dim_v: usize,
    dim_u: usize,
    dim_w: usize,
    trials: u64,
    seed: u64,
) -> Result<McResult> {
    if !(dim_w <= dim_u && dim_u <= dim_v) {
        return Err(Error::InvalidParameter(format!(
            "need dimW <= dimU <= dimV, got {dim_w}, {dim_u}, {dim_v}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t));
            let mut u = EchelonBasis::new(dim_v);
            while u.dim() < dim_u {
                u.insert(&random_vector(&mut rng, dim_v));
            }
            (0..dim_w).all(|i| u.contains(&BitVector::unit(dim_v, i))) as u64
        })
        .sum();
    McResult::from_counts(trials, trials, hits)
}

/// Gaussian binomial `[a choose b]_2` as `f64`.
fn gaussian_binomial(a: usize, b: usize) -> f64 {
    (0..b)
        .map(|i| (2f64.powi((a - i) as i32) - 1.0) / (2f64.powi((i + 1) as i32) - 1.0))
        .product()
}

/// Exact `P(W ⊆ U) = [V−W choose U−W]_2 / [V choose U]_2`.
pub fn subspace_inclusion_exact(dim_v: usize, dim_u: usize, dim_w: usize) -> f64 {
    gaussian_binomial(dim_v - dim_w, dim_u - dim_w) / gaussian_binomial(dim_v, dim_u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarId;

    #[test]
    fn unit_monomial_always_survives() {
        let p = NWParams::new(2, 2).unwrap();
        let r = survival_probability_mc(&p, Eps::new(1, 2), &Monomial::one(), &Condition::Always, 100, 0).unwrap();
        assert_eq!(r.frequency, 1.0);
    }

    #[test]
    fn trivial_inclusions() {
        assert_eq!(subspace_inclusion_mc(4, 4, 2, 50, 1).unwrap().frequency, 1.0);
        assert_eq!(subspace_inclusion_mc(4, 2, 0, 50, 1).unwrap().frequency, 1.0);
        assert!(subspace_inclusion_mc(2, 3, 1, 5, 1).is_err());
    }

    #[test]
    fn exact_inclusion_probability() {
        // 4-dim space, random plane, fixed line: 7/35 = 1/5
        assert!((subspace_inclusion_exact(4, 2, 1) - 0.2).abs() < 1e-12);
        assert!(subspace_inclusion_exact(4, 2, 1) <= 0.25);
    }

    #[test]
    fn impossible_condition_is_reported() {
        let p = NWParams::new(2, 2).unwrap();
        let m = Monomial::var(VarId::new(0, 0));
        let err = survival_probability_mc(&p, Eps::new(0, 1), &m, &Condition::Compact(vec![0]), 10, 0);
        assert!(matches!(err, Err(Error::NoQualifyingTrials { trials: 10 })));
    }

    #[test]
    fn wilson_is_ordered() {
        let (lo, hi) = wilson_interval(30, 100);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson_interval(0, 10).0, 0.0);
    }

    #[test]
    fn thread_count_independent() {
        let p = NWParams::new(2, 2).unwrap();
        let m = Monomial::var(VarId::new(1, 2));
        let a = survival_probability_mc(&p, Eps::new(1, 2), &m, &Condition::Always, 200, 5).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| survival_probability_mc(&p, Eps::new(1, 2), &m, &Condition::Always, 200, 5).unwrap());
        assert_eq!(a, b);
    }
}
