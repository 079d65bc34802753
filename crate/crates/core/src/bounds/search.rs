//! Grid search over the constant recipe and the asymptotic sweeps.

use rayon::prelude::*;
use serde::Serialize;

use super::{is_feasible, topfanin_ratio_unchecked, BoundsConfig, Mode, ParamSet, Recipe};
use crate::error::{Error, Result};
use crate::restrict::Eps;

/// Ranges for the recipe constants: `r = round(αn/log2 n)`,
/// `s = max(1, round(β·log2 n))`, `m = ⌊N/φ⌋`, `ℓ = ⌈m/η⌉`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchGrid {
    pub etas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub phis: Vec<f64>,
}

impl Default for SearchGrid {
    fn default() -> Self {
        SearchGrid {
            etas: vec![1.0 / 16.0, 1.0 / 8.0, 3.0 / 16.0, 1.0 / 4.0, 5.0 / 16.0, 3.0 / 8.0, 7.0 / 16.0],
            alphas: vec![0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0],
            betas: vec![0.05, 0.1, 0.25, 0.5, 1.0, 2.0],
            phis: vec![1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 128.0, 256.0],
        }
    }
}

fn with_midpoints(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * xs.len());
    for w in xs.windows(2) {
        out.push(w[0]);
        out.push((w[0] + w[1]) / 2.0);
    }
    out.extend(xs.last());
    out
}

impl SearchGrid {
    /// A superset grid with midpoints inserted along every axis.
    pub fn refine(&self) -> Self {
        SearchGrid {
            etas: with_midpoints(&self.etas),
            alphas: with_midpoints(&self.alphas),
            betas: with_midpoints(&self.betas),
            phis: with_midpoints(&self.phis),
        }
    }

    pub fn len(&self) -> usize {
        self.etas.len() * self.alphas.len() * self.betas.len() * self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn points(&self) -> Vec<Recipe> {
        let mut out = Vec::with_capacity(self.len());
        for &eta in &self.etas {
            for &alpha in &self.alphas {
                for &beta in &self.betas {
                    for &phi in &self.phis {
                        out.push(Recipe { eta, alpha, beta, phi });
                    }
                }
            }
        }
        out
    }
}

/// Instantiate the recipe at `(n, d)`.
pub fn recipe_params(n: u64, d: u64, eps: Eps, rec: Recipe) -> ParamSet {
    let ln = (n as f64).log2();
    let r = (rec.alpha * n as f64 / ln).round() as u64;
    let s = ((rec.beta * ln).round() as u64).max(1);
    let m = ((n * n) as f64 / rec.phi).floor() as u64;
    let ell = (m as f64 / rec.eta).ceil() as u64;
    ParamSet { n, d, r, ell, m, s, t: 1, eps, recipe: Some(rec) }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best: ParamSet,
    pub log2_ratio: f64,
    pub evaluated: usize,
    pub feasible: usize,
}

/// Maximize `log2(topfanin_ratio)` over the feasible points of `grid`.
/// Ties go to the earliest grid point, so the result does not depend on
/// scheduling.
pub fn parameter_search(
    n: u64,
    d: u64,
    mode: Mode,
    eps: Eps,
    grid: &SearchGrid,
    cfg: &BoundsConfig,
) -> Result<SearchResult> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("n must be a power of two, got {n}")));
    }
    let points = grid.points();
    let log_cfg = BoundsConfig { exact_max_n: 0, ..cfg.clone() };
    let scored: Vec<Option<(f64, ParamSet)>> = points
        .par_iter()
        .map(|&rec| {
            let p = recipe_params(n, d, eps, rec);
            is_feasible(&p, mode, &log_cfg).then(|| (topfanin_ratio_unchecked(&p, mode, &log_cfg).log2, p))
        })
        .collect();
    let feasible = scored.iter().flatten().count();
    let mut best: Option<(f64, ParamSet)> = None;
    for (v, p) in scored.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, p));
        }
    }
    let (log2_ratio, best) = best.ok_or(Error::EmptyFeasibleRegion)?;
    Ok(SearchResult { best, log2_ratio, evaluated: points.len(), feasible })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub d: u64,
    pub feasible: usize,
    /// `None` when the feasible region is empty.
    pub log2_ratio: Option<f64>,
    pub per_n: Option<f64>,
}

/// Best `log2(topfanin_ratio)` at each `n`, with `d = ⌊δn⌋`.
pub fn asymptotic_sweep(
    ns: &[u64],
    delta: f64,
    mode: Mode,
    eps: Eps,
    grid: &SearchGrid,
    cfg: &BoundsConfig,
) -> Vec<(SweepRow, Option<ParamSet>)> {
    ns.iter()
        .map(|&n| {
            let d = (delta * n as f64).floor() as u64;
            match parameter_search(n, d, mode, eps, grid, cfg) {
                Ok(res) => (
                    SweepRow {
                        n,
                        d,
                        feasible: res.feasible,
                        log2_ratio: Some(res.log2_ratio),
                        per_n: Some(res.log2_ratio / n as f64),
                    },
                    Some(res.best),
                ),
                Err(_) => (SweepRow { n, d, feasible: 0, log2_ratio: None, per_n: None }, None),
            }
        })
        .collect()
}

/// The composed bound `min(ρ·log2 n·log2 log2 n, best restricted log2 ratio)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComposedBound {
    pub n: u64,
    pub rho: f64,
    /// `log2 n · log2 log2 n`.
    pub x: f64,
    /// `ρ·x`, the log2 of the size threshold `n^{ρ log2 log2 n}`.
    pub size_branch: f64,
    /// Best restricted log2 ratio, `-inf` when no point is feasible.
    pub restricted_branch: f64,
    pub log2: f64,
}

pub fn composed_bound(
    n: u64,
    d: u64,
    eps: Eps,
    rho: f64,
    grid: &SearchGrid,
    cfg: &BoundsConfig,
) -> ComposedBound {
    let ln = (n as f64).log2();
    let x = ln * ln.log2();
    let size_branch = rho * x;
    let restricted_branch = parameter_search(n, d, Mode::Restricted, eps, grid, cfg)
        .map(|r| r.log2_ratio)
        .unwrap_or(f64::NEG_INFINITY);
    ComposedBound { n, rho, x, size_branch, restricted_branch, log2: size_branch.min(restricted_branch) }
}

/// Least-squares slope of `y = c·x`.
pub fn fit_through_origin(xs: &[f64], ys: &[f64]) -> f64 {
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    sxy / sxx
}
