//! The window estimate `ln((a+f)!/(a−g)!) = (f+g)·ln a ± O((f+g)²/a)`.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StirlingCheck {
    pub a: u64,
    pub f: u64,
    pub g: u64,
    /// `ln((a+f)!/(a−g)!)` via log-gamma.
    pub lhs: f64,
    /// `(f+g)·ln a`.
    pub rhs: f64,
    /// `|lhs − rhs|`, summed as `Σ ln(1 + t/a)` to avoid cancellation.
    pub residual: f64,
    /// `(f+g)²/a`.
    pub scale: f64,
    /// `residual / scale`, zero when `f = g = 0`.
    pub ratio: f64,
    /// Whether `f + g <= √a`, the regime the estimate is meant for.
    pub in_regime: bool,
}

/// Evaluate the window estimate at one point; requires `g <= a`.
pub fn stirling_window_check(a: u64, f: u64, g: u64) -> StirlingCheck {
    assert!(g <= a, "need g <= a");
    let af = a as f64;
    let w = (f + g) as f64;
    let lhs = ln_gamma(af + f as f64 + 1.0) - ln_gamma(af - g as f64 + 1.0);
    let rhs = w * af.ln();
    // (a+f)!/(a−g)! = Π_{t=1−g}^{f} (a + t)
    let residual = (1 - g as i64..=f as i64).map(|t| (t as f64 / af).ln_1p()).sum::<f64>().abs();
    let scale = w * w / af;
    let ratio = if f + g == 0 { 0.0 } else { residual / scale };
    StirlingCheck { a, f, g, lhs, rhs, residual, scale, ratio, in_regime: (f + g) * (f + g) <= a }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StirlingSweep {
    pub c: f64,
    pub points: usize,
    pub max_ratio: f64,
    pub worst: StirlingCheck,
    pub holds: bool,
}

/// Scan `a ∈ {10³, …, 10⁷}` with `f + g <= √a` and report the largest
/// `residual / ((f+g)²/a)` against the constant `c`.
pub fn stirling_sweep(c: f64) -> StirlingSweep {
    let mut checks = Vec::new();
    for e in 3..=7u32 {
        let a = 10u64.pow(e);
        let root = (a as f64).sqrt().floor() as u64;
        let mut sizes: Vec<u64> = vec![0, 1, 2, 3, 5, 10, 30, 100, 300, 1000, root / 2, root];
        sizes.retain(|&x| x <= root);
        sizes.sort_unstable();
        sizes.dedup();
        for &f in &sizes {
            for &g in &sizes {
                if f + g <= root {
                    checks.push(stirling_window_check(a, f, g));
                }
            }
        }
    }
    let worst = checks
        .iter()
        .cloned()
        .max_by(|x, y| x.ratio.total_cmp(&y.ratio))
        .expect("nonempty grid");
    StirlingSweep { c, points: checks.len(), max_ratio: worst.ratio, holds: worst.ratio <= c, worst }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_window() {
        let s = stirling_window_check(1000, 0, 0);
        assert_eq!(s.residual, 0.0);
        assert_eq!(s.ratio, 0.0);
    }

    #[test]
    fn stable_residual_matches_direct_form() {
        let s = stirling_window_check(1_000_000, 1000, 1000);
        assert!((s.residual - (s.lhs - s.rhs).abs()).abs() < 1e-6);
        assert!(s.residual <= 8.0 * 4.0);
        assert!(!s.in_regime);
    }

    #[test]
    fn small_factorial_ratio() {
        // 12!/9! = 1320
        let s = stirling_window_check(10, 2, 1);
        assert!((s.lhs - 1320f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn sweep_constant() {
        let s = stirling_sweep(8.0);
        assert!(s.holds && s.max_ratio < 1.0, "{s:?}");
    }
}
