//! Desk-scale verification suite.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    nw_lower_bound_unchecked, stirling_sweep, topfanin_ratio_unchecked, BoundsConfig, Mode, ParamSet,
};
use crate::circuit::{circuit_measure_count, random_circuit};
use crate::combinatorics::Combinations;
use crate::gf2lin::{coefficient_vector, eval_matrix, mult_matrix, phi, Gf2kField};
use crate::measure::{
    distinct_derivatives, ie_gate_holds, ie_lower_bound, leading_monomial_count, nw_union_leading_count,
    shift_intersection_bound, shift_intersection_count, shift_monomials, shifted_partials_dim, MeasureQuery,
};
use crate::nw::{derivative_index_set, generate_nw, max_pairwise_agreement, NWParams};
use crate::poly::{int, random_sparse, Monomial, Polynomial, VarId, VarSpace};
use crate::restrict::{constraints_per_row, rich_block_search, run_restriction, Eps};

const BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> crate::Result<(bool, String)>) -> CheckResult {
    match f() {
        Ok((pass, detail)) => CheckResult { name, pass, detail },
        Err(e) => CheckResult { name, pass: false, detail: format!("error: {e}") },
    }
}

/// Run every check; the outcome depends only on `seed`.
pub fn run_verify(seed: u64) -> Vec<CheckResult> {
    vec![
        check("field_mult_matrix", field_mult_matrix),
        check("eval_matrix", eval_matrix_check),
        check("nw_structure", nw_structure),
        check("measure_two_routes", || measure_two_routes(seed)),
        check("measure_subadditive_scaling", || subadditive(seed)),
        check("shift_intersection", shift_intersection),
        check("distinct_derivatives", || distinct(seed)),
        check("ie_gate_union", ie_union),
        check("circuit_soundness", || circuit_soundness(seed)),
        check("restriction_invariants", || restriction(seed)),
        check("rich_block", || rich_block(seed)),
        check("stirling_window", || {
            let s = stirling_sweep(8.0);
            Ok((s.holds, format!("max ratio {:.4} over {} points, C = 8", s.max_ratio, s.points)))
        }),
        check("bounds_dual_path", dual_path),
    ]
}

fn field_mult_matrix() -> crate::Result<(bool, String)> {
    let f = Gf2kField::standard(4)?;
    for a in 0..16 {
        for b in 0..16 {
            let lhs = mult_matrix(f.mul(a, b)?, &f)?;
            let rhs = mult_matrix(a, &f)?.mul(&mult_matrix(b, &f)?)?;
            if lhs != rhs {
                return Ok((false, format!("M({a}·{b}) != M({a})M({b})")));
            }
        }
    }
    Ok((true, "GF(16), all pairs".into()))
}

fn eval_matrix_check() -> crate::Result<(bool, String)> {
    let f = Gf2kField::standard(2)?;
    let mut count = 0;
    for c0 in 0..4 {
        for c1 in 0..4 {
            for alpha in 0..4 {
                let coeffs = [c0, c1];
                let got = eval_matrix(alpha, 2, &f)?.vec_mul(&coefficient_vector(&coeffs, &f))?;
                if got != phi(f.eval_poly(&coeffs, alpha), &f) {
                    return Ok((false, format!("f = {coeffs:?}, alpha = {alpha}")));
                }
                count += 1;
            }
        }
    }
    Ok((true, format!("{count} evaluations over GF(4)")))
}

fn nw_structure() -> crate::Result<(bool, String)> {
    for (k, d) in [(1, 1), (2, 2), (3, 2)] {
        let p = NWParams::new(k, d)?;
        let poly = generate_nw(&p, BUDGET)?;
        let monos: Vec<Monomial> = poly.monomials().cloned().collect();
        let n = p.n() as usize;
        let ok = monos.len() == n.pow(d)
            && monos.iter().all(|m| m.is_multilinear() && m.degree() == p.n())
            && max_pairwise_agreement(&monos) < d as usize;
        if !ok {
            return Ok((false, format!("n={n}, d={d}")));
        }
    }
    Ok((true, "(n,d) in {(2,1),(4,2),(8,2)}".into()))
}

fn measure_two_routes(seed: u64) -> crate::Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let p = random_sparse(&mut rng, 4, 3, 4);
        let space = VarSpace::flat(4);
        for (r, ell, m) in [(1, 1, None), (1, 2, Some(1)), (2, 2, Some(2)), (0, 1, None)] {
            let q = match m {
                Some(m) => MeasureQuery::bounded(r, ell, m),
                None => MeasureQuery::unrestricted(r, ell),
            };
            let dim = shifted_partials_dim(&p, &q, &space, BUDGET)?;
            let thetas = crate::measure::derivative_monomials(&p, &q);
            let derivs = distinct_derivatives(&p, &thetas);
            let prods: Vec<Polynomial> = shift_monomials(&space, &q)
                .iter()
                .flat_map(|g| derivs.iter().map(move |d| d.shift(g)))
                .collect();
            if leading_monomial_count(&prods) as u64 != dim {
                return Ok((false, format!("P = {p}, r={r}, ell={ell}")));
            }
        }
    }
    Ok((true, "20 random polynomials, 4 queries each".into()))
}

fn subadditive(seed: u64) -> crate::Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ad);
    let space = VarSpace::flat(4);
    let q = MeasureQuery::unrestricted(1, 1);
    for _ in 0..20 {
        let a = random_sparse(&mut rng, 4, 3, 3);
        let b = random_sparse(&mut rng, 4, 3, 3);
        let da = shifted_partials_dim(&a, &q, &space, BUDGET)?;
        let db = shifted_partials_dim(&b, &q, &space, BUDGET)?;
        let sum = a.add(&b);
        let ds = if sum.is_zero() { 0 } else { shifted_partials_dim(&sum, &q, &space, BUDGET)? };
        let c = int(rng.gen_range(2..7));
        let dc = shifted_partials_dim(&a.scale(&c), &q, &space, BUDGET)?;
        if ds > da + db || dc != da {
            return Ok((false, format!("A = {a}, B = {b}")));
        }
    }
    Ok((true, "20 random pairs".into()))
}

fn shift_intersection() -> crate::Result<(bool, String)> {
    let n_vars = 4u32;
    let space = VarSpace::flat(n_vars);
    let mut checked = 0;
    for deg in 1..=n_vars as usize {
        let monos: Vec<Monomial> = Combinations::new(n_vars as usize, deg)
            .map(|c| Monomial::product(c.into_iter().map(|i| VarId::new(0, i as u32))))
            .collect();
        for a in &monos {
            for b in &monos {
                for ell in 1..=3 {
                    for m in 1..=ell.min(3) {
                        let got = shift_intersection_count(a, b, &space, ell, m, BUDGET)?;
                        if BigUint::from(got) > shift_intersection_bound(a, b, n_vars as u64, ell, m) {
                            return Ok((false, format!("{a}, {b}, ell={ell}, m={m}")));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok((true, format!("{checked} cases over N = 4")))
}

fn distinct(seed: u64) -> crate::Result<(bool, String)> {
    let p = NWParams::new(3, 3)?;
    let poly = generate_nw(&p, BUDGET)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd15);
    for _ in 0..3 {
        let row = rng.gen_range(0..p.n());
        let index = derivative_index_set(&[row], &p);
        let got = distinct_derivatives(&poly, &index).len();
        if got != p.n() as usize {
            return Ok((false, format!("row {row}: {got} derivatives")));
        }
    }
    Ok((true, "n=8, d=3, r=1, 3 row sets".into()))
}

fn ie_union() -> crate::Result<(bool, String)> {
    let p = NWParams::new(2, 2)?;
    let mut gated = 0;
    for m in 1..=2u32 {
        for ell in m..=3 {
            if !ie_gate_holds(4, 2, 1, m as u64) {
                continue;
            }
            gated += 1;
            let got = nw_union_leading_count(&p, &[0], ell, m, BUDGET)?;
            if BigInt::from(got) < ie_lower_bound(4, 2, 1, ell as u64, m as u64) {
                return Ok((false, format!("ell={ell}, m={m}")));
            }
        }
    }
    Ok((true, format!("n=4, d=2, r=1, {gated} gated (ell, m)")))
}

fn circuit_soundness(seed: u64) -> crate::Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc1c);
    let (n, big_n, r, s, m, ell) = (3u32, 6u32, 1u32, 1usize, 1u32, 4u32);
    for _ in 0..10 {
        let t = rng.gen_range(1..=3);
        let c = random_circuit(&mut rng, n, big_n, t, s);
        let poly = c.expand(BUDGET)?;
        if poly.is_zero() {
            continue;
        }
        let q = MeasureQuery::bounded(r, ell, m);
        let dim = shifted_partials_dim(&poly, &q, &VarSpace::flat(big_n), BUDGET)?;
        let bound = circuit_measure_count(n as u64, big_n as u64, r as u64, ell as u64, m as u64, s as u64, t as u64);
        if BigUint::from(dim) > bound {
            return Ok((false, format!("dim {dim} > bound {bound}")));
        }
    }
    Ok((true, "10 random circuits, n=3, N=6".into()))
}

fn restriction(seed: u64) -> crate::Result<(bool, String)> {
    for (k, d, eps) in [(2u32, 2u32, Eps::new(1, 2)), (4, 8, Eps::new(1, 4))] {
        let p = NWParams::new(k, d)?;
        let per = constraints_per_row(eps, k)? as usize;
        for i in 0..25 {
            let o = run_restriction(&p, eps, seed.wrapping_add(i))?;
            if !o.state.is_feasible() || o.state.rank() > per * p.n() as usize {
                return Ok((false, format!("k={k}, seed={}", seed.wrapping_add(i))));
            }
            let killed: HashSet<VarId> = o.killed_vars();
            if killed.len() != o.killed.iter().filter(|&&b| b).count() {
                return Ok((false, "killed set mismatch".into()));
            }
        }
    }
    Ok((true, "25 runs each at (4,2,1/2) and (16,8,1/4)".into()))
}

fn rich_block(seed: u64) -> crate::Result<(bool, String)> {
    let p = NWParams::new(4, 8)?;
    for i in 0..20 {
        let o = run_restriction(&p, Eps::new(1, 4), seed.wrapping_add(i))?;
        let rb = rich_block_search(&o, 2)?;
        match rb.block {
            Some(b) if rb.m_i(b) >= 16 => {}
            _ => return Ok((false, format!("seed {}: dims {:?}", seed.wrapping_add(i), rb.dims))),
        }
    }
    Ok((true, "20 seeds, n=16, d=8, eps=1/4, r=2".into()))
}

fn dual_path() -> crate::Result<(bool, String)> {
    let cfg = BoundsConfig::default();
    let points = [
        (ParamSet::new(4, 2, 1, 4, 2, 1), Mode::Plain),
        (ParamSet::new(16, 8, 2, 40, 6, 1).with_eps(Eps::new(1, 4)), Mode::Restricted),
        (ParamSet::new(32, 16, 2, 600, 100, 2), Mode::Plain),
    ];
    let mut worst = 0f64;
    for (p, mode) in &points {
        for b in [nw_lower_bound_unchecked(p, *mode, &cfg), topfanin_ratio_unchecked(p, *mode, &cfg)] {
            match b.dual_path_gap() {
                Some(g) => worst = worst.max(g),
                None => return Ok((false, "exact path did not run".into())),
            }
        }
    }
    Ok((worst <= 1e-6, format!("max gap {worst:.2e}")))
}
