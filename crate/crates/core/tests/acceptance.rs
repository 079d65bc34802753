//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Each check compares library output against a reference computed here
//! (see `oracle`), never against the library's own intermediate results.
//! The binary exits nonzero if any criterion fails.

mod oracle;

use std::collections::{BTreeSet, HashSet};
use std::panic;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shiftpd::bounds::{
    asymptotic_sweep, composed_bound, fit_through_origin, stirling_sweep, BoundsConfig, Mode, SearchGrid,
};
use shiftpd::circuit::{circuit_measure_upper_bound, random_circuit};
use shiftpd::gf2lin::{coefficients_from_vector, BitVector};
use shiftpd::measure::{distinct_derivatives, shift_intersection_count, shifted_partials_dim, MeasureQuery};
use shiftpd::nw::{derivative_index_set, generate_nw, NWParams};
use shiftpd::poly::{Monomial, Polynomial, VarId, VarSpace};
use shiftpd::restrict::{
    constraints_per_row, rich_block_search, run_restriction, subspace_inclusion_mc, survival_probability_mc,
    Condition, Eps, RestrictionState,
};

use oracle::{brute_dim, choose, exps_of_degree, from_exps, random_poly, support};

const BUDGET: u64 = 10_000_000;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn query(r: u32, ell: u32, m: Option<u32>) -> MeasureQuery {
    match m {
        Some(m) => MeasureQuery::bounded(r, ell, m),
        None => MeasureQuery::unrestricted(r, ell),
    }
}

fn dim(p: &Polynomial, q: &MeasureQuery, n_vars: u32) -> u64 {
    if p.is_zero() {
        return 0;
    }
    shifted_partials_dim(p, q, &VarSpace::flat(n_vars), BUDGET).expect("query within budget")
}

// 1. NW structure
fn nw_structure() -> Outcome {
    for (k, d) in [(1u32, 1u32), (2, 2), (3, 2)] {
        let p = NWParams::new(k, d).map_err(|e| e.to_string())?;
        let n = p.n();
        let poly = generate_nw(&p, BUDGET).map_err(|e| e.to_string())?;
        let got: BTreeSet<Monomial> = poly.monomials().cloned().collect();

        // reference: one monomial per coefficient tuple, built by direct evaluation
        let field = p.field();
        let mut expected = BTreeSet::new();
        for code in 0..(n as u64).pow(d) {
            let coeffs: Vec<u32> = (0..d).map(|e| ((code / (n as u64).pow(e)) % n as u64) as u32).collect();
            expected.insert(Monomial::product((0..n).map(|i| VarId::new(i, field.eval_poly(&coeffs, i)))));
        }
        ensure(got == expected, || format!("n={n}, d={d}: monomial family differs"))?;
        ensure(got.len() == (n as usize).pow(d), || format!("n={n}: {} monomials", got.len()))?;
        ensure(poly.terms().all(|(_, c)| *c == num_rational::BigRational::from_integer(1.into())), || {
            "coefficient other than 1".into()
        })?;
        let sets: Vec<HashSet<VarId>> = got.iter().map(|m| m.vars().collect()).collect();
        for m in &got {
            ensure(m.is_multilinear() && m.degree() == n, || format!("{m} is not multilinear of degree {n}"))?;
        }
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let shared = sets[i].intersection(&sets[j]).count();
                ensure(shared < d as usize, || format!("n={n}, d={d}: a pair shares {shared} variables"))?;
            }
        }
    }
    Ok("(n,d) in {(2,1),(4,2),(8,2)}".into())
}

// 2. measure against brute-force rank
fn measure_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut queries = 0;
    for i in 0..100 {
        let n_vars = rng.gen_range(1..=6);
        let p = random_poly(&mut rng, n_vars, 4, 4);
        for r in 0..=2 {
            for ell in 0..=3 {
                let ms = std::iter::once(None).chain((1..=ell.min(3)).map(Some));
                for m in ms {
                    let got = dim(&p, &query(r, ell, m), n_vars);
                    let want = brute_dim(&p, n_vars, r, ell, m) as u64;
                    ensure(got == want, || format!("poly {i} = {p}, r={r}, ell={ell}, m={m:?}: {got} vs {want}"))?;
                    queries += 1;
                }
            }
        }
    }
    Ok(format!("100 polynomials, {queries} queries"))
}

// 3. subadditivity and scaling
fn subadditivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    for i in 0..200 {
        let n_vars = rng.gen_range(2..=5);
        let a = random_poly(&mut rng, n_vars, 3, 4);
        let b = random_poly(&mut rng, n_vars, 3, 4);
        let r = rng.gen_range(0..=2);
        let ell = rng.gen_range(0..=2);
        let m = if ell > 0 && rng.gen() { Some(rng.gen_range(1..=ell)) } else { None };
        let q = query(r, ell, m);
        let (da, db, ds) = (dim(&a, &q, n_vars), dim(&b, &q, n_vars), dim(&a.add(&b), &q, n_vars));
        ensure(ds <= da + db, || format!("instance {i}: {ds} > {da} + {db}"))?;
        let mut c = rng.gen_range(-9i64..=9);
        if c == 0 {
            c = 5;
        }
        let dc = dim(&a.scale(&num_rational::BigRational::from_integer(c.into())), &q, n_vars);
        ensure(dc == da, || format!("instance {i}: scaling by {c} changed {da} to {dc}"))?;
    }
    Ok("200 random instances".into())
}

// 4. shift-intersection bound, exhaustive
fn shift_intersection() -> Outcome {
    let mut cases = 0u64;
    let mut tight = 0u64;
    for n_vars in 1..=6u32 {
        let space = VarSpace::flat(n_vars);
        let subsets: Vec<Vec<u32>> = (0u32..1 << n_vars)
            .map(|mask| (0..n_vars).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        for a in &subsets {
            for b in subsets.iter().filter(|b| b.len() == a.len()) {
                let ea: Vec<u32> = (0..n_vars).map(|i| a.contains(&i) as u32).collect();
                let eb: Vec<u32> = (0..n_vars).map(|i| b.contains(&i) as u32).collect();
                let delta = a.iter().filter(|i| !b.contains(i)).count() as i64;
                let (ma, mb) = (from_exps(&ea), from_exps(&eb));
                for ell in 1..=4u32 {
                    let shifts = exps_of_degree(n_vars as usize, ell);
                    for m in 1..=ell.min(3) {
                        let brute = shifts
                            .iter()
                            .filter(|g| support(g) == m as usize)
                            .filter(|g| {
                                let mu: Vec<i64> = g.iter().zip(&ea).map(|(x, y)| (x + y) as i64).collect();
                                let rest: Vec<i64> = mu.iter().zip(&eb).map(|(x, &y)| x - y as i64).collect();
                                rest.iter().all(|&x| x >= 0) && rest.iter().filter(|&&x| x > 0).count() == m as usize
                            })
                            .count() as u128;
                        let got = shift_intersection_count(&ma, &mb, &space, ell, m, BUDGET)
                            .map_err(|e| e.to_string())? as u128;
                        let bound = choose(n_vars as i64 - delta, m as i64 - delta) * choose(ell as i64 - 1, m as i64 - 1);
                        ensure(got == brute, || format!("N={n_vars}, {ma} vs {mb}, ell={ell}, m={m}: {got} vs {brute}"))?;
                        ensure(got <= bound, || format!("N={n_vars}, {ma}, {mb}, ell={ell}, m={m}: {got} > {bound}"))?;
                        tight += (got == bound) as u64;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} cases, 0 violations, {tight} tight"))
}

// 5. distinct derivatives over the block index set
fn distinct_derivative_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut cases = Vec::new();
    for k in [2u32, 3] {
        let n = 1u32 << k;
        for d in 1..=n {
            for r in 0..=n {
                if r + 1 < d && n - r.min(n) > d {
                    cases.push((k, d, r));
                }
            }
        }
    }
    for &(k, d, r) in &cases {
        let p = NWParams::new(k, d).map_err(|e| e.to_string())?;
        let n = p.n();
        let poly = generate_nw(&p, BUDGET).map_err(|e| e.to_string())?;
        let terms: Vec<BTreeSet<VarId>> = poly.monomials().map(|m| m.vars().collect()).collect();
        for _ in 0..3 {
            let mut rows: Vec<u32> = (0..n).collect();
            for i in 0..r as usize {
                let j = rng.gen_range(i..rows.len());
                rows.swap(i, j);
            }
            rows.truncate(r as usize);
            rows.sort_unstable();

            let index = derivative_index_set(&rows, &p);
            let got = distinct_derivatives(&poly, &index).len();

            // reference: choose one column per row, divide each term it divides
            let mut seen: BTreeSet<BTreeSet<BTreeSet<VarId>>> = BTreeSet::new();
            for code in 0..(n as u64).pow(r) {
                let alpha: BTreeSet<VarId> = rows
                    .iter()
                    .enumerate()
                    .map(|(t, &i)| VarId::new(i, ((code / (n as u64).pow(t as u32)) % n as u64) as u32))
                    .collect();
                let quotient: BTreeSet<BTreeSet<VarId>> = terms
                    .iter()
                    .filter(|t| alpha.is_subset(t))
                    .map(|t| t.difference(&alpha).copied().collect())
                    .collect();
                if !quotient.is_empty() {
                    seen.insert(quotient);
                }
            }
            let want = (n as usize).pow(r);
            ensure(index.len() == want, || format!("n={n}, r={r}: index set has {} members", index.len()))?;
            ensure(got == want && seen.len() == want, || {
                format!("n={n}, d={d}, r={r}, S={rows:?}: library {got}, reference {}, expected {want}", seen.len())
            })?;
        }
    }
    let shown: Vec<String> = cases.iter().map(|(k, d, r)| format!("({},{d},{r})", 1 << k)).collect();
    Ok(format!("(n,d,r) in {{{}}}, 3 row sets each", shown.join(",")))
}

// 6. circuit bound soundness
fn circuit_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut done = 0;
    let mut worst = 0f64;
    while done < 100 {
        let n = rng.gen_range(2..=4u32);
        let big_n = rng.gen_range(4..=8u32);
        let t = rng.gen_range(1..=3usize);
        let r = rng.gen_range(1..=2u32).min(n);
        let s = rng.gen_range(1..=2u32);
        if r * s + 1 > big_n / 2 {
            continue;
        }
        let m = rng.gen_range(1..=big_n / 2 - r * s);
        let ell = 2 * (m + r * s);
        let c = random_circuit(&mut rng, n, big_n, t, s as usize);
        let poly = c.expand(BUDGET).map_err(|e| e.to_string())?;
        let got = dim(&poly, &MeasureQuery::bounded(r, ell, m), big_n);
        let bound = circuit_measure_upper_bound(n as u64, big_n as u64, r as u64, ell as u64, m as u64, s as u64, t as u64)
            .map_err(|e| e.to_string())?;

        // reference count, summed here
        let mut sum = 0u128;
        for i in 0..=(n - r) as i64 {
            for j in 0..=(r * s) as i64 {
                sum += choose(big_n as i64, m as i64 + j) * choose(ell as i64 + i - 1, m as i64 + j - 1);
            }
        }
        let want = t as u128 * choose((n + r) as i64, r as i64) * sum;
        ensure(bound == BigUint::from(want), || format!("count {bound} vs reference {want}"))?;
        ensure(BigUint::from(got) <= bound, || {
            format!("n={n}, N={big_n}, T={t}, r={r}, s={s}, m={m}: dim {got} > {bound}")
        })?;
        worst = worst.max(got as f64 / want as f64);
        done += 1;
    }
    Ok(format!("100 circuits, max dim/bound {worst:.4}"))
}

// 7. restriction invariants
fn restriction_invariants() -> Outcome {
    let mut exhaustive = 0;
    for (k, d, eps) in [(2u32, 2u32, Eps::new(1, 2)), (4, 8, Eps::new(1, 4))] {
        let p = NWParams::new(k, d).map_err(|e| e.to_string())?;
        let n = p.n() as usize;
        let dk = (d * k) as usize;
        let cap = constraints_per_row(eps, k).map_err(|e| e.to_string())? as usize * n;
        for seed in 0..1000u64 {
            let o = run_restriction(&p, eps, seed).map_err(|e| e.to_string())?;
            let mut replay = RestrictionState::new(p, eps, seed).map_err(|e| e.to_string())?;
            for step in o.state.steps() {
                replay.push(step.row, step.column.clone(), step.bit).map_err(|e| e.to_string())?;
                ensure(replay.is_feasible(), || format!("n={n}, seed {seed}: infeasible after a step"))?;
            }
            let rank = o.state.rank();
            ensure(rank <= cap && dk - rank == o.log2_an_size(), || {
                format!("n={n}, seed {seed}: rank {rank}, cap {cap}, log2|A_n| {}", o.log2_an_size())
            })?;
            if dk <= 16 {
                let sols: Vec<Vec<u32>> = (0u64..1 << dk)
                    .map(|x| BitVector::from_u64(x, dk))
                    .filter(|x| o.state.steps().iter().all(|s| s.column.dot(x) == s.bit))
                    .map(|x| coefficients_from_vector(&x, d as usize, p.field()))
                    .collect();
                ensure(sols.len() == 1 << o.log2_an_size(), || format!("seed {seed}: |A_n| = {}", sols.len()))?;
                for row in &o.rows {
                    let want: BTreeSet<u32> = sols.iter().map(|f| p.field().eval_poly(f, row.row)).collect();
                    let got: BTreeSet<u32> = row.values.elements().into_iter().collect();
                    ensure(got == want, || format!("seed {seed}, row {}: {got:?} vs {want:?}", row.row))?;
                    for j in 0..n as u32 {
                        ensure(o.survives(VarId::new(row.row, j)) == want.contains(&j), || {
                            format!("seed {seed}: kill flag of ({}, {j})", row.row)
                        })?;
                    }
                }
                exhaustive += 1;
            }
        }
    }
    Ok(format!("2000 runs, {exhaustive} checked against exhaustive A_n"))
}

// 8. rich block
fn rich_block() -> Outcome {
    let p = NWParams::new(4, 8).map_err(|e| e.to_string())?;
    let eps = Eps::new(1, 4);
    let mut min_dim = u32::MAX;
    for seed in 0..500u64 {
        let o = run_restriction(&p, eps, seed).map_err(|e| e.to_string())?;
        let rb = rich_block_search(&o, 2).map_err(|e| e.to_string())?;
        let best = rb.dims.iter().copied().max().unwrap_or(0);
        min_dim = min_dim.min(best);
        ensure(rb.block.is_some_and(|b| rb.m_i(b) >= 16), || format!("seed {seed}: dims {:?}", rb.dims))?;
        if seed < 4 {
            // reference image dimension by enumerating A_n
            for (b, &dim) in rb.dims.iter().enumerate() {
                let images: HashSet<(u32, u32)> = o
                    .an
                    .enumerate()
                    .iter()
                    .map(|x| {
                        let f = coefficients_from_vector(x, 8, p.field());
                        let pt = 2 * b as u32;
                        (p.field().eval_poly(&f, pt), p.field().eval_poly(&f, pt + 1))
                    })
                    .collect();
                ensure(images.len() == 1 << dim, || format!("seed {seed}, block {}: {} images", b + 1, images.len()))?;
            }
        }
    }
    Ok(format!("500 seeds, smallest best block m_i = 2^{min_dim}"))
}

// 9. survival probabilities
fn survival() -> Outcome {
    let trials = 10_000;
    let eps = Eps::new(1, 4);
    let n = 16f64;
    let x = Monomial::var(VarId::new(0, 1));
    let xy = Monomial::product([VarId::new(0, 1), VarId::new(1, 1)]);
    let p2 = NWParams::new(4, 2).map_err(|e| e.to_string())?;
    let p8 = NWParams::new(4, 8).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    let cases = [
        ("compact", p2, &x, Condition::Compact(vec![0]), 1.0 / n),
        ("non_compact", p8, &x, Condition::NonCompact(vec![0]), n.powf(-0.25)),
        ("compact_pair", p2, &xy, Condition::Compact(vec![0, 1]), n.powi(-2)),
    ];
    for (name, p, mono, cond, bound) in cases {
        let r = survival_probability_mc(&p, eps, mono, &cond, trials, SEED).map_err(|e| e.to_string())?;
        let limit = r.three_sigma_threshold(bound);
        ensure(r.frequency <= limit, || format!("{name}: {} > {limit}", r.frequency))?;
        lines.push(format!("{name} {:.4}<={limit:.4}", r.frequency));
    }
    for (v, u, w) in [(4usize, 2usize, 1usize), (5, 3, 2), (6, 3, 1), (6, 5, 3), (8, 4, 2)] {
        let r = subspace_inclusion_mc(v, u, w, trials, SEED).map_err(|e| e.to_string())?;
        let bound = 2f64.powi(-(((v - u) * w) as i32));
        let limit = r.three_sigma_threshold(bound);
        ensure(r.frequency <= limit, || format!("subspace ({v},{u},{w}): {} > {limit}", r.frequency))?;
        lines.push(format!("({v},{u},{w}) {:.4}<={limit:.4}", r.frequency));
    }
    Ok(lines.join(", "))
}

// 10. asymptotic trend of the log2 bound
fn asymptotic() -> Outcome {
    let ns = [64u64, 128, 256, 512, 1024];
    let grid = SearchGrid::default();
    let cfg = BoundsConfig::default();
    let eps = Eps::new(1, 64);
    let mut best_per_n = vec![f64::NEG_INFINITY; ns.len()];
    for delta in [0.5, 0.25, 0.125] {
        for (i, (row, _)) in asymptotic_sweep(&ns, delta, Mode::Plain, Eps::from_integer(0), &grid, &cfg)
            .into_iter()
            .enumerate()
        {
            best_per_n[i] = best_per_n[i].max(row.per_n.unwrap_or(f64::NEG_INFINITY));
        }
    }
    let floor = best_per_n.iter().copied().fold(f64::INFINITY, f64::min);
    let composed: Vec<_> = ns
        .iter()
        .map(|&n| composed_bound(n, n / 2, eps, 1.0 / 256.0, &grid, &cfg))
        .collect();
    let xs: Vec<f64> = composed.iter().map(|c| c.x).collect();
    let ys: Vec<f64> = composed.iter().map(|c| c.log2).collect();
    let c = fit_through_origin(&xs, &ys);
    let per_n: Vec<String> = best_per_n.iter().map(|v| format!("{v:.3}")).collect();
    let detail = format!("per-n log2 ratio [{}], floor {floor:.3}, composed fit c = {c:.3}", per_n.join(", "));
    ensure(floor > 0.0 && c > 0.0, || detail.clone())?;
    Ok(detail)
}

// 11. approximation window
fn stirling() -> Outcome {
    let s = stirling_sweep(8.0);
    let detail = format!("max ratio {:.4} over {} points (a={}, f={}, g={})", s.max_ratio, s.points, s.worst.a, s.worst.f, s.worst.g);
    ensure(s.holds, || detail.clone())?;
    Ok(detail)
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, nw_structure),
        (2, measure_oracle),
        (3, subadditivity),
        (4, shift_intersection),
        (5, distinct_derivative_lemma),
        (6, circuit_soundness),
        (7, restriction_invariants),
        (8, rich_block),
        (9, survival),
        (10, asymptotic),
        (11, stirling),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for (id, f) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                println!("criterion {id}: FAIL ({secs:.1}s) {detail}");
                failed.push(id);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
