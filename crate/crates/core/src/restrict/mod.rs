//! The random restriction `R_ε` on coefficient vectors of `NW_d`.
//!
//! A univariate `f` of degree below `d` over GF(2^k) is identified with its
//! coefficient vector `[f] ∈ F_2^{dk}`. For every row `i` (field elements in
//! bit-pattern order) the procedure makes `εk` attempts to add a random
//! F_2-affine constraint `[f]·C = b`, where `C` is a linear combination of
//! the columns of `Eval_i` not yet spanned by the constraint matrix `𝓜`.
//! Afterwards `x[i, j]` is killed unless `j = f(i)` for some `[f]` in the
//! solution space `A_n`.
//!
//! Randomness: one `ChaCha8Rng` seeded with the run seed. Each appended
//! constraint draws the candidate index with `gen_range` over the
//! unspanned combinations (listed by increasing combination mask), then the
//! bit `b` with `gen::<bool>()`.

mod mc;

use std::collections::HashSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use mc::{
    subspace_inclusion_exact, subspace_inclusion_mc, survival_probability_mc, wilson_interval,
    Condition, McResult,
};

use crate::error::{Error, Result};
use crate::gf2lin::{
    eval_matrix, phi_inv, solve_affine, stacked_eval, AffineSolution, AffineSolve, BitVector,
    EchelonBasis, Elem, Gf2Matrix,
};
use crate::nw::NWParams;
use crate::poly::{Monomial, VarId};

/// The restriction parameter `ε`, a non-negative rational.
pub type Eps = Ratio<u64>;

/// `εk`, the number of attempts per row; rejects `ε` outside `[0, 1]` or
/// with `εk` not an integer.
pub fn constraints_per_row(eps: Eps, k: u32) -> Result<u32> {
    if eps > Eps::from_integer(1) {
        return Err(Error::InvalidParameter(format!("eps must be at most 1, got {eps}")));
    }
    let per = eps * Eps::from_integer(k as u64);
    if !per.is_integer() {
        return Err(Error::InvalidParameter(format!(
            "eps*k must be an integer, got eps={eps}, k={k}"
        )));
    }
    Ok(per.to_integer() as u32)
}

/// An affine subspace of F_2^k in canonical form: `basis` is in reduced
/// echelon form (distinct leading bits, each cleared in the others) and
/// `point` is reduced against it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineSubspace {
    pub point: Elem,
    pub basis: Vec<Elem>,
}

fn top_bit(x: Elem) -> u32 {
    31 - x.leading_zeros()
}

impl AffineSubspace {
    pub fn new(point: Elem, directions: impl IntoIterator<Item = Elem>) -> Self {
        let mut basis: Vec<Elem> = Vec::new();
        for v in directions {
            let mut v = v;
            for &b in &basis {
                if v & (1 << top_bit(b)) != 0 {
                    v ^= b;
                }
            }
            if v != 0 {
                for b in basis.iter_mut() {
                    if *b & (1 << top_bit(v)) != 0 {
                        *b ^= v;
                    }
                }
                basis.push(v);
            }
        }
        basis.sort_unstable_by(|a, b| b.cmp(a));
        let mut s = AffineSubspace { point: 0, basis };
        s.point = s.reduce(point);
        s
    }

    fn reduce(&self, mut v: Elem) -> Elem {
        for &b in &self.basis {
            if v & (1 << top_bit(b)) != 0 {
                v ^= b;
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: Elem) -> bool {
        self.reduce(v ^ self.point) == 0
    }

    /// All elements, ascending.
    pub fn elements(&self) -> Vec<Elem> {
        let mut out: Vec<Elem> = (0u64..1 << self.basis.len())
            .map(|mask| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| (mask >> t) & 1 == 1)
                    .fold(self.point, |acc, (_, &b)| acc ^ b)
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// One appended constraint `[f]·column = bit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub row: Elem,
    pub column: BitVector,
    pub bit: bool,
}

/// The constraint system while the procedure runs.
#[derive(Clone, Debug)]
pub struct RestrictionState {
    params: NWParams,
    eps: Eps,
    seed: u64,
    columns: Vec<BitVector>,
    bits: Vec<bool>,
    span: EchelonBasis,
    steps: Vec<Step>,
}

impl RestrictionState {
    pub fn new(params: NWParams, eps: Eps, seed: u64) -> Result<Self> {
        constraints_per_row(eps, params.k())?;
        let dk = (params.d() * params.k()) as usize;
        Ok(RestrictionState {
            params,
            eps,
            seed,
            columns: Vec::new(),
            bits: Vec::new(),
            span: EchelonBasis::new(dk),
            steps: Vec::new(),
        })
    }

    pub fn params(&self) -> &NWParams {
        &self.params
    }

    /// Length of coefficient vectors, `dk`.
    pub fn dk(&self) -> usize {
        (self.params.d() * self.params.k()) as usize
    }

    /// `𝓜` as a `dk × c` matrix.
    pub fn matrix(&self) -> Gf2Matrix {
        Gf2Matrix::from_columns(self.dk(), &self.columns).expect("columns have length dk")
    }

    /// `𝓑`.
    pub fn rhs(&self) -> BitVector {
        BitVector::from_bools(&self.bits)
    }

    pub fn rank(&self) -> usize {
        self.span.dim()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Is every column of `Eval_i` spanned by `𝓜`?
    pub fn is_compact(&self, row: Elem) -> bool {
        let e = eval_matrix(row, self.params.d() as usize, self.params.field()).expect("row in field");
        (0..e.cols()).all(|t| self.span.contains(&e.column(t)))
    }

    /// Unspanned nonzero combinations of the columns of `Eval_i`, by
    /// increasing combination mask.
    pub fn unspanned_combinations(&self, row: Elem) -> Vec<BitVector> {
        let e = eval_matrix(row, self.params.d() as usize, self.params.field()).expect("row in field");
        let k = e.cols();
        let cols: Vec<BitVector> = (0..k).map(|t| e.column(t)).collect();
        (1u64..1 << k)
            .map(|mask| {
                let mut c = BitVector::zeros(self.dk());
                for (t, col) in cols.iter().enumerate() {
                    if (mask >> t) & 1 == 1 {
                        c.xor_assign(col);
                    }
                }
                c
            })
            .filter(|c| !self.span.contains(c))
            .collect()
    }

    /// Append `[f]·column = bit`; the column must be unspanned.
    pub fn push(&mut self, row: Elem, column: BitVector, bit: bool) -> Result<()> {
        if !self.span.insert(&column) {
            return Err(Error::Precondition("constraint column is already spanned".into()));
        }
        self.columns.push(column.clone());
        self.bits.push(bit);
        self.steps.push(Step { row, column, bit });
        Ok(())
    }

    /// `A_n` for the current constraints.
    pub fn solution_space(&self) -> AffineSolution {
        match solve_affine(&self.matrix(), &self.rhs()).expect("consistent dimensions") {
            AffineSolve::Feasible(s) => s,
            AffineSolve::Infeasible => unreachable!("independent constraints are always feasible"),
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(
            solve_affine(&self.matrix(), &self.rhs()),
            Ok(AffineSolve::Feasible(_))
        )
    }
}

/// `{[f]·Eval_i : [f] ∈ A}` without enumerating `A`.
pub fn surviving_values(an: &AffineSolution, row: Elem, params: &NWParams) -> AffineSubspace {
    let e = eval_matrix(row, params.d() as usize, params.field()).expect("row in field");
    let image = |v: &BitVector| phi_inv(&e.vec_mul(v).expect("length dk"));
    AffineSubspace::new(image(&an.particular), an.kernel.iter().map(image))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowOutcome {
    pub row: Elem,
    pub compact: bool,
    pub values: AffineSubspace,
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct RestrictionOutcome {
    pub state: RestrictionState,
    pub an: AffineSolution,
    pub rows: Vec<RowOutcome>,
    /// Row-major `n × n`; `true` means killed.
    pub killed: Vec<bool>,
}

impl RestrictionOutcome {
    fn assemble(state: RestrictionState) -> Self {
        let p = *state.params();
        let an = state.solution_space();
        let n = p.n();
        let rows: Vec<RowOutcome> = (0..n)
            .map(|i| RowOutcome {
                row: i,
                compact: state.is_compact(i),
                values: surviving_values(&an, i, &p),
            })
            .collect();
        let killed = rows
            .iter()
            .flat_map(|r| (0..n).map(move |j| !r.values.contains(j)))
            .collect();
        RestrictionOutcome {
            state,
            an,
            rows,
            killed,
        }
    }

    pub fn params(&self) -> &NWParams {
        self.state.params()
    }

    /// `log2 |A_n| = dk − rank(𝓜)`.
    pub fn log2_an_size(&self) -> usize {
        self.an.log2_size()
    }

    pub fn compact_rows(&self) -> Vec<Elem> {
        self.rows.iter().filter(|r| r.compact).map(|r| r.row).collect()
    }

    pub fn is_compact(&self, row: Elem) -> bool {
        self.rows[row as usize].compact
    }

    pub fn survives(&self, v: VarId) -> bool {
        let n = self.params().n();
        v.row < n && v.col < n && !self.killed[(v.row * n + v.col) as usize]
    }

    /// The killed set `S_0`.
    pub fn killed_vars(&self) -> HashSet<VarId> {
        let n = self.params().n();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| VarId::new(i, j)))
            .filter(|&v| !self.survives(v))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        outcome_json(self)
    }
}

/// Run `R_ε` for `params`.
pub fn run_restriction(params: &NWParams, eps: Eps, seed: u64) -> Result<RestrictionOutcome> {
    let mut state = RestrictionState::new(*params, eps, seed)?;
    let per_row = constraints_per_row(eps, params.k())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..params.n() {
        for _ in 0..per_row {
            let cands = state.unspanned_combinations(i);
            if cands.is_empty() {
                continue;
            }
            let pick = rng.gen_range(0..cands.len() as u32) as usize;
            let bit: bool = rng.gen();
            state.push(i, cands[pick].clone(), bit)?;
        }
    }
    Ok(RestrictionOutcome::assemble(state))
}

/// `true` iff no variable of `m` is killed.
pub fn monomial_survives(outcome: &RestrictionOutcome, m: &Monomial) -> bool {
    m.vars().all(|v| outcome.survives(v))
}

/// Result of the rich-block search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RichBlock {
    /// Block size `r`.
    pub r: u32,
    /// `dim_i` for blocks `i = 1..d/r`; `m_i = 2^{dim_i}`.
    pub dims: Vec<u32>,
    /// First 1-based block meeting `m_i >= n^{r(1−εn/d)}`, if any.
    pub block: Option<usize>,
}

impl RichBlock {
    pub fn m_i(&self, block: usize) -> u128 {
        1u128 << self.dims[block - 1]
    }
}

/// `dim_i · d ≥ k·r·(d − εn)`, i.e. `2^{dim_i} ≥ n^{r(1−εn/d)}`, exactly.
pub fn meets_rich_threshold(dim: u32, params: &NWParams, eps: Eps, r: u32) -> bool {
    let d = params.d() as u64;
    let lhs = Eps::from_integer(dim as u64 * d);
    let en = eps * Eps::from_integer(params.n() as u64);
    let de = Eps::from_integer(d);
    if en >= de {
        return true;
    }
    lhs >= Eps::from_integer((params.k() * r) as u64) * (de - en)
}

/// For blocks `S_i = {(i−1)r+1, …, ir}` of the first `d` rows (1-based),
/// the dimension of the image of `A_n` under `[f] ↦ (f(α))_{α ∈ S_i}`.
pub fn rich_block_search(outcome: &RestrictionOutcome, r: u32) -> Result<RichBlock> {
    let p = outcome.params();
    let (d, eps) = (p.d(), outcome.state.eps);
    if r == 0 || r + 1 >= d || d % r != 0 {
        return Err(Error::Precondition(format!(
            "block size must satisfy 1 <= r < d - 1 and r | d, got r={r}, d={d}"
        )));
    }
    let mut dims = Vec::new();
    for b in 0..d / r {
        let points: Vec<Elem> = (b * r..(b + 1) * r).collect();
        let e = stacked_eval(&points, d as usize, p.field())?;
        let mut basis = EchelonBasis::new(e.cols());
        for kv in &outcome.an.kernel {
            basis.insert(&e.vec_mul(kv)?);
        }
        dims.push(basis.dim() as u32);
    }
    let block = dims
        .iter()
        .position(|&dim| meets_rich_threshold(dim, p, eps, r))
        .map(|i| i + 1);
    Ok(RichBlock { r, dims, block })
}

#[derive(Serialize)]
struct OutcomeRecord<'a> {
    seed: u64,
    eps: String,
    k: u32,
    d: u32,
    n: u32,
    constraints_per_row: u32,
    rank: usize,
    log2_an_size: usize,
    compact_rows: Vec<Elem>,
    killed: String,
    rows: &'a [RowOutcome],
}

fn outcome_json(o: &RestrictionOutcome) -> serde_json::Value {
    let p = o.params();
    let rec = OutcomeRecord {
        seed: o.state.seed,
        eps: o.state.eps.to_string(),
        k: p.k(),
        d: p.d(),
        n: p.n(),
        constraints_per_row: constraints_per_row(o.state.eps, p.k()).unwrap(),
        rank: o.state.rank(),
        log2_an_size: o.log2_an_size(),
        compact_rows: o.compact_rows(),
        killed: o.killed.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        rows: &o.rows,
    };
    serde_json::to_value(rec).expect("plain record")
}
