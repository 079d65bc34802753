//! Command implementations behind the `shiftpd` binary.
//!
//! Every command is a pure function of its [`Cli`] value: identical
//! arguments produce identical bytes. Exit codes are 0 on success, 1 on a
//! verification failure, 2 on usage or parse errors and 3 when a budget
//! is exceeded.

mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{
    asymptotic_sweep, composed_bound, write_csv, BoundsConfig, BoundsRow, Mode, ParamSet, SearchGrid,
};
use crate::circuit::parse_circuit;
use crate::error::{Error, Result};
use crate::measure::{shifted_partials_report, MeasureQuery};
use crate::nw::{generate_nw, NWParams};
use crate::poly::{parse_polynomial, to_file_text, Monomial, VarId, VarSpace};
use crate::restrict::{run_restriction, survival_probability_mc, Condition, Eps, McResult};

pub use verify::{run_verify, CheckResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "shiftpd", version, about = "Shifted partial derivative experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Args, Debug, Clone)]
pub struct Params {
    /// Field degree; n = 2^k.
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true)]
    pub d: Option<u32>,
    /// Rational, e.g. 1/4.
    #[arg(long, global = true)]
    pub eps: Option<String>,
    #[arg(long, global = true)]
    pub r: Option<u32>,
    #[arg(long, global = true)]
    pub ell: Option<u32>,
    #[arg(long, global = true)]
    pub m: Option<u32>,
    #[arg(long, global = true)]
    pub s: Option<u32>,
    /// Top fan-in.
    #[arg(long = "T", global = true)]
    pub t: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Nisan–Wigderson polynomials.
    Nw {
        #[command(subcommand)]
        action: NwAction,
    },
    /// Exact shifted-partials dimension of a polynomial, circuit or NW_d.
    Measure {
        /// Polynomial file.
        #[arg(long, conflicts_with_all = ["circuit", "nw"])]
        input: Option<PathBuf>,
        /// Circuit file, one product per line.
        #[arg(long, conflicts_with = "nw")]
        circuit: Option<PathBuf>,
        /// Measure NW_d for --k and --d.
        #[arg(long)]
        nw: bool,
    },
    /// Run the random restriction.
    Restrict {
        /// Number of runs, with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        runs: u64,
    },
    /// Monte Carlo survival frequencies.
    Mc,
    /// Bound evaluation: one explicit point, or a sweep over n.
    Bounds {
        /// Comma-separated n values; each must be a power of two.
        #[arg(long)]
        ns: Option<String>,
        /// d = floor(delta·n) in a sweep.
        #[arg(long, default_value = "1/2")]
        delta: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
        /// Emit the composed bound instead, with this ρ.
        #[arg(long)]
        rho: Option<f64>,
        /// r-bullet slack constant.
        #[arg(long, default_value_t = 8.0)]
        slack_c: f64,
    },
    /// Run the verification suites at desk scale.
    Verify,
}

#[derive(Subcommand, Debug, Clone)]
pub enum NwAction {
    /// Write NW_d in the canonical polynomial text format.
    Gen,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Plain,
    Restricted,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Restricted => Mode::Restricted,
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

pub fn parse_eps(s: &str) -> Result<Eps> {
    s.trim()
        .parse::<Eps>()
        .map_err(|_| Error::InvalidParameter(format!("eps must be a rational like 1/4, got {s:?}")))
}

fn parse_ratio_f64(s: &str) -> Result<f64> {
    let e = parse_eps(s)?;
    Ok(*e.numer() as f64 / *e.denom() as f64)
}

impl Params {
    fn nw_params(&self) -> Result<NWParams> {
        NWParams::new(self.k.unwrap_or(2), self.d.unwrap_or(2))
    }

    fn eps_or(&self, default: Eps) -> Result<Eps> {
        self.eps.as_deref().map(parse_eps).unwrap_or(Ok(default))
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

/// Run a parsed command, writing to `--out` or `stdout`; returns the exit
/// code. Errors are reported on `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Nw { action: NwAction::Gen } => cmd_nw_gen(&cli.params).map(|s| (s, EXIT_OK)),
        Command::Measure { input, circuit, nw } => {
            cmd_measure(&cli.params, input.as_deref(), circuit.as_deref(), *nw).map(|s| (s, EXIT_OK))
        }
        Command::Restrict { runs } => cmd_restrict(&cli.params, *runs).map(|s| (s, EXIT_OK)),
        Command::Mc => cmd_mc(&cli.params).map(|s| (s, EXIT_OK)),
        Command::Bounds { ns, delta, mode, rho, slack_c } => {
            cmd_bounds(&cli.params, ns.as_deref(), delta, (*mode).into(), *rho, *slack_c).map(|s| (s, EXIT_OK))
        }
        Command::Verify => cmd_verify(&cli.params),
    };
    match result.and_then(|(text, code)| emit(&cli.params, &text, stdout).map(|_| code)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(p: &Params, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &p.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Io(e.to_string()))
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// NW_d as canonical polynomial text.
pub fn cmd_nw_gen(p: &Params) -> Result<String> {
    let params = p.nw_params()?;
    Ok(to_file_text(&generate_nw(&params, p.budget)?))
}

#[derive(Serialize)]
struct MeasureRecord {
    source: String,
    num_vars: usize,
    terms: usize,
    r: u32,
    ell: u32,
    m: Option<u32>,
    generators: u64,
    rows: u64,
    cols: u64,
    dim: u64,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Measure report as JSON, or as a one-row CSV.
pub fn cmd_measure(p: &Params, input: Option<&Path>, circuit: Option<&Path>, nw: bool) -> Result<String> {
    let (source, poly, space) = if nw {
        let params = p.nw_params()?;
        let poly = generate_nw(&params, p.budget)?;
        (format!("nw k={} d={}", params.k(), params.d()), poly, VarSpace::grid(params.n()))
    } else if let Some(path) = circuit {
        let c = parse_circuit(&read_text(path)?, None, None)?;
        let poly = c.expand(p.budget)?;
        (path.display().to_string(), poly, VarSpace::flat(c.num_vars()))
    } else if let Some(path) = input {
        let poly = parse_polynomial(&read_text(path)?)?;
        let space = VarSpace::covering(&poly);
        (path.display().to_string(), poly, space)
    } else {
        return Err(Error::InvalidParameter("measure needs --input, --circuit or --nw".into()));
    };
    let (r, ell) = (p.r.unwrap_or(1), p.ell.unwrap_or(1));
    let q = match p.m {
        Some(m) => MeasureQuery::bounded(r, ell, m),
        None => MeasureQuery::unrestricted(r, ell),
    };
    let rep = shifted_partials_report(&poly, &q, &space, p.budget)?;
    let rec = MeasureRecord {
        source,
        num_vars: space.len(),
        terms: poly.num_terms(),
        r: rep.r,
        ell: rep.ell,
        m: rep.m,
        generators: rep.generators,
        rows: rep.rows,
        cols: rep.cols,
        dim: rep.dim,
    };
    match p.format_or(Format::Json) {
        Format::Json => to_json(&rec),
        Format::Csv => to_csv(&[rec]),
    }
}

/// One JSON record per run, one per line.
pub fn cmd_restrict(p: &Params, runs: u64) -> Result<String> {
    let params = p.nw_params()?;
    let eps = p.eps_or(Eps::new(1, 2))?;
    let mut out = String::new();
    for i in 0..runs.max(1) {
        let o = run_restriction(&params, eps, p.seed.wrapping_add(i))?;
        let mut rec = o.to_json();
        rec["seed"] = serde_json::json!(p.seed.wrapping_add(i));
        out.push_str(&serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize)]
struct McRow {
    case: &'static str,
    monomial: String,
    trials: u64,
    qualifying: u64,
    successes: u64,
    frequency: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    bound: f64,
    threshold: Option<f64>,
    within: Option<bool>,
}

fn mc_row(case: &'static str, m: &Monomial, bound: f64, res: Result<McResult>, trials: u64) -> Result<McRow> {
    match res {
        Ok(r) => {
            let th = r.three_sigma_threshold(bound);
            Ok(McRow {
                case,
                monomial: m.to_string(),
                trials,
                qualifying: r.qualifying,
                successes: r.successes,
                frequency: Some(r.frequency),
                lo: Some(r.lo),
                hi: Some(r.hi),
                bound,
                threshold: Some(th),
                within: Some(r.frequency <= th),
            })
        }
        Err(Error::NoQualifyingTrials { .. }) => Ok(McRow {
            case,
            monomial: m.to_string(),
            trials,
            qualifying: 0,
            successes: 0,
            frequency: None,
            lo: None,
            hi: None,
            bound,
            threshold: None,
            within: None,
        }),
        Err(e) => Err(e),
    }
}

/// Survival frequencies of `x[1,1]` given row 1 compact or not, and of
/// `x[1,1]·x[2,1]` given both rows compact, against `1/n`, `n^{−ε}` and
/// `n^{−2}`.
pub fn cmd_mc(p: &Params) -> Result<String> {
    let params = p.nw_params()?;
    let eps = p.eps_or(Eps::new(1, 4))?;
    let n = params.n() as f64;
    let e = *eps.numer() as f64 / *eps.denom() as f64;
    let x = Monomial::var(VarId::new(0, 1));
    let xy = Monomial::product([VarId::new(0, 1), VarId::new(1, 1)]);
    let t = p.trials;
    let rows = vec![
        mc_row(
            "compact",
            &x,
            1.0 / n,
            survival_probability_mc(&params, eps, &x, &Condition::Compact(vec![0]), t, p.seed),
            t,
        )?,
        mc_row(
            "non_compact",
            &x,
            n.powf(-e),
            survival_probability_mc(&params, eps, &x, &Condition::NonCompact(vec![0]), t, p.seed),
            t,
        )?,
        mc_row(
            "compact_pair",
            &xy,
            n.powi(-2),
            survival_probability_mc(&params, eps, &xy, &Condition::Compact(vec![0, 1]), t, p.seed),
            t,
        )?,
    ];
    match p.format_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(&rows),
    }
}

/// A single explicit parameter point when `--r --ell --m` are all given,
/// otherwise the best searched point for each n of the sweep.
pub fn cmd_bounds(
    p: &Params,
    ns: Option<&str>,
    delta: &str,
    mode: Mode,
    rho: Option<f64>,
    slack_c: f64,
) -> Result<String> {
    let cfg = BoundsConfig { slack_c, ..BoundsConfig::default() };
    let eps = p.eps_or(Eps::new(1, 64))?;
    let format = p.format_or(Format::Csv);
    let ns: Vec<u64> = match ns {
        Some(list) => list
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| Error::InvalidParameter(format!("bad n {x:?}"))))
            .collect::<Result<_>>()?,
        None => vec![1u64 << p.k.unwrap_or(6)],
    };
    if let Some(bad) = ns.iter().find(|n| **n < 2 || !n.is_power_of_two()) {
        return Err(Error::InvalidParameter(format!("n must be a power of two, got {bad}")));
    }
    let grid = SearchGrid::default();
    let delta = parse_ratio_f64(delta)?;

    if let Some(rho) = rho {
        let rows: Vec<_> = ns
            .iter()
            .map(|&n| composed_bound(n, (delta * n as f64).floor() as u64, eps, rho, &grid, &cfg))
            .collect();
        return match format {
            Format::Json => to_json(&rows),
            Format::Csv => to_csv(&rows),
        };
    }

    let rows: Vec<BoundsRow> = if let (Some(r), Some(ell), Some(m)) = (p.r, p.ell, p.m) {
        let n = ns[0];
        let d = p.d.map(u64::from).unwrap_or((delta * n as f64).floor() as u64);
        let point = ParamSet::new(n, d, r as u64, ell as u64, m as u64, p.s.unwrap_or(1) as u64)
            .with_t(p.t.unwrap_or(1))
            .with_eps(eps);
        vec![BoundsRow::new(&point, mode, &cfg)]
    } else {
        asymptotic_sweep(&ns, delta, mode, eps, &grid, &cfg)
            .into_iter()
            .map(|(row, best)| match best {
                Some(b) => BoundsRow::new(&b, mode, &cfg),
                None => {
                    let empty = ParamSet::new(row.n, row.d, 0, 0, 0, 0).with_eps(eps);
                    BoundsRow::new(&empty, mode, &cfg)
                }
            })
            .collect()
    };
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
    }
}

/// The suite report and its exit code.
pub fn cmd_verify(p: &Params) -> Result<(String, i32)> {
    let results = run_verify(p.seed);
    let all = results.iter().all(|r| r.pass);
    let text = match p.format_or(Format::Json) {
        Format::Json => to_json(&results)?,
        Format::Csv => to_csv(&results)?,
    };
    Ok((text, if all { EXIT_OK } else { EXIT_VERIFY_FAILED }))
}
