//! CSV rows: one per parameter set, with every constraint margin.

use std::io::Write;

use serde::Serialize;

use super::{check_constraints, topfanin_ratio_unchecked, BoundsConfig, Mode, ParamSet};
use crate::error::{Error, Result};

/// Column order of [`write_csv`].
pub const CSV_HEADERS: [&str; 36] = [
    "mode",
    "n",
    "N",
    "d",
    "r",
    "ell",
    "m",
    "s",
    "T",
    "eps",
    "delta",
    "phi",
    "eta",
    "slack_c",
    "positive_holds",
    "positive_margin",
    "m_rs_le_half_n_holds",
    "m_rs_le_half_n_margin",
    "m_rs_le_half_ell_holds",
    "m_rs_le_half_ell_margin",
    "ell_n_band_holds",
    "ell_n_band_margin",
    "n_minus_r_gt_d_holds",
    "n_minus_r_gt_d_margin",
    "r_lt_d_minus_1_holds",
    "r_lt_d_minus_1_margin",
    "r_bullet_plus_holds",
    "r_bullet_plus_margin",
    "r_bullet_minus_holds",
    "r_bullet_minus_margin",
    "ie_gate_holds",
    "ie_gate_margin",
    "feasible",
    "log2_ratio",
    "log2_ratio_per_n",
    "exact_checked",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    pub mode: Mode,
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub d: u64,
    pub r: u64,
    pub ell: u64,
    pub m: u64,
    pub s: u64,
    #[serde(rename = "T")]
    pub t: u64,
    pub eps: String,
    pub delta: f64,
    pub phi: f64,
    pub eta: f64,
    pub slack_c: f64,
    pub positive_holds: bool,
    pub positive_margin: f64,
    pub m_rs_le_half_n_holds: bool,
    pub m_rs_le_half_n_margin: f64,
    pub m_rs_le_half_ell_holds: bool,
    pub m_rs_le_half_ell_margin: f64,
    pub ell_n_band_holds: bool,
    pub ell_n_band_margin: f64,
    pub n_minus_r_gt_d_holds: bool,
    pub n_minus_r_gt_d_margin: f64,
    pub r_lt_d_minus_1_holds: bool,
    pub r_lt_d_minus_1_margin: f64,
    pub r_bullet_plus_holds: bool,
    pub r_bullet_plus_margin: f64,
    pub r_bullet_minus_holds: bool,
    pub r_bullet_minus_margin: f64,
    pub ie_gate_holds: bool,
    pub ie_gate_margin: f64,
    pub feasible: bool,
    pub log2_ratio: f64,
    pub log2_ratio_per_n: f64,
    /// Whether the log2 value was confirmed against the exact value.
    pub exact_checked: bool,
}

impl BoundsRow {
    pub fn new(p: &ParamSet, mode: Mode, cfg: &BoundsConfig) -> Self {
        let c = check_constraints(p, mode, cfg);
        let ratio = topfanin_ratio_unchecked(p, mode, cfg);
        let feasible = c.iter().all(|x| !x.hard || x.holds);
        BoundsRow {
            mode,
            n: p.n,
            big_n: p.big_n(),
            d: p.d,
            r: p.r,
            ell: p.ell,
            m: p.m,
            s: p.s,
            t: p.t,
            eps: p.eps.to_string(),
            delta: p.delta(),
            phi: p.phi(),
            eta: p.eta(),
            slack_c: cfg.slack_c,
            positive_holds: c[0].holds,
            positive_margin: c[0].margin,
            m_rs_le_half_n_holds: c[1].holds,
            m_rs_le_half_n_margin: c[1].margin,
            m_rs_le_half_ell_holds: c[2].holds,
            m_rs_le_half_ell_margin: c[2].margin,
            ell_n_band_holds: c[3].holds,
            ell_n_band_margin: c[3].margin,
            n_minus_r_gt_d_holds: c[4].holds,
            n_minus_r_gt_d_margin: c[4].margin,
            r_lt_d_minus_1_holds: c[5].holds,
            r_lt_d_minus_1_margin: c[5].margin,
            r_bullet_plus_holds: c[6].holds,
            r_bullet_plus_margin: c[6].margin,
            r_bullet_minus_holds: c[7].holds,
            r_bullet_minus_margin: c[7].margin,
            ie_gate_holds: c[8].holds,
            ie_gate_margin: c[8].margin,
            feasible,
            log2_ratio: ratio.log2,
            log2_ratio_per_n: ratio.log2 / p.n as f64,
            exact_checked: ratio.dual_path_gap().is_some_and(|g| g <= 1e-6),
        }
    }
}

/// Write `rows` as CSV with the [`CSV_HEADERS`] header line.
pub fn write_csv<W: Write>(rows: &[BoundsRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADERS).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
