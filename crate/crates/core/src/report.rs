//! CSV, JSON and pretty-printed renderings of shares, matrices and
//! first-passage reports.
//!
//! CSV outputs carry metadata as leading `# key=value` lines followed by a
//! plain table. Floats are written with Rust's shortest round-trip
//! formatting, so CSV and JSON of the same result parse to identical values.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::Result;
use crate::estimation::{StateShareTable, TransitionMatrix};
use crate::fpt::{
    check_well_defined, efpt_linear, efpt_series, fpt_distribution, EfptResult, FptDistribution,
    StochasticMatrix, WellDefinedness,
};
use crate::model::LaborState;

pub fn shares_csv(t: &StateShareTable) -> String {
    let mut out = String::new();
    writeln!(out, "# quarter={}", t.quarter).unwrap();
    writeln!(out, "# filter={}", t.filter).unwrap();
    writeln!(out, "state,share,n_obs").unwrap();
    for s in LaborState::ALL {
        writeln!(out, "{},{},{}", s, t.shares[s.index()], t.n_obs[s.index()]).unwrap();
    }
    out
}

pub fn shares_json(t: &StateShareTable) -> Value {
    json!({
        "quarter": t.quarter,
        "filter": t.filter.to_string(),
        "total": t.total(),
        "shares": LaborState::ALL.iter().map(|s| json!({
            "state": s,
            "share": t.shares[s.index()],
            "n_obs": t.n_obs[s.index()],
        })).collect::<Vec<_>>(),
    })
}

pub fn matrix_csv(m: &TransitionMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "# from_quarter={}", m.from_quarter).unwrap();
    writeln!(out, "# to_quarter={}", m.to_quarter).unwrap();
    writeln!(out, "# filter={}", m.filter).unwrap();
    writeln!(out, "# provenance={}", m.provenance.replace('\n', " ")).unwrap();
    writeln!(out, "from,{},row_count,fallback", LaborState::codes().join(",")).unwrap();
    for s in LaborState::ALL {
        let cells: Vec<String> = m.entries[s.index()].iter().map(f64::to_string).collect();
        let count = m
            .row_counts
            .map(|c| c[s.index()].to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            s,
            cells.join(","),
            count,
            u8::from(m.is_fallback(s))
        )
        .unwrap();
    }
    out
}

pub fn matrix_json(m: &TransitionMatrix) -> Value {
    json!({
        "from_quarter": m.from_quarter,
        "to_quarter": m.to_quarter,
        "filter": m.filter.to_string(),
        "provenance": m.provenance,
        "states": LaborState::codes(),
        "entries": m.entries,
        "row_counts": m.row_counts,
        "fallback_rows": m.fallback_rows,
    })
}

/// Two-decimal table in the layout of the published transition tables.
/// Fallback rows are marked with `*`.
pub fn matrix_pretty(m: &TransitionMatrix) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{} -> {}  ({})",
        m.from_quarter, m.to_quarter, m.filter
    )
    .unwrap();
    write!(out, "{:<7}", "").unwrap();
    for s in LaborState::ALL {
        write!(out, "{:>7}", s.code()).unwrap();
    }
    writeln!(out).unwrap();
    for s in LaborState::ALL {
        let mark = if m.is_fallback(s) { "*" } else { "" };
        write!(out, "{:<7}", format!("{s}{mark}")).unwrap();
        for x in m.entries[s.index()] {
            write!(out, "{:>7}", format!("{x:.2}")).unwrap();
        }
        writeln!(out).unwrap();
    }
    if !m.fallback_rows.is_empty() {
        let codes: Vec<&str> = m.fallback_rows.iter().map(|s| s.code()).collect();
        writeln!(out, "* no observed departures; uniform 1/7 row ({})", codes.join(", ")).unwrap();
    }
    out
}

/// Everything computed for one (source, target) first-passage query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FptReport {
    pub matrix: String,
    pub source: String,
    pub target: String,
    pub distribution: FptDistribution,
    pub cdf: Vec<f64>,
    pub survival: Vec<f64>,
    pub series: EfptResult,
    pub linear: Option<EfptResult>,
    /// Why the linear solve has no finite answer, if it has none.
    pub linear_error: Option<String>,
    pub diagnostic: WellDefinedness,
}

pub fn fpt_report(
    m: &StochasticMatrix,
    matrix_name: impl Into<String>,
    source: usize,
    target: usize,
    horizon: usize,
    cfg: &RunConfig,
) -> Result<FptReport> {
    let distribution = fpt_distribution(m, source, target, horizon)?;
    let series = efpt_series(m, source, target, cfg.epsilon, cfg.max_horizon)?;
    let (linear, linear_error) = match efpt_linear(m, source, target) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let diagnostic = check_well_defined(m, source, target, cfg.epsilon, cfg.max_horizon)?;
    Ok(FptReport {
        matrix: matrix_name.into(),
        source: m.label(source).to_string(),
        target: m.label(target).to_string(),
        cdf: distribution.cdf(),
        survival: distribution.survival(),
        distribution,
        series,
        linear,
        linear_error,
        diagnostic,
    })
}

pub fn fpt_csv(r: &FptReport) -> String {
    let mut out = String::new();
    writeln!(out, "# matrix={}", r.matrix).unwrap();
    writeln!(out, "# source={}", r.source).unwrap();
    writeln!(out, "# target={}", r.target).unwrap();
    writeln!(out, "# efpt_series_quarters={}", r.series.efpt_quarters).unwrap();
    writeln!(out, "# efpt_series_years={}", r.series.efpt_years).unwrap();
    writeln!(out, "# series_converged={}", r.series.converged).unwrap();
    match (&r.linear, &r.linear_error) {
        (Some(l), _) => {
            writeln!(out, "# efpt_linear_quarters={}", l.efpt_quarters).unwrap();
            writeln!(out, "# efpt_linear_years={}", l.efpt_years).unwrap();
        }
        (None, Some(e)) => writeln!(out, "# efpt_linear_error={e}").unwrap(),
        (None, None) => {}
    }
    writeln!(out, "# mass_at_horizon={}", r.diagnostic.mass_at_horizon).unwrap();
    writeln!(out, "# reachable={}", r.diagnostic.reachable).unwrap();
    writeln!(out, "# verdict={}", r.diagnostic.verdict).unwrap();
    writeln!(out, "n,f,cdf,survival").unwrap();
    for (n, ((f, c), s)) in r
        .distribution
        .f
        .iter()
        .zip(&r.cdf)
        .zip(&r.survival)
        .enumerate()
    {
        writeln!(out, "{},{},{},{}", n + 1, f, c, s).unwrap();
    }
    out
}

pub fn fpt_json(r: &FptReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}
