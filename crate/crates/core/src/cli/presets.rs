use rayon::prelude::*;
use serde_json::json;

use super::commands::{decay_analysis, derivative_table, series_analysis, status, DEFAULT_SCALING_WINDOW};
use super::config::{FitKind, RunConfig};
use super::table::{Cell, Table};
use super::Outcome;
use crate::analysis::{correlator_derivative_scan, log_spaced, Field, DEFAULT_STEP};
use crate::chain::CRITICAL_FIELD;
use crate::correlators::{long_range_scan, CorrelatorResult, Method};
use crate::{Alpha, ChainSpec, Error, QuenchSpec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "fig{}", *self as u8 + 1)
    }
}

/// Final fields of the near-critical derivative figures; `None` is the static curve.
pub const SCALING_FINAL_FIELDS: [Option<f64>; 5] = [None, Some(0.0), Some(0.5), Some(1.0), Some(1.5)];

/// Initial fields of the fixed-initial-field figure.
pub const FIXED_INITIAL_FIELDS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

/// Quenches of the decay-fit figure.
pub const DECAY_QUENCHES: [(f64, f64); 2] = [(0.4, 0.5), (0.45, 0.5)];

pub const LONG_RANGE_SEPARATION: usize = 150;

/// `|x - 1|` log-spaced over the default scaling window, both sides.
pub fn scaling_axis() -> Vec<f64> {
    let (lo, hi) = DEFAULT_SCALING_WINDOW;
    let mut xs = log_spaced(CRITICAL_FIELD, -1.0, lo, hi, 20);
    xs.extend(log_spaced(CRITICAL_FIELD, 1.0, lo, hi, 20));
    xs
}

/// One point per decade, `|x - 1| = 1e-1 ..= 1e-5`, both sides.
pub fn decade_axis() -> Vec<f64> {
    let mut xs = log_spaced(CRITICAL_FIELD, -1.0, 1e-5, 1e-1, 1);
    xs.extend(log_spaced(CRITICAL_FIELD, 1.0, 1e-5, 1e-1, 1));
    xs
}

fn field_cell(b: Option<f64>) -> Cell {
    match b {
        Some(b) => b.into(),
        None => "static".into(),
    }
}

fn landscape_axis() -> Vec<f64> {
    (0..=20).map(|i| i as f64 * 0.1).collect()
}

fn thermodynamic(cfg: &RunConfig, gamma: f64) -> Result<ChainSpec> {
    ChainSpec::thermodynamic_with_nodes(gamma, cfg.nodes)
}

fn scaling(cfg: &RunConfig, alpha: Alpha, fit: FitKind) -> Result<Outcome> {
    let spec = thermodynamic(cfg, 1.0)?;
    let axis = scaling_axis();
    let mut t = Table::new(&["b", "a", "derivative", "error", "step", "status"]);
    let mut failed = 0;
    for b in SCALING_FINAL_FIELDS {
        let series = correlator_derivative_scan(&spec, alpha, 1, Field::Initial, b, &axis, DEFAULT_STEP)?;
        failed += series.flagged();
        for row in derivative_table(&series).rows {
            let mut r = vec![field_cell(b)];
            r.extend(row);
            t.push(r);
        }
        if b != Some(CRITICAL_FIELD) {
            let label = json!({"b": b});
            t.analysis.extend(series_analysis(&series, fit, CRITICAL_FIELD, None, label));
        }
    }
    Ok(Outcome::counted(t, failed, failed))
}

fn landscape(cfg: &RunConfig, gamma: f64, alpha: Alpha, finals: &[Option<f64>], n_max: usize) -> Result<Outcome> {
    let spec = thermodynamic(cfg, gamma)?;
    let jobs: Vec<(Option<f64>, f64)> = finals.iter().flat_map(|&b| landscape_axis().into_iter().map(move |a| (b, a))).collect();
    let scans: Vec<Result<Vec<Result<CorrelatorResult>>>> = jobs
        .par_iter()
        .map(|&(b, a)| {
            let q = QuenchSpec::new(a, b.unwrap_or(a))?;
            let method = if q.is_static() { Method::Static } else { Method::DeDephased };
            long_range_scan(&spec, alpha, &q, n_max, method)
        })
        .collect();
    let mut t = Table::new(&["b", "a", "n", "value", "residual", "status"]);
    let (mut failed, mut warnings) = (0, 0);
    for (&(b, a), scan) in jobs.iter().zip(scans) {
        let rows = scan?;
        for (i, r) in rows.iter().enumerate() {
            let (v, res) = r.as_ref().map(|c| (c.value, c.residual)).unwrap_or((f64::NAN, f64::NAN));
            failed += r.is_err() as usize;
            warnings += !matches!(r, Ok(c) if c.exact) as usize;
            t.push(vec![field_cell(b), a.into(), (i + 1).into(), v.into(), res.into(), status(r).into()]);
        }
    }
    Ok(Outcome::counted(t, failed, warnings))
}

fn decay(cfg: &RunConfig) -> Result<Outcome> {
    let spec = thermodynamic(cfg, 1.0)?;
    let mut t = Table::new(&["a", "b", "n", "value", "residual", "status"]);
    let (mut failed, mut warnings) = (0, 0);
    for (a, b) in DECAY_QUENCHES {
        let q = QuenchSpec::new(a, b)?;
        let rows = long_range_scan(&spec, Alpha::X, &q, LONG_RANGE_SEPARATION, Method::DeDephased)?;
        for (i, r) in rows.iter().enumerate() {
            let (v, res) = r.as_ref().map(|c| (c.value, c.residual)).unwrap_or((f64::NAN, f64::NAN));
            failed += r.is_err() as usize;
            warnings += !matches!(r, Ok(c) if c.exact) as usize;
            t.push(vec![a.into(), b.into(), (i + 1).into(), v.into(), res.into(), status(r).into()]);
        }
        t.analysis.push(decay_analysis(&rows, None, json!({"a": a, "b": b})));
    }
    Ok(Outcome::counted(t, failed, warnings))
}

fn fixed_initial(cfg: &RunConfig) -> Result<Outcome> {
    let spec = thermodynamic(cfg, 0.6)?;
    let mut axis: Vec<f64> = (0..20).map(|i| 0.05 + 0.1 * i as f64).filter(|x| (x - CRITICAL_FIELD).abs() > 0.1).collect();
    axis.extend(decade_axis());
    axis.sort_by(f64::total_cmp);
    axis.dedup();
    let mut t = Table::new(&["a", "b", "derivative", "error", "step", "status"]);
    let mut failed = 0;
    for a in FIXED_INITIAL_FIELDS {
        let series = correlator_derivative_scan(&spec, Alpha::Z, 1, Field::Final, Some(a), &axis, DEFAULT_STEP)?;
        failed += series.flagged();
        for row in derivative_table(&series).rows {
            let mut r = vec![a.into()];
            r.extend(row);
            t.push(r);
        }
        t.analysis.extend(series_analysis(&series, FitKind::Discontinuity, CRITICAL_FIELD, None, json!({"a": a})));
    }
    Ok(Outcome::counted(t, failed, failed))
}

pub fn reproduce(cfg: &RunConfig, preset: Preset) -> Result<Outcome> {
    if cfg.size.is_some_and(|s| s != super::config::SizeChoice::Thermodynamic) {
        return Err(Error::Config("figure presets run in the thermodynamic limit".into()));
    }
    match preset {
        Preset::Fig1 => scaling(cfg, Alpha::Z, FitKind::Power),
        Preset::Fig2 => scaling(cfg, Alpha::X, FitKind::Log),
        Preset::Fig3 => landscape(cfg, 0.6, Alpha::Z, &[None, Some(0.0), Some(1.0), Some(1.5)], 20),
        Preset::Fig4 => landscape(cfg, 1.0, Alpha::X, &[None, Some(0.5), Some(1.0), Some(2.0)], LONG_RANGE_SEPARATION),
        Preset::Fig5 => decay(cfg),
        Preset::Fig6 => fixed_initial(cfg),
    }
}
