use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{FitKind, RunConfig, SizeChoice};
use super::table::{Cell, Table};
use super::Outcome;
use crate::analysis::{
    correlator_derivative_scan, detect_discontinuity, fit_decay, fit_log_linear, fit_power_law, DerivativeSeries, Field,
};
use crate::chain::CRITICAL_FIELD;
use crate::correlators::{long_range_scan, quench_correlator, CorrelatorRequest, CorrelatorResult, Method};
use crate::fermion::build_mode_table;
use crate::{ChainSpec, Error, QuenchSpec, Result};

/// Default power-law and log fit window in `|x - x_c|`.
pub const DEFAULT_SCALING_WINDOW: (f64, f64) = (1e-3, 1e-1);

fn require(v: Option<f64>, key: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("--{key} is required")))
}

pub fn modes(cfg: &RunConfig) -> Result<Outcome> {
    let a = require(cfg.a, "a")?;
    let q = QuenchSpec::new(a, cfg.b.unwrap_or(a))?;
    let table = build_mode_table(&cfg.chain(SizeChoice::Thermodynamic)?, &q)?;
    let mut t = Table::new(&["k", "eps_a", "eps_b", "theta_a", "theta_b", "delta"]);
    for i in 0..table.len() {
        t.push(vec![
            table.k[i].into(),
            table.eps_a[i].into(),
            table.eps_b[i].into(),
            table.theta_a[i].into(),
            table.theta_b[i].into(),
            table.delta[i].into(),
        ]);
    }
    Ok(Outcome::table(t))
}

fn default_method(q: &QuenchSpec) -> Method {
    if q.is_static() {
        Method::Static
    } else {
        Method::DeDephased
    }
}

fn request(cfg: &RunConfig, n: usize, q: QuenchSpec) -> CorrelatorRequest {
    let mut req = CorrelatorRequest::new(cfg.alpha, n, q, cfg.method.unwrap_or_else(|| default_method(&q)));
    if let Some(tol) = cfg.tol {
        req.quadrature_tol = tol;
        req.time.tol = tol;
    }
    req
}

pub(crate) fn status(r: &Result<CorrelatorResult>) -> String {
    match r {
        Ok(c) if c.exact => "ok".into(),
        Ok(_) => "approximate".into(),
        Err(e) => format!("failed: {e}"),
    }
}

fn value_cells(r: &Result<CorrelatorResult>) -> [Cell; 2] {
    match r {
        Ok(c) => [c.value.into(), c.residual.into()],
        Err(_) => [f64::NAN.into(), f64::NAN.into()],
    }
}

/// Rows of `(n, value, residual, method, status)` for `n = 1 ..= n_max`.
pub(crate) fn scan_rows(spec: &ChainSpec, cfg: &RunConfig, q: QuenchSpec, n_max: usize) -> Result<Vec<Result<CorrelatorResult>>> {
    let method = cfg.method.unwrap_or_else(|| default_method(&q));
    if cfg.tol.is_some() {
        let rows = (1..=n_max).into_par_iter().map(|n| quench_correlator(spec, &request(cfg, n, q))).collect();
        return Ok(rows);
    }
    long_range_scan(spec, cfg.alpha, &q, n_max, method)
}

pub(crate) fn decay_analysis(rows: &[Result<CorrelatorResult>], window: Option<(f64, f64)>, label: Value) -> Value {
    let points: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.as_ref().ok()).map(|c| (c.n as f64, c.value)).collect();
    let window = window.unwrap_or((1.0, points.len() as f64));
    match fit_decay(&points, window) {
        Ok(fit) => json!({"kind": "decay_fit", "for": label, "fit": fit}),
        Err(e) => json!({"kind": "decay_fit", "for": label, "error": e.to_string()}),
    }
}

pub fn correlator(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg.chain(SizeChoice::Thermodynamic)?;
    if let Some(n_max) = cfg.n_max {
        let a = require(cfg.a, "a")?;
        let q = QuenchSpec::new(a, cfg.b.unwrap_or(a))?;
        let rows = scan_rows(&spec, cfg, q, n_max)?;
        let mut t = Table::new(&["n", "value", "residual", "method", "status"]);
        let method = cfg.method.unwrap_or_else(|| default_method(&q));
        for (i, r) in rows.iter().enumerate() {
            let [v, res] = value_cells(r);
            t.push(vec![(i + 1).into(), v, res, method.to_string().into(), status(r).into()]);
        }
        match cfg.fit {
            Some(FitKind::Decay) => t.analysis.push(decay_analysis(&rows, cfg.window, json!({"a": q.initial, "b": q.final_field}))),
            Some(other) => return Err(Error::Config(format!("fit {other:?} does not apply to a separation scan"))),
            None => {}
        }
        return Ok(Outcome::rows(t, &rows));
    }

    let points: Vec<(f64, f64)> = match cfg.axis()? {
        Some(axis) => {
            let other = match cfg.which {
                Field::Initial => cfg.b,
                Field::Final => cfg.a,
            };
            axis.iter()
                .map(|&x| match (cfg.which, other) {
                    (_, None) => (x, x),
                    (Field::Initial, Some(b)) => (x, b),
                    (Field::Final, Some(a)) => (a, x),
                })
                .collect()
        }
        None => {
            let a = require(cfg.a, "a")?;
            vec![(a, cfg.b.unwrap_or(a))]
        }
    };
    if cfg.fit.is_some() {
        return Err(Error::Config("fits need --n-max (decay) or the derivative command".into()));
    }
    let rows: Vec<Result<CorrelatorResult>> = points
        .par_iter()
        .map(|&(a, b)| quench_correlator(&spec, &request(cfg, cfg.n, QuenchSpec::new(a, b)?)))
        .collect();
    let mut t = Table::new(&["a", "b", "n", "value", "residual", "method", "status"]);
    for (&(a, b), r) in points.iter().zip(&rows) {
        let [v, res] = value_cells(r);
        let method = cfg.method.unwrap_or_else(|| default_method(&QuenchSpec { initial: a, final_field: b }));
        t.push(vec![a.into(), b.into(), cfg.n.into(), v, res, method.to_string().into(), status(r).into()]);
    }
    Ok(Outcome::rows(t, &rows))
}

pub(crate) fn derivative_table(series: &DerivativeSeries) -> Table {
    let axis = match series.which {
        Field::Initial => "a",
        Field::Final => "b",
    };
    let mut t = Table::new(&[axis, "derivative", "error", "step", "status"]);
    for p in &series.points {
        let status = p.flag.clone().map(|f| format!("failed: {f}")).unwrap_or_else(|| "ok".into());
        t.push(vec![p.x.into(), p.value.into(), p.error.into(), p.step.into(), status.into()]);
    }
    t
}

/// Fits requested on a derivative series, one record per side of `x_c`.
pub(crate) fn series_analysis(series: &DerivativeSeries, fit: FitKind, x_c: f64, window: Option<(f64, f64)>, label: Value) -> Vec<Value> {
    let window = window.unwrap_or(DEFAULT_SCALING_WINDOW);
    let values = series.values();
    let record = |side: &str, r: Result<crate::analysis::FitResult>, kind: &str| match r {
        Ok(fit) => json!({"kind": kind, "for": label, "side": side, "fit": fit}),
        Err(e) => json!({"kind": kind, "for": label, "side": side, "error": e.to_string()}),
    };
    let sides = || {
        let left: Vec<(f64, f64)> = values.iter().cloned().filter(|(x, _)| *x < x_c).collect();
        let right: Vec<(f64, f64)> = values.iter().cloned().filter(|(x, _)| *x > x_c).collect();
        [("left", left), ("right", right)].into_iter().filter(|(_, p)| !p.is_empty())
    };
    match fit {
        FitKind::Power => sides()
            .map(|(s, p)| {
                // the power law is fitted to the magnitude; the sign is fixed on each side
                let mag: Vec<(f64, f64)> = p.iter().map(|(x, y)| (*x, y.abs())).collect();
                record(s, fit_power_law(&mag, x_c, window), "power_law_fit")
            })
            .collect(),
        FitKind::Log => sides().map(|(s, p)| record(s, fit_log_linear(&p, x_c, window), "log_linear_fit")).collect(),
        FitKind::Discontinuity => {
            vec![json!({"kind": "discontinuity", "for": label, "result": detect_discontinuity(series, x_c)})]
        }
        FitKind::Decay => vec![json!({"kind": "decay_fit", "for": label, "error": "decay fits apply to separation scans"})],
    }
}

pub fn derivative(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg.chain(SizeChoice::Thermodynamic)?;
    let axis = cfg.axis()?.ok_or_else(|| Error::Config("--grid is required".into()))?;
    let fixed = match cfg.which {
        Field::Initial => cfg.b,
        Field::Final => cfg.a,
    };
    let series = correlator_derivative_scan(&spec, cfg.alpha, cfg.n, cfg.which, fixed, &axis, cfg.step)?;
    let mut t = derivative_table(&series);
    if let Some(fit) = cfg.fit {
        let x_c = cfg.around.unwrap_or(CRITICAL_FIELD);
        t.analysis = series_analysis(&series, fit, x_c, cfg.window, json!({"fixed": fixed}));
    }
    let failed = series.flagged();
    Ok(Outcome::counted(t, failed, failed))
}
