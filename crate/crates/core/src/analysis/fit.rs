use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum FitParameters {
    /// `y = prefactor * |x - x_c|^(-mu)`.
    PowerLaw { mu: f64, prefactor: f64 },
    /// `y = slope * ln|x - x_c| + intercept`.
    LogLinear { slope: f64, intercept: f64 },
    /// `|G_n| = n^(-c1) exp(-c2 n - c0)`.
    Decay { c0: f64, c1: f64, c2: f64, oscillating: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub parameters: FitParameters,
    /// One-sigma errors of the linear coefficients in fit coordinates, in
    /// the order (slope, intercept) or (c0, c1, c2).
    pub std_errors: Vec<f64>,
    /// RMS residual in fit coordinates.
    pub residual: f64,
    /// Range of `|x - x_c|` (or `n`) actually used.
    pub window: (f64, f64),
    pub points: usize,
}

impl FitResult {
    pub fn mu(&self) -> Option<f64> {
        match self.parameters {
            FitParameters::PowerLaw { mu, .. } => Some(mu),
            _ => None,
        }
    }

    pub fn slope(&self) -> Option<f64> {
        match self.parameters {
            FitParameters::LogLinear { slope, .. } => Some(slope),
            _ => None,
        }
    }

    pub fn intercept(&self) -> Option<f64> {
        match self.parameters {
            FitParameters::LogLinear { intercept, .. } => Some(intercept),
            _ => None,
        }
    }

    /// `(c0, c1, c2)` of a decay fit.
    pub fn decay_constants(&self) -> Option<(f64, f64, f64)> {
        match self.parameters {
            FitParameters::Decay { c0, c1, c2, .. } => Some((c0, c1, c2)),
            _ => None,
        }
    }
}

pub const MIN_SCALING_POINTS: usize = 6;
pub const MIN_DECAY_POINTS: usize = 20;

const WINDOW_SLACK: f64 = 1e-9;

struct Linear {
    coef: Vec<f64>,
    std_errors: Vec<f64>,
    rms: f64,
}

/// Ordinary least squares `y ≈ X c` via SVD.
fn least_squares(design: &DMatrix<f64>, y: &DVector<f64>) -> Result<Linear> {
    let (m, p) = design.shape();
    let svd = design.clone().svd(true, true);
    let coef = svd
        .solve(y, 1e-14)
        .map_err(|e| Error::FitDomain(format!("least squares failed: {e}")))?;
    let resid = y - design * &coef;
    let rss = resid.norm_squared();
    let sigma2 = if m > p { rss / (m - p) as f64 } else { 0.0 };
    let gram = design.transpose() * design;
    let std_errors = match gram.try_inverse() {
        Some(inv) => (0..p).map(|i| (sigma2 * inv[(i, i)]).max(0.0).sqrt()).collect(),
        None => vec![f64::NAN; p],
    };
    Ok(Linear { coef: coef.iter().cloned().collect(), std_errors, rms: (rss / m as f64).sqrt() })
}

/// Points with `lo <= |x - x_c| <= hi`, rejecting windows that straddle `x_c`.
fn one_sided(points: &[(f64, f64)], x_c: f64, window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = window;
    let sel: Vec<(f64, f64)> = points
        .iter()
        .cloned()
        .filter(|(x, _)| {
            // endpoints built as x_c ± d lose a few ulps in |x - x_c|
            let d = (x - x_c).abs();
            d >= lo * (1.0 - WINDOW_SLACK) && d <= hi * (1.0 + WINDOW_SLACK)
        })
        .collect();
    if sel.len() < MIN_SCALING_POINTS {
        return Err(Error::FitDomain(format!(
            "{} points in window [{lo:e}, {hi:e}], need {MIN_SCALING_POINTS}",
            sel.len()
        )));
    }
    let left = sel.iter().any(|(x, _)| *x < x_c);
    let right = sel.iter().any(|(x, _)| *x > x_c);
    if left && right {
        return Err(Error::FitDomain("window holds points on both sides of the singular point".into()));
    }
    Ok(sel)
}

fn span(d: impl Iterator<Item = f64>) -> (f64, f64) {
    d.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Straight line in `(ln|x - x_c|, ln y)`; `mu = -slope`.
pub fn fit_power_law(points: &[(f64, f64)], x_c: f64, window: (f64, f64)) -> Result<FitResult> {
    let sel = one_sided(points, x_c, window)?;
    if let Some((x, y)) = sel.iter().find(|(_, y)| !(*y > 0.0)) {
        return Err(Error::FitDomain(format!("nonpositive value {y} at x = {x}; power law needs y > 0")));
    }
    let design = DMatrix::from_fn(sel.len(), 2, |i, j| if j == 0 { (sel[i].0 - x_c).abs().ln() } else { 1.0 });
    let y = DVector::from_iterator(sel.len(), sel.iter().map(|(_, y)| y.ln()));
    let fit = least_squares(&design, &y)?;
    Ok(FitResult {
        parameters: FitParameters::PowerLaw { mu: -fit.coef[0], prefactor: fit.coef[1].exp() },
        std_errors: fit.std_errors,
        residual: fit.rms,
        window: span(sel.iter().map(|(x, _)| (x - x_c).abs())),
        points: sel.len(),
    })
}

/// Straight line in `(ln|x - x_c|, y)`.
pub fn fit_log_linear(points: &[(f64, f64)], x_c: f64, window: (f64, f64)) -> Result<FitResult> {
    let sel = one_sided(points, x_c, window)?;
    if let Some((x, y)) = sel.iter().find(|(_, y)| !y.is_finite()) {
        return Err(Error::FitDomain(format!("non-finite value {y} at x = {x}")));
    }
    let design = DMatrix::from_fn(sel.len(), 2, |i, j| if j == 0 { (sel[i].0 - x_c).abs().ln() } else { 1.0 });
    let y = DVector::from_iterator(sel.len(), sel.iter().map(|(_, y)| *y));
    let fit = least_squares(&design, &y)?;
    Ok(FitResult {
        parameters: FitParameters::LogLinear { slope: fit.coef[0], intercept: fit.coef[1] },
        std_errors: fit.std_errors,
        residual: fit.rms,
        window: span(sel.iter().map(|(x, _)| (x - x_c).abs())),
        points: sel.len(),
    })
}

/// `ln|G_n| = -c1 ln n - c2 n - c0`, linear in the constants, so ordinary
/// least squares minimises this objective exactly.
///
/// Sign-alternating data is fitted on the envelope of local maxima of `|G|`
/// and flagged.
pub fn fit_decay(points: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let (lo, hi) = window;
    let sel: Vec<(f64, f64)> = points.iter().cloned().filter(|(n, _)| *n >= lo && *n <= hi).collect();
    if sel.len() < MIN_DECAY_POINTS {
        return Err(Error::FitDomain(format!("{} points in window, need {MIN_DECAY_POINTS}", sel.len())));
    }
    if let Some((n, g)) = sel.iter().find(|(n, g)| *g == 0.0 || !g.is_finite() || !(*n > 0.0)) {
        return Err(Error::FitDomain(format!("cannot take ln|G| = ln|{g}| at n = {n}")));
    }
    let oscillating = sel.windows(2).any(|w| w[0].1.signum() != w[1].1.signum());
    let data: Vec<(f64, f64)> = if oscillating {
        let mags: Vec<f64> = sel.iter().map(|(_, g)| g.abs()).collect();
        (0..sel.len())
            .filter(|&i| {
                let left = i == 0 || mags[i] >= mags[i - 1];
                let right = i + 1 == sel.len() || mags[i] >= mags[i + 1];
                left && right
            })
            .map(|i| (sel[i].0, mags[i]))
            .collect()
    } else {
        sel.iter().map(|(n, g)| (*n, g.abs())).collect()
    };
    if data.len() < 4 {
        return Err(Error::FitDomain(format!("envelope has only {} points", data.len())));
    }
    let design = DMatrix::from_fn(data.len(), 3, |i, j| match j {
        0 => -1.0,
        1 => -data[i].0.ln(),
        _ => -data[i].0,
    });
    let y = DVector::from_iterator(data.len(), data.iter().map(|(_, g)| g.ln()));
    let fit = least_squares(&design, &y)?;
    Ok(FitResult {
        parameters: FitParameters::Decay { c0: fit.coef[0], c1: fit.coef[1], c2: fit.coef[2], oscillating },
        std_errors: fit.std_errors,
        residual: fit.rms,
        window: span(data.iter().map(|(n, _)| *n)),
        points: data.len(),
    })
}
