//! Differentiation of correlators, critical-scaling fits and
//! classification of singular points.

mod derivative;
mod discontinuity;
mod fit;

pub use derivative::{
    correlator_derivative_scan, derivative_scan, effective_step, richardson, DerivativePoint, DerivativeSeries, Field,
    DEFAULT_STEP,
};
pub use discontinuity::{detect_discontinuity, Classification, Discontinuity, MIN_REFINEMENTS};
pub use fit::{fit_decay, fit_log_linear, fit_power_law, FitParameters, FitResult, MIN_DECAY_POINTS, MIN_SCALING_POINTS};

/// `count` points per decade with `lo <= |x - centre| <= hi` on one side
/// (`side = -1` or `+1`), ascending in `x`.
pub fn log_spaced(centre: f64, side: f64, lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).round() as usize + 1;
    let mut xs: Vec<f64> = (0..count)
        .map(|i| centre + side.signum() * lo * 10f64.powf(i as f64 * decades / (count - 1).max(1) as f64))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs
}
