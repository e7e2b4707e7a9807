use serde::Serialize;

use super::derivative::DerivativeSeries;

/// Minimum number of distinct distances to the singular point per side.
pub const MIN_REFINEMENTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Divergent,
    Jump,
    Smooth,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Discontinuity {
    pub class: Classification,
    /// Jump size `|L- - L+|`, or the largest `|value|` when divergent.
    pub magnitude: f64,
    /// Value at the grid point closest to the singular point on each side.
    pub left: f64,
    pub right: f64,
    /// Noise floor the jump was compared against.
    pub noise: f64,
}

struct Side {
    /// Ordered from far to near.
    values: Vec<f64>,
    errors: Vec<f64>,
}

impl Side {
    fn limit(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `|v|` increments over the last three refinements.
    fn increments(&self) -> Vec<f64> {
        let m: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        m.windows(2).rev().take(3).map(|w| w[1] - w[0]).collect::<Vec<_>>().into_iter().rev().collect()
    }

    /// Magnitude still growing by a non-shrinking amount towards the point.
    fn diverges(&self) -> bool {
        let inc = self.increments();
        let scale = self.limit().abs();
        inc.len() == 3 && inc.iter().all(|&d| d > 1e-3 * scale) && inc[2] >= 0.5 * inc[1]
    }
}

/// Classifies the behaviour of a derivative series at `x_c` from its
/// approach on either side. Each side needs at least
/// [`MIN_REFINEMENTS`] points, ideally with geometrically shrinking
/// distances (one per decade).
pub fn detect_discontinuity(series: &DerivativeSeries, x_c: f64) -> Discontinuity {
    let side = |left: bool| -> Side {
        let mut pts: Vec<(f64, f64, f64)> = series
            .points
            .iter()
            .filter(|p| p.flag.is_none() && p.value.is_finite() && if left { p.x < x_c } else { p.x > x_c })
            .map(|p| ((p.x - x_c).abs(), p.value, p.error))
            .collect();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        Side { values: pts.iter().map(|p| p.1).collect(), errors: pts.iter().map(|p| p.2).collect() }
    };
    let (l, r) = (side(true), side(false));
    if l.values.len() < MIN_REFINEMENTS || r.values.len() < MIN_REFINEMENTS {
        return Discontinuity {
            class: Classification::Inconclusive,
            magnitude: f64::NAN,
            left: l.values.last().cloned().unwrap_or(f64::NAN),
            right: r.values.last().cloned().unwrap_or(f64::NAN),
            noise: f64::NAN,
        };
    }
    let (left, right) = (l.limit(), r.limit());
    if l.diverges() || r.diverges() {
        let magnitude = l.values.iter().chain(&r.values).fold(0.0f64, |m, v| m.max(v.abs()));
        return Discontinuity { class: Classification::Divergent, magnitude, left, right, noise: f64::NAN };
    }
    let scale = left.abs().max(right.abs());
    let tail = |s: &Side| -> f64 {
        let inc = s.increments().last().map(|d| d.abs()).unwrap_or(0.0);
        inc.max(*s.errors.last().unwrap())
    };
    let noise = tail(&l).max(tail(&r)).max(1e-5 * scale.max(1.0));
    let gap = (left - right).abs();
    let class = if gap > 5.0 * noise { Classification::Jump } else { Classification::Smooth };
    Discontinuity { class, magnitude: gap, left, right, noise }
}
