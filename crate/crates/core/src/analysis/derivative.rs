use rayon::prelude::*;
use serde::Serialize;

use crate::correlators::{quench_correlator, CorrelatorRequest, Method};
use crate::{Alpha, ChainSpec, Error, QuenchSpec, Result};

/// Default central-difference step in field units.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Which field of the quench is varied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Initial,
    Final,
}

impl Field {
    /// The quench with this field set to `x` and the other to `fixed`;
    /// `None` moves both fields together (the static protocol).
    pub fn quench(self, x: f64, fixed: Option<f64>) -> Result<QuenchSpec> {
        match (self, fixed) {
            (_, None) => QuenchSpec::fixed(x),
            (Field::Initial, Some(b)) => QuenchSpec::new(x, b),
            (Field::Final, Some(a)) => QuenchSpec::new(a, x),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "initial" => Ok(Field::Initial),
            "b" | "final" => Ok(Field::Final),
            _ => Err(Error::Config(format!("unknown field {s:?}, expected a or b"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativePoint {
    pub x: f64,
    /// Richardson-extrapolated central difference; NaN when flagged.
    pub value: f64,
    /// `|R - D(h/2)|`, the change made by extrapolation.
    pub error: f64,
    pub step: f64,
    /// Why the point could not be evaluated.
    pub flag: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeSeries {
    pub which: Field,
    /// Value of the other field; `None` for the static curve `a = b = x`.
    pub fixed: Option<f64>,
    /// Singular point the steps are kept away from.
    pub singular: f64,
    pub points: Vec<DerivativePoint>,
}

impl DerivativeSeries {
    /// `(x, value)` for every unflagged point.
    pub fn values(&self) -> Vec<(f64, f64)> {
        self.points.iter().filter(|p| p.flag.is_none()).map(|p| (p.x, p.value)).collect()
    }

    pub fn flagged(&self) -> usize {
        self.points.iter().filter(|p| p.flag.is_some()).count()
    }
}

/// `D(h) = (f(x+h) - f(x-h)) / 2h` at `h` and `h/2`, combined as
/// `(4 D(h/2) - D(h)) / 3`.
pub fn richardson<F>(f: F, x: f64, h: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let d2 = (f(x + h / 2.0)? - f(x - h / 2.0)?) / h;
    let r = (4.0 * d2 - d1) / 3.0;
    Ok((r, (r - d2).abs()))
}

/// Step actually used at `x`: `step`, shrunk to a tenth of the distance to
/// the singular point when closer.
pub fn effective_step(x: f64, step: f64, singular: f64) -> f64 {
    step.min((x - singular).abs() / 10.0)
}

fn check_grid(grid: &[f64], step: f64) -> Result<()> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// Derivative of a scalar functional of one field along `grid`.
///
/// `make(x)` returns the function to difference around `x`; it is built
/// once per grid point so that anything adaptive (quadrature resolution)
/// can be frozen across the stencil. Failing points are flagged and the
/// scan continues.
pub fn derivative_scan<M, F>(make: M, which: Field, fixed: Option<f64>, grid: &[f64], step: f64, singular: f64) -> Result<DerivativeSeries>
where
    M: Fn(f64) -> Result<F> + Sync,
    F: Fn(f64) -> Result<f64>,
{
    check_grid(grid, step)?;
    let points = grid
        .par_iter()
        .map(|&x| {
            let h = effective_step(x, step, singular);
            let outcome = if h > 0.0 {
                make(x).and_then(|f| richardson(f, x, h))
            } else {
                Err(Error::Domain(format!("grid point {x} sits on the singular point")))
            };
            match outcome {
                Ok((value, error)) => DerivativePoint { x, value, error, step: h, flag: None },
                Err(e) => DerivativePoint { x, value: f64::NAN, error: f64::NAN, step: h, flag: Some(e.to_string()) },
            }
        })
        .collect();
    Ok(DerivativeSeries { which, fixed, singular, points })
}

/// `∂G^α_n / ∂a` or `∂/∂b` of the dephased quench correlator, or
/// `d/dh` of the static correlator when `fixed` is `None`.
///
/// In the thermodynamic limit the quadrature is refined at the grid point
/// and then frozen, so every stencil value shares one set of nodes.
pub fn correlator_derivative_scan(
    spec: &ChainSpec,
    alpha: Alpha,
    n: usize,
    which: Field,
    fixed: Option<f64>,
    grid: &[f64],
    step: f64,
) -> Result<DerivativeSeries> {
    let singular = crate::chain::CRITICAL_FIELD;
    let request = move |x: f64| -> Result<CorrelatorRequest> {
        let q = which.quench(x, fixed)?;
        let method = if q.is_static() { Method::Static } else { Method::DeDephased };
        Ok(CorrelatorRequest::new(alpha, n, q, method))
    };
    let make = |x: f64| -> Result<_> {
        let centre = quench_correlator(spec, &request(x)?)?;
        let frozen = match centre.resolution {
            crate::Size::Thermodynamic { nodes } => spec.with_nodes(nodes),
            crate::Size::Finite(_) => *spec,
        };
        Ok(move |y: f64| -> Result<f64> {
            let mut req = request(y)?;
            if fixed.is_some() {
                // a stencil point may coincide with a = b only by accident; keep the dephased path
                req.method = Method::DeDephased;
            }
            req.refine_quadrature = false;
            Ok(quench_correlator(&frozen, &req)?.value)
        })
    };
    derivative_scan(make, which, fixed, grid, step, singular)
}
