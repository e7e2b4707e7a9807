use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::chain::Size;

/// Momentum nodes and weights such that `sum_i w_i f(k_i)` approximates
/// `(1/N) sum_k f(k)` over the even-parity sector, for `f` even in `k`.
#[derive(Clone, Debug)]
pub struct MomentumGrid {
    pub k: Vec<f64>,
    pub weight: Vec<f64>,
}

impl MomentumGrid {
    pub fn for_size(size: Size) -> Self {
        match size {
            Size::Finite(n) => Self::antiperiodic(n),
            Size::Thermodynamic { nodes } => Self::gauss_legendre(nodes),
        }
    }

    /// All `N` momenta `(2m+1)π/N`, `m = -N/2 .. N/2 - 1`, weight `1/N`.
    pub fn antiperiodic(n: usize) -> Self {
        let half = n as i64 / 2;
        let k: Vec<f64> = (-half..half).map(|m| (2 * m + 1) as f64 * PI / n as f64).collect();
        let weight = vec![1.0 / n as f64; n];
        Self { k, weight }
    }

    /// Gauss-Legendre rule on `(0, π)` normalised to `(1/π) ∫_0^π`.
    pub fn gauss_legendre(nodes: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(nodes.max(1)).unwrap());
        let (k, weight) = rule
            .iter()
            .map(|(x, w)| ((x + 1.0) * PI / 2.0, w / 2.0))
            .unzip();
        Self { k, weight }
    }

    /// Composite rule of `panels` equal panels with a fixed-order
    /// Gauss-Legendre rule in each; used for strongly oscillating integrands.
    pub fn composite(panels: usize, order: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(order.max(1)).unwrap());
        let width = PI / panels as f64;
        let mut k = Vec::with_capacity(panels * order);
        let mut weight = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = p as f64 * width;
            for (x, w) in rule.iter() {
                k.push(lo + (x + 1.0) * width / 2.0);
                weight.push(w * width / 2.0 / PI);
            }
        }
        Self { k, weight }
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }
}


/// Upper bound for quadrature doubling.
pub const MAX_QUADRATURE_NODES: usize = 1 << 17;

/// Agreement required between successive quadrature doublings.
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;

/// Evaluates `f` and, in the thermodynamic limit, doubles the node count
/// until successive values differ by less than `tol`. Returns the finer
/// value, the last difference and the chain spec it was computed with.
pub(crate) fn refine<F>(spec: &crate::ChainSpec, tol: f64, f: F) -> crate::Result<(f64, f64, crate::ChainSpec)>
where
    F: Fn(&crate::ChainSpec) -> crate::Result<f64>,
{
    refine_by(spec, tol, f, |x| *x)
}

/// [`refine`] for an arbitrary payload compared through `key`.
pub(crate) fn refine_by<T, F, K>(spec: &crate::ChainSpec, tol: f64, f: F, key: K) -> crate::Result<(T, f64, crate::ChainSpec)>
where
    F: Fn(&crate::ChainSpec) -> crate::Result<T>,
    K: Fn(&T) -> f64,
{
    let Size::Thermodynamic { nodes } = spec.size() else {
        return Ok((f(spec)?, 0.0, *spec));
    };
    let mut coarse = key(&f(spec)?);
    let mut m = nodes;
    loop {
        let fine_spec = spec.with_nodes(2 * m);
        let fine = f(&fine_spec)?;
        let v = key(&fine);
        let diff = (v - coarse).abs();
        if diff < tol || 2 * m >= MAX_QUADRATURE_NODES || !diff.is_finite() {
            return Ok((fine, diff, fine_spec));
        }
        coarse = v;
        m *= 2;
    }
}
