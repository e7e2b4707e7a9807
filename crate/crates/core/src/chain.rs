//! Chain geometry, couplings and the quench protocol.

use serde::Serialize;

use crate::{Error, Result};

/// Nearest-neighbour coupling. Fixed; energies are in units of `J`.
pub const COUPLING: f64 = 1.0;

/// Equilibrium Ising critical field `|h| = 1`.
pub const CRITICAL_FIELD: f64 = 1.0;

pub const DEFAULT_QUADRATURE_NODES: usize = 4096;
pub const MIN_QUADRATURE_NODES: usize = 512;

/// Finite periodic ring or the thermodynamic limit represented by a
/// Gauss-Legendre rule on `k ∈ (0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Size {
    Finite(usize),
    Thermodynamic { nodes: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainSpec {
    gamma: f64,
    size: Size,
}

impl ChainSpec {
    /// Periodic ring of `n` sites. `n` must be even.
    pub fn finite(n: usize, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if n < 2 || n % 2 != 0 {
            return Err(Error::Domain(format!("chain length must be even and >= 2, got {n}")));
        }
        Ok(Self { gamma, size: Size::Finite(n) })
    }

    pub fn thermodynamic(gamma: f64) -> Result<Self> {
        Self::thermodynamic_with_nodes(gamma, DEFAULT_QUADRATURE_NODES)
    }

    pub fn thermodynamic_with_nodes(gamma: f64, nodes: usize) -> Result<Self> {
        check_gamma(gamma)?;
        if nodes < MIN_QUADRATURE_NODES {
            return Err(Error::Domain(format!(
                "quadrature needs at least {MIN_QUADRATURE_NODES} nodes, got {nodes}"
            )));
        }
        Ok(Self { gamma, size: Size::Thermodynamic { nodes } })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn size(&self) -> Size {
        self.size
    }

    /// Number of sites for a finite ring.
    pub fn sites(&self) -> Option<usize> {
        match self.size {
            Size::Finite(n) => Some(n),
            Size::Thermodynamic { .. } => None,
        }
    }

    pub fn is_thermodynamic(&self) -> bool {
        matches!(self.size, Size::Thermodynamic { .. })
    }

    /// Same chain with a different quadrature resolution. No-op for finite rings.
    pub fn with_nodes(&self, nodes: usize) -> Self {
        match self.size {
            Size::Finite(_) => *self,
            Size::Thermodynamic { .. } => Self { gamma: self.gamma, size: Size::Thermodynamic { nodes } },
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("anisotropy must lie in [0, 1], got {gamma}")));
    }
    Ok(())
}

/// Sudden quench `h(t < 0) = a`, `h(t >= 0) = b`. `a == b` is the static protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuenchSpec {
    pub initial: f64,
    #[serde(rename = "final")]
    pub final_field: f64,
}

impl QuenchSpec {
    pub fn new(initial: f64, final_field: f64) -> Result<Self> {
        if !initial.is_finite() || !final_field.is_finite() {
            return Err(Error::Domain(format!("fields must be finite, got a={initial}, b={final_field}")));
        }
        Ok(Self { initial, final_field })
    }

    pub fn fixed(h: f64) -> Result<Self> {
        Self::new(h, h)
    }

    pub fn is_static(&self) -> bool {
        self.initial == self.final_field
    }
}

/// Sign convention for transverse spin components.
///
/// The Hamiltonian above with `J = +1` is antiferromagnetic. The sublattice
/// rotation `sx_j, sy_j -> (-1)^j sx_j, (-1)^j sy_j` maps it onto the
/// ferromagnetic chain; `G^x_n` and `G^y_n` pick up `(-1)^n`, `G^z_n` is
/// unchanged. Published curves for `G^x` use the ferromagnetic sign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    #[default]
    Ferromagnetic,
    Antiferromagnetic,
}

impl Gauge {
    /// Factor converting a transverse correlator at separation `n` from the
    /// antiferromagnetic convention into this gauge.
    pub fn transverse_sign(self, n: usize) -> f64 {
        match self {
            Gauge::Antiferromagnetic => 1.0,
            Gauge::Ferromagnetic => {
                if n % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Spin component of a two-point correlator `<s^α_0 s^α_n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Alpha {
    X,
    Y,
    Z,
}

impl Alpha {
    pub const ALL: [Alpha; 3] = [Alpha::X, Alpha::Y, Alpha::Z];

    pub fn is_transverse(self) -> bool {
        self != Alpha::Z
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Alpha::X => "x",
            Alpha::Y => "y",
            Alpha::Z => "z",
        })
    }
}

impl std::str::FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Alpha::X),
            "y" => Ok(Alpha::Y),
            "z" => Ok(Alpha::Z),
            _ => Err(Error::Config(format!("unknown spin component {s:?}, expected x, y or z"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(ChainSpec::finite(7, 0.5).is_err());
        assert!(ChainSpec::finite(8, 1.5).is_err());
        assert!(ChainSpec::finite(8, f64::NAN).is_err());
        assert!(ChainSpec::thermodynamic_with_nodes(1.0, 100).is_err());
        assert!(QuenchSpec::new(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn gauge_sign() {
        assert_eq!(Gauge::Ferromagnetic.transverse_sign(3), -1.0);
        assert_eq!(Gauge::Ferromagnetic.transverse_sign(4), 1.0);
        assert_eq!(Gauge::Antiferromagnetic.transverse_sign(3), 1.0);
    }
}
