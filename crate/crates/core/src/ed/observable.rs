use serde::Serialize;

use super::basis::{apply_string, Basis, Pauli, SparseOperator};
use crate::{Alpha, Error, Gauge, Result};

/// Observables the oracle can evaluate. Site indices are taken modulo `N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableSpec {
    Identity,
    SigmaZ { site: usize },
    /// `s^α_site s^α_{site + offset}`, `offset` in `1 ..= N-1`.
    Pair { alpha: Alpha, site: usize, offset: usize },
    /// `(1/N) sum_j sz_j`.
    MagnetizationZ,
    /// `(1/N) sum_j (-1)^j sx_j`. Parity-odd: only defined on [`Sector::Full`](super::Sector::Full).
    StaggeredMagnetizationX,
    /// Square of the above; parity-even, its long-range part is the squared order parameter.
    StaggeredMagnetizationXSquared,
    /// The chain Hamiltonian at `field` in the antiferromagnetic convention.
    Hamiltonian { field: f64 },
}

impl ObservableSpec {
    pub fn pair(alpha: Alpha, offset: usize) -> Self {
        ObservableSpec::Pair { alpha, site: 0, offset }
    }

    pub fn is_parity_even(&self) -> bool {
        !matches!(self, ObservableSpec::StaggeredMagnetizationX)
    }

    fn validate(&self, sites: usize) -> Result<()> {
        match *self {
            ObservableSpec::Pair { offset, .. } if offset == 0 || offset >= sites => Err(Error::Domain(format!(
                "pair offset must lie in [1, {}], got {offset}",
                sites - 1
            ))),
            ObservableSpec::Hamiltonian { field } if !field.is_finite() => {
                Err(Error::Domain(format!("field must be finite, got {field}")))
            }
            _ => Ok(()),
        }
    }

    /// Matrix of the observable on `basis` for a chain of anisotropy `gamma`.
    pub fn operator(&self, basis: &Basis, gamma: f64) -> Result<SparseOperator> {
        let n = basis.sites();
        self.validate(n)?;
        let inv_n = 1.0 / n as f64;
        let strings: Vec<(f64, Vec<(Pauli, usize)>)> = match *self {
            ObservableSpec::Identity => vec![(1.0, vec![])],
            ObservableSpec::SigmaZ { site } => vec![(1.0, vec![(Pauli::Z, site % n)])],
            ObservableSpec::Pair { alpha, site, offset } => {
                let p = pauli(alpha);
                vec![(1.0, vec![(p, site % n), (p, (site + offset) % n)])]
            }
            ObservableSpec::MagnetizationZ => (0..n).map(|j| (inv_n, vec![(Pauli::Z, j)])).collect(),
            ObservableSpec::StaggeredMagnetizationX => {
                (0..n).map(|j| (inv_n * stagger(j), vec![(Pauli::X, j)])).collect()
            }
            ObservableSpec::StaggeredMagnetizationXSquared => {
                let mut v = vec![(n as f64 * inv_n * inv_n, vec![])];
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            v.push((inv_n * inv_n * stagger(i) * stagger(j), vec![(Pauli::X, i), (Pauli::X, j)]));
                        }
                    }
                }
                v
            }
            ObservableSpec::Hamiltonian { field } => {
                return Ok(super::hamiltonian::hamiltonian_operator(basis, gamma, field, Gauge::Antiferromagnetic));
            }
        };
        let mut op = SparseOperator::new(basis.dim());
        for (coeff, factors) in &strings {
            for col in 0..basis.dim() {
                let (image, amp) = apply_string(factors, basis.state(col));
                let row = basis.index_of(image).ok_or_else(|| {
                    Error::Domain(format!("{self:?} leaves the {:?} sector", basis.sector()))
                })?;
                op.push(row, col, coeff * amp);
            }
        }
        Ok(op)
    }
}

fn pauli(alpha: Alpha) -> Pauli {
    match alpha {
        Alpha::X => Pauli::X,
        Alpha::Y => Pauli::Y,
        Alpha::Z => Pauli::Z,
    }
}

fn stagger(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
