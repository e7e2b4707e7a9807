//! Static and sudden-quench correlations of the anisotropic XY chain in a
//! transverse field.
//!
//! The chain is
//!
//! ```text
//! H(h) = sum_j { (J/2) [ (1+g) sx_j sx_{j+1} + (1-g) sy_j sy_{j+1} ] - h sz_j },   J = 1,
//! ```
//!
//! with periodic boundaries. At `t < 0` the field is `a`, at `t >= 0` it is
//! `b`, and observables are averaged over infinite time after the quench.
//!
//! The crate has two independent routes to every quantity:
//!
//! * [`fermion`] and [`correlators`] solve the chain as free fermions
//!   (Jordan-Wigner + Bogoliubov) and evaluate spin correlators as Wick
//!   determinants and Pfaffians, either at finite `N` or in the
//!   thermodynamic limit by Gauss-Legendre quadrature;
//! * [`ed`] builds the `2^N` Hamiltonian densely and is the ground truth
//!   for small chains, including the perturbative derivative formulas.
//!
//! [`analysis`] differentiates correlators, fits critical scaling forms and
//! classifies singular points; [`cli`] drives sweeps and writes CSV/JSON.

pub mod analysis;
pub mod chain;
pub mod cli;
pub mod correlators;
pub mod ed;
mod error;
pub mod fermion;
pub mod linalg;

pub use chain::{Alpha, ChainSpec, Gauge, QuenchSpec, Size};
pub use error::{Error, Result};
