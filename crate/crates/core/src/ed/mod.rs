//! Exact diagonalisation of small periodic rings.
//!
//! Ground truth for the free-fermion route: full spectra, diagonal-ensemble
//! averages with degeneracy-aware projectors, direct time evolution, and
//! first-order perturbative derivatives with respect to the initial and
//! final field. Everything here uses the antiferromagnetic sign convention
//! of the Hamiltonian as written, and defaults to the even-parity block,
//! which holds the ground state and all parity-even dynamics.

mod basis;
mod hamiltonian;
mod observable;
mod oracle;
mod spectrum;

pub use basis::{Basis, Sector, SparseOperator};
pub use hamiltonian::{build_hamiltonian, build_hamiltonian_in, MAX_SITES};
pub use observable::ObservableSpec;
pub use oracle::{
    diagonal_ensemble_expectation, pt_derivative_quench_final, pt_derivative_quench_initial, pt_derivative_static,
    static_expectation, FinalFieldDerivative, QuenchOracle, TimeSeries, DEGENERATE_PAIR_WARNING,
};
pub use spectrum::{diagonalize, SpectrumDecomposition, DEGENERACY_TOLERANCE};
