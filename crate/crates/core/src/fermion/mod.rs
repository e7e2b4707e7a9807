//! Free-fermion solution of the XY chain.
//!
//! Jordan-Wigner with `sz_j = 2 n_j - 1` applied directly to the
//! antiferromagnetic Hamiltonian gives the Bogoliubov-de Gennes block
//!
//! ```text
//! M_k = -2 (h - cos k) tau_z - 2 g sin k tau_y,      eigenvalues ±eps_k,
//! eps_k(h) = 2 sqrt((h - cos k)^2 + g^2 sin^2 k),
//! ```
//!
//! and the Bogoliubov angle `theta_k` with `cos 2theta_k = (h - cos k) / (eps_k / 2)`.
//! Ground states and quenches from them live in the even-parity sector,
//! whose momenta are `k = ±(2m+1)π/N`. The gap closes at `k = 0` for
//! `h = 1` and at `k = π` for `h = -1`; both are endpoints of the
//! quadrature interval and never lattice momenta.

mod kernels;
mod modes;
mod quadrature;

pub use kernels::{majorana_kernels, Evaluation, KernelAmplitudes, MajoranaCorrelations, ModeGroup};
pub use modes::{bogoliubov_angle, build_mode_table, dispersion, magnetization_z_de, ModeTable};
pub use quadrature::{MomentumGrid, MAX_QUADRATURE_NODES, QUADRATURE_TOLERANCE};
pub(crate) use quadrature::refine_by;
