use nalgebra::DMatrix;

use super::basis::{Basis, Sector, SparseOperator};
use crate::{ChainSpec, Error, Gauge, Result};

/// Largest ring the dense oracle accepts.
pub const MAX_SITES: usize = 14;

/// Dense `H(h)` on the full `2^N` space in the antiferromagnetic convention
/// (`J = +1` as written in the crate docs).
pub fn build_hamiltonian(spec: &ChainSpec, h: f64) -> Result<DMatrix<f64>> {
    let (_, m) = build_hamiltonian_in(spec, h, Sector::Full, Gauge::Antiferromagnetic)?;
    Ok(m)
}

/// Dense `H(h)` restricted to `sector`, with transverse couplings in `gauge`.
pub fn build_hamiltonian_in(spec: &ChainSpec, h: f64, sector: Sector, gauge: Gauge) -> Result<(Basis, DMatrix<f64>)> {
    let n = check_size(spec)?;
    if !h.is_finite() {
        return Err(Error::Domain(format!("field must be finite, got {h}")));
    }
    let basis = Basis::new(n, sector);
    let op = hamiltonian_operator(&basis, spec.gamma(), h, gauge);
    Ok((basis, op.to_dense()))
}

pub(crate) fn check_size(spec: &ChainSpec) -> Result<usize> {
    let n = spec
        .sites()
        .ok_or_else(|| Error::Domain("exact diagonalisation needs a finite ring".into()))?;
    if n > MAX_SITES {
        return Err(Error::Resource(format!("{n} sites exceeds the dense cap of {MAX_SITES}")));
    }
    Ok(n)
}

/// `sum_j [(1+g)/2 sx sx + (1-g)/2 sy sy] - h sum_j sz_j` with periodic wrap.
///
/// A bond flips both spins with amplitude `g` if they are parallel and `1`
/// if antiparallel. The ferromagnetic gauge flips the sign of the bond.
pub(crate) fn hamiltonian_operator(basis: &Basis, gamma: f64, h: f64, gauge: Gauge) -> SparseOperator {
    let n = basis.sites();
    let bond_sign = match gauge {
        Gauge::Antiferromagnetic => 1.0,
        Gauge::Ferromagnetic => -1.0,
    };
    let mut op = SparseOperator::new(basis.dim());
    for col in 0..basis.dim() {
        let s = basis.state(col);
        let up = s.count_ones() as f64;
        op.push(col, col, -h * (2.0 * up - n as f64));
        for j in 0..n {
            let k = (j + 1) % n;
            let parallel = ((s >> j) & 1) == ((s >> k) & 1);
            let amp = if parallel { gamma } else { 1.0 };
            let row = basis
                .index_of(s ^ (1 << j) ^ (1 << k))
                .expect("bond terms conserve parity");
            op.push(row, col, bond_sign * amp);
        }
    }
    op
}

/// `H_I = dH/dh = -sum_j sz_j`, diagonal.
pub(crate) fn field_operator(basis: &Basis) -> Vec<f64> {
    let n = basis.sites() as f64;
    (0..basis.dim()).map(|i| n - 2.0 * basis.state(i).count_ones() as f64).collect()
}
