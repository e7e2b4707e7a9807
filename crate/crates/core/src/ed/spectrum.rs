use std::ops::Range;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Relative energy window (in units of the spectral width) inside which
/// levels count as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SpectrumDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` belongs to `eigenvalues[i]`.
    pub eigenvectors: DMatrix<f64>,
    /// Contiguous index ranges of (numerically) equal energy.
    pub degeneracy_groups: Vec<Range<usize>>,
    pub tol_deg: f64,
    group_of: Vec<usize>,
}

impl SpectrumDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Index of the degeneracy group containing level `i`.
    pub fn group_of(&self, i: usize) -> usize {
        self.group_of[i]
    }

    /// Mean energy of group `g`.
    pub fn group_energy(&self, g: usize) -> f64 {
        let r = self.degeneracy_groups[g].clone();
        let len = r.len() as f64;
        self.eigenvalues[r].iter().sum::<f64>() / len
    }

    pub fn group_vectors(&self, g: usize) -> DMatrix<f64> {
        let r = self.degeneracy_groups[g].clone();
        self.eigenvectors.columns(r.start, r.len()).into_owned()
    }

    /// `P_g v`.
    pub fn project(&self, g: usize, v: &DVector<f64>) -> DVector<f64> {
        let r = self.degeneracy_groups[g].clone();
        let block = self.eigenvectors.columns(r.start, r.len());
        block * (block.transpose() * v)
    }

    /// `V diag(E) Vᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let v = &self.eigenvectors;
        let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        scaled * v.transpose()
    }

    /// Replaces the eigenvectors of each degenerate group by an
    /// eigenbasis of `diag` restricted to the group, so that a symmetry
    /// commuting with the Hamiltonian is diagonal on every level.
    pub(crate) fn align_with(&mut self, diag: &[f64]) {
        for g in 0..self.degeneracy_groups.len() {
            let r = self.degeneracy_groups[g].clone();
            if r.len() < 2 {
                continue;
            }
            let block = self.eigenvectors.columns(r.start, r.len()).into_owned();
            let weighted = DMatrix::from_fn(block.nrows(), block.ncols(), |i, j| diag[i] * block[(i, j)]);
            let q = block.transpose() * weighted;
            let rot = q.symmetric_eigen().eigenvectors;
            let aligned = block * rot;
            self.eigenvectors.columns_mut(r.start, r.len()).copy_from(&aligned);
        }
    }
}

/// Dense symmetric eigendecomposition with energies grouped within
/// `DEGENERACY_TOLERANCE` times the spectral width.
pub fn diagonalize(h: &DMatrix<f64>) -> Result<SpectrumDecomposition> {
    if !h.is_square() {
        return Err(Error::Domain(format!("matrix is {}x{}, not square", h.nrows(), h.ncols())));
    }
    if h.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let scale = h.amax().max(1.0);
    let asym = (h - h.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::Domain(format!("matrix is not Hermitian (max asymmetry {asym:e})")));
    }
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(h.nrows(), h.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);

    let width = match (eigenvalues.first(), eigenvalues.last()) {
        (Some(lo), Some(hi)) if hi > lo => hi - lo,
        _ => 1.0,
    };
    let tol_deg = DEGENERACY_TOLERANCE * width;
    let mut degeneracy_groups: Vec<Range<usize>> = Vec::new();
    let mut group_of = vec![0; eigenvalues.len()];
    for i in 0..eigenvalues.len() {
        match degeneracy_groups.last_mut() {
            Some(g) if eigenvalues[i] - eigenvalues[g.start] <= tol_deg => g.end = i + 1,
            _ => degeneracy_groups.push(i..i + 1),
        }
        group_of[i] = degeneracy_groups.len() - 1;
    }
    Ok(SpectrumDecomposition { eigenvalues, eigenvectors, degeneracy_groups, tol_deg, group_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ed::build_hamiltonian;
    use crate::ChainSpec;

    #[test]
    fn diagonal_matrix() {
        let s = diagonalize(&DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]))).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0]);
        assert_eq!(s.degeneracy_groups, vec![0..1, 1..2]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(diagonalize(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn two_site_groups() {
        let h = build_hamiltonian(&ChainSpec::finite(2, 1.0).unwrap(), 0.0).unwrap();
        let s = diagonalize(&h).unwrap();
        assert_eq!(s.degeneracy_groups, vec![0..2, 2..4]);
        assert!((s.group_energy(0) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let h = build_hamiltonian(&ChainSpec::finite(8, 0.6).unwrap(), 0.4).unwrap();
        let s = diagonalize(&h).unwrap();
        assert!((s.reconstruct() - &h).amax() <= 1e-9 * h.amax());
        let v = &s.eigenvectors;
        assert!((v.transpose() * v - DMatrix::identity(256, 256)).amax() < 1e-10);
        for w in s.degeneracy_groups.windows(2) {
            assert!(s.eigenvalues[w[1].start] - s.eigenvalues[w[0].end - 1] > s.tol_deg);
        }
        for g in &s.degeneracy_groups {
            assert!(s.eigenvalues[g.end - 1] - s.eigenvalues[g.start] <= s.tol_deg);
        }
    }
}
