use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::basis::{Basis, Sector, SparseOperator};
use super::hamiltonian::{build_hamiltonian_in, check_size, field_operator};
use super::observable::ObservableSpec;
use super::spectrum::{diagonalize, SpectrumDecomposition};
use crate::{ChainSpec, Error, Gauge, QuenchSpec, Result};

/// Populations below this are treated as exactly zero.
const POPULATION_CUTOFF: f64 = 1e-30;

/// Relative weight of degenerate final-field pairs above which
/// [`FinalFieldDerivative::warning`] is raised.
pub const DEGENERATE_PAIR_WARNING: f64 = 1e-6;

/// Exact quench data for one `(a, b)` on a small ring: the initial ground
/// state, the final spectrum and the overlaps between them. Build once and
/// evaluate any number of observables.
#[derive(Clone, Debug)]
pub struct QuenchOracle {
    spec: ChainSpec,
    quench: QuenchSpec,
    basis: Basis,
    initial: SpectrumDecomposition,
    final_spectrum: Option<SpectrumDecomposition>,
    ground: usize,
    psi0: DVector<f64>,
    field_diag: Vec<f64>,
    /// `(group, P_g psi0)` for every populated final-field level.
    components: Vec<(usize, DVector<f64>)>,
}

impl QuenchOracle {
    pub fn new(spec: &ChainSpec, quench: &QuenchSpec) -> Result<Self> {
        Self::in_sector(spec, quench, Sector::EvenParity)
    }

    pub fn in_sector(spec: &ChainSpec, quench: &QuenchSpec, sector: Sector) -> Result<Self> {
        check_size(spec)?;
        let (basis, ha) = build_hamiltonian_in(spec, quench.initial, sector, Gauge::Antiferromagnetic)?;
        let parity: Vec<f64> = (0..basis.dim()).map(|i| basis.parity(i)).collect();
        let mut initial = diagonalize(&ha)?;
        initial.align_with(&parity);
        let ground = select_ground_state(&initial, &parity)?;
        let psi0 = initial.eigenvectors.column(ground).into_owned();
        let final_spectrum = if quench.is_static() {
            None
        } else {
            let (_, hb) = build_hamiltonian_in(spec, quench.final_field, sector, Gauge::Antiferromagnetic)?;
            let mut s = diagonalize(&hb)?;
            s.align_with(&parity);
            Some(s)
        };
        let field_diag = field_operator(&basis);
        let mut oracle = Self {
            spec: *spec,
            quench: *quench,
            basis,
            initial,
            final_spectrum,
            ground,
            psi0,
            field_diag,
            components: Vec::new(),
        };
        let fin = oracle.final_spectrum();
        oracle.components = (0..fin.degeneracy_groups.len())
            .map(|g| (g, fin.project(g, &oracle.psi0)))
            .filter(|(_, v)| v.norm_squared() > POPULATION_CUTOFF)
            .collect();
        Ok(oracle)
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn quench(&self) -> &QuenchSpec {
        &self.quench
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn initial_spectrum(&self) -> &SpectrumDecomposition {
        &self.initial
    }

    /// Spectrum of `H(b)`; the initial one for a static protocol.
    pub fn final_spectrum(&self) -> &SpectrumDecomposition {
        self.final_spectrum.as_ref().unwrap_or(&self.initial)
    }

    pub fn ground_state(&self) -> &DVector<f64> {
        &self.psi0
    }

    pub fn ground_energy(&self) -> f64 {
        self.initial.eigenvalues[self.ground]
    }

    pub fn operator(&self, obs: &ObservableSpec) -> Result<SparseOperator> {
        obs.operator(&self.basis, self.spec.gamma())
    }

    /// `<psi0(a)| A |psi0(a)>`.
    pub fn static_expectation(&self, obs: &ObservableSpec) -> Result<f64> {
        let op = self.operator(obs)?;
        Ok(op.matrix_element(&self.psi0, &self.psi0))
    }

    /// Infinite-time average `sum_d <psi0| P_d A P_d |psi0>` over distinct
    /// final-field energies.
    pub fn diagonal_ensemble(&self, obs: &ObservableSpec) -> Result<f64> {
        let op = self.operator(obs)?;
        Ok(self.components.iter().map(|(_, v)| op.matrix_element(v, v)).sum())
    }

    /// `<A(t)>` as a sum of cosines in the level differences of `H(b)`.
    pub fn time_series(&self, obs: &ObservableSpec) -> Result<TimeSeries> {
        let op = self.operator(obs)?;
        let fin = self.final_spectrum();
        let images: Vec<DVector<f64>> = self.components.iter().map(|(_, v)| op.apply(v)).collect();
        let mut frequencies = Vec::new();
        let mut amplitudes = Vec::new();
        for (i, (gi, vi)) in self.components.iter().enumerate() {
            for (j, (gj, _)) in self.components.iter().enumerate().skip(i) {
                let m = vi.dot(&images[j]);
                let w = (fin.group_energy(*gi) - fin.group_energy(*gj)).abs();
                frequencies.push(w);
                amplitudes.push(if i == j { m } else { 2.0 * m });
            }
        }
        Ok(TimeSeries { frequencies, amplitudes })
    }

    /// Smallest nonzero level spacing among populated final-field levels.
    pub fn minimal_spacing(&self) -> Option<f64> {
        let fin = self.final_spectrum();
        let mut e: Vec<f64> = self.components.iter().map(|(g, _)| fin.group_energy(*g)).collect();
        e.sort_by(f64::total_cmp);
        e.windows(2).map(|w| w[1] - w[0]).filter(|d| *d > 0.0).reduce(f64::min)
    }

    /// Static derivative `d<A>/da` from first-order perturbation theory in
    /// `H_I = -sum_j sz_j` around the initial ground state.
    pub fn derivative_static(&self, obs: &ObservableSpec) -> Result<f64> {
        let op = self.operator(obs)?;
        Ok(self.first_order_response(&op.apply(&self.psi0)))
    }

    /// `d<A(a, b)>/da`: the static formula with `A` replaced by its
    /// diagonal-ensemble projection `sum_d P_d A P_d`.
    pub fn derivative_initial(&self, obs: &ObservableSpec) -> Result<f64> {
        let op = self.operator(obs)?;
        let fin = self.final_spectrum();
        let mut projected = DVector::zeros(self.basis.dim());
        for (g, v) in &self.components {
            projected += fin.project(*g, &op.apply(v));
        }
        Ok(self.first_order_response(&projected))
    }

    /// `d<A(a, b)>/db` by perturbing the final eigenbasis.
    ///
    /// Pairs of levels inside one degenerate group have no finite energy
    /// denominator and are left out; their weight is reported.
    pub fn derivative_final(&self, obs: &ObservableSpec) -> Result<FinalFieldDerivative> {
        let op = self.operator(obs)?;
        let fin = self.final_spectrum();
        let v = &fin.eigenvectors;
        let dim = self.basis.dim();
        let weighted = DMatrix::from_fn(dim, dim, |i, j| self.field_diag[i] * v[(i, j)]);
        let h_tilde = v.transpose() * weighted;
        let c = v.transpose() * &self.psi0;

        let mut value = 0.0;
        let mut excluded = 0.0;
        for (g, vd) in &self.components {
            let z = v.transpose() * op.apply(vd);
            let range = fin.degeneracy_groups[*g].clone();
            for n in range.clone() {
                let wn = fin.eigenvalues[n];
                for m in 0..dim {
                    if range.contains(&m) {
                        continue;
                    }
                    value += 2.0 * h_tilde[(m, n)] / (wn - fin.eigenvalues[m]) * (c[m] * z[n] + c[n] * z[m]);
                }
            }
            if range.len() > 1 {
                // H_I restricted to the group; a non-scalar block means the
                // degeneracy is lifted at first order
                let block = h_tilde.view((range.start, range.start), (range.len(), range.len()));
                let mean = block.trace() / range.len() as f64;
                let spread = (block.into_owned() - DMatrix::identity(range.len(), range.len()) * mean).norm();
                excluded += vd.norm_squared() * spread;
            }
        }
        let relative = excluded / self.basis.sites() as f64;
        Ok(FinalFieldDerivative {
            value,
            degenerate_pair_weight: relative,
            warning: relative > DEGENERATE_PAIR_WARNING,
        })
    }

    /// `2 sum_{m not degenerate with 0} <psi0|H_I|m><m|x> / (E_0 - E_m)`.
    fn first_order_response(&self, x: &DVector<f64>) -> f64 {
        let s = &self.initial;
        let hpsi = DVector::from_fn(self.basis.dim(), |i, _| self.field_diag[i] * self.psi0[i]);
        let y = s.eigenvectors.transpose() * hpsi;
        let z = s.eigenvectors.transpose() * x;
        let e0 = s.eigenvalues[self.ground];
        let g0 = s.group_of(self.ground);
        (0..s.dim())
            .filter(|&m| s.group_of(m) != g0)
            .map(|m| 2.0 * y[m] * z[m] / (e0 - s.eigenvalues[m]))
            .sum()
    }
}

/// Lowest even-parity level; the eigenvectors must already be aligned with
/// parity inside degenerate groups.
fn select_ground_state(s: &SpectrumDecomposition, parity: &[f64]) -> Result<usize> {
    for range in &s.degeneracy_groups {
        let even: Vec<usize> = range
            .clone()
            .filter(|&i| {
                let col = s.eigenvectors.column(i);
                col.iter().zip(parity).map(|(x, p)| p * x * x).sum::<f64>() > 0.5
            })
            .collect();
        match even.len() {
            0 => continue,
            1 => return Ok(even[0]),
            k => {
                return Err(Error::Degeneracy(format!(
                    "{k} even-parity states at E = {:.12}",
                    s.eigenvalues[range.start]
                )))
            }
        }
    }
    Err(Error::Degeneracy("no even-parity state".into()))
}

/// `<A(t)> = sum_i amplitudes[i] cos(frequencies[i] t)`.
#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub frequencies: Vec<f64>,
    pub amplitudes: Vec<f64>,
}

impl TimeSeries {
    pub fn at(&self, t: f64) -> f64 {
        self.frequencies.iter().zip(&self.amplitudes).map(|(w, a)| a * (w * t).cos()).sum()
    }

    /// Mean of `samples` equally spaced midpoint values on `[0, horizon]`.
    pub fn sampled_average(&self, horizon: f64, samples: usize) -> f64 {
        let dt = horizon / samples as f64;
        (0..samples).map(|i| self.at((i as f64 + 0.5) * dt)).sum::<f64>() / samples as f64
    }

    /// `(1/T) ∫_0^T <A(t)> dt`, in closed form.
    pub fn running_average(&self, horizon: f64) -> f64 {
        self.frequencies
            .iter()
            .zip(&self.amplitudes)
            .map(|(w, a)| {
                let x = w * horizon;
                if x.abs() < 1e-12 {
                    *a
                } else {
                    a * x.sin() / x
                }
            })
            .sum()
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FinalFieldDerivative {
    pub value: f64,
    /// Population-weighted first-order splitting of degenerate final levels,
    /// per site. Zero when every degeneracy is protected by symmetry.
    pub degenerate_pair_weight: f64,
    pub warning: bool,
}

pub fn static_expectation(spec: &ChainSpec, h: f64, obs: &ObservableSpec) -> Result<f64> {
    QuenchOracle::new(spec, &QuenchSpec::fixed(h)?)?.static_expectation(obs)
}

pub fn diagonal_ensemble_expectation(spec: &ChainSpec, a: f64, b: f64, obs: &ObservableSpec) -> Result<f64> {
    QuenchOracle::new(spec, &QuenchSpec::new(a, b)?)?.diagonal_ensemble(obs)
}

pub fn pt_derivative_static(spec: &ChainSpec, a: f64, obs: &ObservableSpec) -> Result<f64> {
    QuenchOracle::new(spec, &QuenchSpec::fixed(a)?)?.derivative_static(obs)
}

pub fn pt_derivative_quench_initial(spec: &ChainSpec, a: f64, b: f64, obs: &ObservableSpec) -> Result<f64> {
    QuenchOracle::new(spec, &QuenchSpec::new(a, b)?)?.derivative_initial(obs)
}

pub fn pt_derivative_quench_final(spec: &ChainSpec, a: f64, b: f64, obs: &ObservableSpec) -> Result<FinalFieldDerivative> {
    QuenchOracle::new(spec, &QuenchSpec::new(a, b)?)?.derivative_final(obs)
}
