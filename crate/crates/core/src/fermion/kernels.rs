//! Majorana two-point functions of the evolved Gaussian state.
//!
//! With `A_j = c_j† + c_j` and `B_j = c_j† - c_j` the only independent
//! contractions are
//!
//! ```text
//! <B_j A_{j+l}>(t) = sum_k w_k [ cos 2Δ_k cos(kl + 2θ_k) + sin 2Δ_k cos(2 eps_k t) sin(kl + 2θ_k) ]
//! <A_j A_{j+l}>(t) = δ_l0 - i S_l(t),   <B_j B_{j+l}>(t) = -δ_l0 - i S_l(t),
//! S_l(t)           = sum_k w_k sin 2Δ_k sin(2 eps_k t) sin(kl),
//! ```
//!
//! with angles and energies of the final field `b` and `Δ_k = θ_k(b) - θ_k(a)`.

use num_complex::Complex64;

use super::modes::ModeTable;
use super::quadrature::MomentumGrid;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evaluation {
    Time(f64),
    InfiniteAverage,
}

/// Contraction kernels for lags `-max_lag ..= max_lag`.
#[derive(Clone, Debug)]
pub struct MajoranaCorrelations {
    pub evaluation: Evaluation,
    max_lag: usize,
    ba: Vec<f64>,
    sin: Vec<f64>,
}

impl MajoranaCorrelations {
    fn from_parts(evaluation: Evaluation, max_lag: usize, ba: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { evaluation, max_lag, ba, sin }
    }

    pub fn max_lag(&self) -> usize {
        self.max_lag
    }

    fn idx(&self, l: i64) -> usize {
        let i = l + self.max_lag as i64;
        assert!(i >= 0 && (i as usize) < self.ba.len(), "lag {l} outside kernel range ±{}", self.max_lag);
        i as usize
    }

    /// `<B_j A_{j+l}>`, real.
    pub fn f_ba(&self, l: i64) -> f64 {
        self.ba[self.idx(l)]
    }

    /// `S_l` with `<A_j A_{j+l}> = δ_l0 - i S_l`. Odd in `l`.
    pub fn s(&self, l: i64) -> f64 {
        self.sin[self.idx(l)]
    }

    pub fn f_aa(&self, l: i64) -> Complex64 {
        Complex64::new(if l == 0 { 1.0 } else { 0.0 }, -self.s(l))
    }

    pub fn f_bb(&self, l: i64) -> Complex64 {
        Complex64::new(if l == 0 { -1.0 } else { 0.0 }, -self.s(l))
    }

    /// Largest `|F_BA(l) - other.F_BA(l)|` or `|S_l - other.S_l|` over `|l| <= upto`.
    pub fn max_deviation(&self, other: &Self, upto: usize) -> f64 {
        let upto = upto.min(self.max_lag).min(other.max_lag) as i64;
        (-upto..=upto)
            .map(|l| (self.f_ba(l) - other.f_ba(l)).abs().max((self.s(l) - other.s(l)).abs()))
            .fold(0.0, f64::max)
    }
}

/// Kernels of the state described by `table` at time `t` after the quench or
/// averaged over infinite time.
///
/// For a finite ring the mode sums are exact. In the thermodynamic limit
/// the stored quadrature is used for the average; at finite `t` a composite
/// rule is built whose panels resolve the phase `2 eps_k t` and the lag `kl`.
pub fn majorana_kernels(table: &ModeTable, evaluation: Evaluation, max_lag: usize) -> MajoranaCorrelations {
    match evaluation {
        Evaluation::InfiniteAverage => {
            let (ba, _) = lag_sums(table, max_lag, None);
            MajoranaCorrelations::from_parts(evaluation, max_lag, ba, vec![0.0; 2 * max_lag + 1])
        }
        Evaluation::Time(t) => {
            if table.spec.is_thermodynamic() && t != 0.0 {
                let panels = composite_panels(t, max_lag);
                if panels * COMPOSITE_ORDER > table.len() {
                    let fine = ModeTable::on_grid(&table.spec, &table.quench, MomentumGrid::composite(panels, COMPOSITE_ORDER))
                        .expect("angles were already valid on the coarser grid");
                    let (ba, sin) = lag_sums(&fine, max_lag, Some(t));
                    return MajoranaCorrelations::from_parts(evaluation, max_lag, ba, sin);
                }
            }
            let (ba, sin) = lag_sums(table, max_lag, Some(t));
            MajoranaCorrelations::from_parts(evaluation, max_lag, ba, sin)
        }
    }
}

const COMPOSITE_ORDER: usize = 16;

/// Panels so that neither `2 eps_k t` (slope <= 4t) nor `kl` changes by more
/// than ~3 rad across one 16-point panel.
pub(crate) fn composite_panels(t: f64, max_lag: usize) -> usize {
    let need = (4.0 * std::f64::consts::PI / 3.0 * t.abs() + 1.05 * max_lag as f64).ceil() as usize;
    need.max(256).next_power_of_two()
}

/// Mode sums `(F_BA(l), S_l)` for every lag; `time = None` is the infinite-time average.
fn lag_sums(table: &ModeTable, max_lag: usize, time: Option<f64>) -> (Vec<f64>, Vec<f64>) {
    let width = 2 * max_lag + 1;
    let mut ba = vec![0.0; width];
    let mut sin = vec![0.0; width];
    let l0 = -(max_lag as f64);
    for i in 0..table.len() {
        let k = table.k[i];
        let w = table.weight[i];
        let phi = 2.0 * table.theta_b[i];
        let two_delta = 2.0 * table.delta[i];
        let (c_amp, s_amp) = (w * two_delta.cos(), w * two_delta.sin());
        let (osc_c, osc_s) = match time {
            Some(t) => {
                let wt = 2.0 * table.eps_b[i] * t;
                (wt.cos(), wt.sin())
            }
            None => (0.0, 0.0),
        };
        let (rs, rc) = k.sin_cos();
        // running cos/sin of (k l + phi) and sin/cos of (k l)
        let (mut s_phase, mut c_phase) = (k * l0 + phi).sin_cos();
        let (mut s_lag, mut c_lag) = (k * l0).sin_cos();
        for j in 0..width {
            ba[j] += c_amp * c_phase + s_amp * osc_c * s_phase;
            sin[j] += s_amp * osc_s * s_lag;
            let nc = c_phase * rc - s_phase * rs;
            s_phase = s_phase * rc + c_phase * rs;
            c_phase = nc;
            let nl = c_lag * rc - s_lag * rs;
            s_lag = s_lag * rc + c_lag * rs;
            c_lag = nl;
        }
    }
    (ba, sin)
}

/// Momenta sharing one final-field energy; their kernel contributions
/// oscillate at the common frequency `omega = 2 eps`.
#[derive(Clone, Debug)]
pub struct ModeGroup {
    pub omega: f64,
    pub members: Vec<usize>,
}

impl ModeTable {
    /// Groups of modes with equal `eps_k(b)`.
    ///
    /// On a ring every `±k` pair is degenerate and accidental coincidences
    /// are grouped too. In the thermodynamic limit oscillating terms dephase
    /// unless the band is flat (`b = 0`, `g = 1`), in which case all nodes
    /// form one group.
    pub fn resonant_groups(&self) -> Vec<ModeGroup> {
        if self.quench.is_static() || self.is_empty() {
            return Vec::new();
        }
        let scale = self.max_eps_b().max(1.0);
        let tol = 1e-10 * scale;
        if self.spec.is_thermodynamic() {
            let min = self.eps_b.iter().cloned().fold(f64::MAX, f64::min);
            let max = self.max_eps_b();
            if max - min <= tol {
                return vec![ModeGroup { omega: 2.0 * 0.5 * (max + min), members: (0..self.len()).collect() }];
            }
            return Vec::new();
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&i, &j| self.eps_b[i].total_cmp(&self.eps_b[j]));
        let mut groups: Vec<ModeGroup> = Vec::new();
        for i in order {
            match groups.last_mut() {
                Some(g) if (self.eps_b[i] - self.eps_b[*g.members.last().unwrap()]).abs() <= tol => g.members.push(i),
                _ => groups.push(ModeGroup { omega: 0.0, members: vec![i] }),
            }
        }
        for g in &mut groups {
            g.omega = 2.0 * g.members.iter().map(|&i| self.eps_b[i]).sum::<f64>() / g.members.len() as f64;
        }
        groups.retain(|g| g.omega > 0.0);
        groups
    }
}

/// Kernels split into the dephased mean and one oscillating amplitude per
/// resonant group:
///
/// ```text
/// F_BA(l, t) = mean_l + sum_g U_gl cos(omega_g t),     S_l(t) = sum_g V_gl sin(omega_g t).
/// ```
///
/// Exact at every `t` for a ring. In the thermodynamic limit the
/// non-resonant remainder is dropped, which is exact for infinite-time averages.
#[derive(Clone, Debug)]
pub struct KernelAmplitudes {
    pub mean: MajoranaCorrelations,
    pub omegas: Vec<f64>,
    pub cos_ba: Vec<Vec<f64>>,
    pub sin_aa: Vec<Vec<f64>>,
}

impl KernelAmplitudes {
    pub fn new(table: &ModeTable, max_lag: usize) -> Self {
        let (mean_ba, _) = lag_sums(table, max_lag, None);
        let width = 2 * max_lag + 1;
        let mean = MajoranaCorrelations::from_parts(Evaluation::InfiniteAverage, max_lag, mean_ba, vec![0.0; width]);
        let groups = table.resonant_groups();
        let mut omegas = Vec::with_capacity(groups.len());
        let mut cos_ba = Vec::with_capacity(groups.len());
        let mut sin_aa = Vec::with_capacity(groups.len());
        for g in groups {
            let mut u = vec![0.0; width];
            let mut v = vec![0.0; width];
            for &i in &g.members {
                let amp = table.weight[i] * (2.0 * table.delta[i]).sin();
                let phi = 2.0 * table.theta_b[i];
                for (j, l) in (-(max_lag as i64)..=max_lag as i64).enumerate() {
                    let kl = table.k[i] * l as f64;
                    u[j] += amp * (kl + phi).sin();
                    v[j] += amp * kl.sin();
                }
            }
            omegas.push(g.omega);
            cos_ba.push(u);
            sin_aa.push(v);
        }
        Self { mean, omegas, cos_ba, sin_aa }
    }

    pub fn max_lag(&self) -> usize {
        self.mean.max_lag
    }

    pub fn is_dephased(&self) -> bool {
        self.omegas.is_empty()
    }

    /// `U_gl` for group `g`.
    pub fn u(&self, g: usize, l: i64) -> f64 {
        self.cos_ba[g][self.mean.idx(l)]
    }

    /// `V_gl` for group `g`.
    pub fn v(&self, g: usize, l: i64) -> f64 {
        self.sin_aa[g][self.mean.idx(l)]
    }

    /// Kernels at time `t` rebuilt from the group amplitudes.
    pub fn at(&self, t: f64) -> MajoranaCorrelations {
        let phases: Vec<f64> = self.omegas.iter().map(|w| w * t).collect();
        let mut k = self.at_phases(&phases);
        k.evaluation = Evaluation::Time(t);
        k
    }

    /// Kernels with each group's phase `omega_g t` replaced by an independent
    /// angle, i.e. a point on the torus the time evolution winds around.
    pub fn at_phases(&self, phases: &[f64]) -> MajoranaCorrelations {
        assert_eq!(phases.len(), self.omegas.len());
        let mut ba = self.mean.ba.clone();
        let mut sin = vec![0.0; ba.len()];
        for (g, &phi) in phases.iter().enumerate() {
            let (s, c) = phi.sin_cos();
            for j in 0..ba.len() {
                ba[j] += self.cos_ba[g][j] * c;
                sin[j] += self.sin_aa[g][j] * s;
            }
        }
        MajoranaCorrelations::from_parts(Evaluation::InfiniteAverage, self.mean.max_lag, ba, sin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::build_mode_table;
    use crate::{ChainSpec, QuenchSpec};

    fn table(n: Option<usize>, g: f64, a: f64, b: f64) -> ModeTable {
        let spec = match n {
            Some(n) => ChainSpec::finite(n, g).unwrap(),
            None => ChainSpec::thermodynamic(g).unwrap(),
        };
        build_mode_table(&spec, &QuenchSpec::new(a, b).unwrap()).unwrap()
    }

    #[test]
    fn static_state_is_stationary() {
        let t = table(Some(10), 0.6, 0.7, 0.7);
        let avg = majorana_kernels(&t, Evaluation::InfiniteAverage, 6);
        for &time in &[0.0, 1.3, 17.0] {
            let k = majorana_kernels(&t, Evaluation::Time(time), 6);
            assert!(k.max_deviation(&avg, 6) < 1e-12);
        }
        assert_eq!(avg.f_aa(0), Complex64::new(1.0, 0.0));
        assert_eq!(avg.f_bb(0), Complex64::new(-1.0, 0.0));
        assert_eq!(avg.f_aa(3), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn initial_kernels_do_not_depend_on_final_field() {
        for n in [Some(12), None] {
            let s = majorana_kernels(&table(n, 1.0, 0.4, 0.4), Evaluation::InfiniteAverage, 5);
            for b in [0.0, 1.5, 3.0] {
                let q = majorana_kernels(&table(n, 1.0, 0.4, b), Evaluation::Time(0.0), 5);
                assert!(q.max_deviation(&s, 5) < 1e-12, "b={b}");
            }
        }
    }

    #[test]
    fn kernels_are_bounded() {
        let t = table(Some(14), 0.6, 0.2, 1.4);
        for &time in &[0.0, 0.5, 3.0, 40.0] {
            let k = majorana_kernels(&t, Evaluation::Time(time), 7);
            for l in -7..=7 {
                assert!(k.f_ba(l).abs() <= 1.0 + 1e-12);
                assert!(k.f_aa(l).norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn amplitudes_reproduce_direct_sums() {
        let t = table(Some(10), 1.0, 0.5, 1.5);
        let amp = KernelAmplitudes::new(&t, 4);
        assert_eq!(amp.omegas.len(), 5);
        for &time in &[0.0, 2.2, 9.1] {
            let direct = majorana_kernels(&t, Evaluation::Time(time), 4);
            assert!(amp.at(time).max_deviation(&direct, 4) < 1e-13);
        }
    }

    #[test]
    fn flat_band_keeps_one_resonant_group() {
        let t = table(None, 1.0, 0.5, 0.0);
        let amp = KernelAmplitudes::new(&t, 2);
        assert_eq!(amp.omegas.len(), 1);
        assert!((amp.omegas[0] - 4.0).abs() < 1e-12);
        assert!(KernelAmplitudes::new(&table(None, 1.0, 0.5, 0.3), 2).is_dephased());
    }

    #[test]
    fn thermodynamic_kernels_dephase() {
        let t = table(None, 1.0, 0.5, 1.5);
        let avg = majorana_kernels(&t, Evaluation::InfiniteAverage, 3);
        let devs: Vec<f64> = [1.0, 10.0, 100.0, 1000.0]
            .iter()
            .map(|&time| majorana_kernels(&t, Evaluation::Time(time), 3).max_deviation(&avg, 3))
            .collect();
        for w in devs.windows(2) {
            assert!(w[1] < w[0], "{devs:?}");
        }
        assert!(devs[3] < 1e-3);
    }
}
