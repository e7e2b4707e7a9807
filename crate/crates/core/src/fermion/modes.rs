use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use super::quadrature::{refine, MomentumGrid, QUADRATURE_TOLERANCE};
use crate::{ChainSpec, Error, QuenchSpec, Result};

/// Single-particle energy `eps_k(h) = 2 sqrt((h - cos k)^2 + g^2 sin^2 k)`.
pub fn dispersion(k: f64, h: f64, gamma: f64) -> f64 {
    2.0 * (h - k.cos()).hypot(gamma * k.sin())
}

/// Bogoliubov angle with `tan 2θ = g sin k / (h - cos k)` and the branch
/// fixed by `cos 2θ = (h - cos k) / (eps_k / 2)`; `θ ∈ (-π/2, π/2]`.
///
/// At a gapless point with `g > 0` the angle is the limit approached from
/// inside the Brillouin zone, `π/4`. For `g = 0` the limit does not exist.
pub fn bogoliubov_angle(k: f64, h: f64, gamma: f64) -> Result<f64> {
    let x = h - k.cos();
    let y = gamma * k.sin();
    if x == 0.0 && y == 0.0 {
        let at_band_touching = k.sin() == 0.0 || (k.abs() - std::f64::consts::PI).abs() < 1e-300;
        if gamma > 0.0 && at_band_touching {
            return Ok(FRAC_PI_4);
        }
        return Err(Error::DegenerateMode { k, field: h });
    }
    Ok(0.5 * y.atan2(x))
}

/// Dispersion and Bogoliubov angles of both fields on one momentum grid.
#[derive(Clone, Debug, Serialize)]
pub struct ModeTable {
    #[serde(skip)]
    pub spec: ChainSpec,
    #[serde(skip)]
    pub quench: QuenchSpec,
    pub k: Vec<f64>,
    pub weight: Vec<f64>,
    pub eps_a: Vec<f64>,
    pub eps_b: Vec<f64>,
    pub theta_a: Vec<f64>,
    pub theta_b: Vec<f64>,
    /// `θ_k(b) - θ_k(a)`.
    pub delta: Vec<f64>,
}

impl ModeTable {
    pub fn on_grid(spec: &ChainSpec, quench: &QuenchSpec, grid: MomentumGrid) -> Result<Self> {
        let g = spec.gamma();
        let (a, b) = (quench.initial, quench.final_field);
        let n = grid.len();
        let mut t = ModeTable {
            spec: *spec,
            quench: *quench,
            k: grid.k,
            weight: grid.weight,
            eps_a: Vec::with_capacity(n),
            eps_b: Vec::with_capacity(n),
            theta_a: Vec::with_capacity(n),
            theta_b: Vec::with_capacity(n),
            delta: Vec::with_capacity(n),
        };
        for &k in &t.k {
            let ta = bogoliubov_angle(k, a, g)?;
            let tb = if quench.is_static() { ta } else { bogoliubov_angle(k, b, g)? };
            t.eps_a.push(dispersion(k, a, g));
            t.eps_b.push(dispersion(k, b, g));
            t.theta_a.push(ta);
            t.theta_b.push(tb);
            t.delta.push(tb - ta);
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn max_eps_b(&self) -> f64 {
        self.eps_b.iter().cloned().fold(0.0, f64::max)
    }
}

/// Mode table on the spec's native grid: all `N` even-sector momenta for a
/// ring, Gauss-Legendre nodes on `(0, π)` in the thermodynamic limit.
pub fn build_mode_table(spec: &ChainSpec, quench: &QuenchSpec) -> Result<ModeTable> {
    ModeTable::on_grid(spec, quench, MomentumGrid::for_size(spec.size()))
}

/// Infinite-time average of `<sz_j>` after the quench.
///
/// `<sz_j(t)> = <B_j A_j>` is linear in the oscillating mode occupations,
/// so its average is the dephased mode sum `sum_k w_k cos 2Δ_k cos 2θ_k(b)`.
pub fn magnetization_z_de(spec: &ChainSpec, quench: &QuenchSpec) -> Result<f64> {
    let (value, _, _) = refine(spec, QUADRATURE_TOLERANCE, |s| {
        let t = build_mode_table(s, quench)?;
        Ok((0..t.len())
            .map(|i| t.weight[i] * (2.0 * t.delta[i]).cos() * (2.0 * t.theta_b[i]).cos())
            .sum())
    })?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn dispersion_values() {
        assert_eq!(dispersion(0.0, 1.0, 1.0), 0.0);
        assert!((dispersion(FRAC_PI_2, 0.0, 1.0) - 2.0).abs() < 1e-15);
        // gap closes only at the band-touching momentum
        assert!(dispersion(0.3, 1.0, 1.0) > 0.0);
        assert!(dispersion(PI, -1.0, 0.6).abs() < 1e-15);
    }

    #[test]
    fn angle_values() {
        assert_eq!(bogoliubov_angle(0.7, 2.0, 0.0).unwrap(), 0.0);
        assert_eq!(bogoliubov_angle(0.0, 1.5, 0.6).unwrap(), 0.0);
        assert!((bogoliubov_angle(FRAC_PI_2, 0.0, 1.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((bogoliubov_angle(0.0, 1.0, 1.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!(matches!(bogoliubov_angle(0.0, 1.0, 0.0), Err(Error::DegenerateMode { .. })));
        // continuity towards the gapless point from inside the zone
        let near = bogoliubov_angle(1e-7, 1.0, 1.0).unwrap();
        assert!((near - FRAC_PI_4).abs() < 1e-6);
    }

    #[test]
    fn angle_is_odd_and_in_range() {
        for &h in &[-1.7, -0.4, 0.0, 0.5, 1.3] {
            for i in 1..50 {
                let k = i as f64 * PI / 50.0 - 1e-3;
                let p = bogoliubov_angle(k, h, 0.6).unwrap();
                let m = bogoliubov_angle(-k, h, 0.6).unwrap();
                assert!((p + m).abs() < 1e-14);
                assert!(p > -FRAC_PI_2 && p <= FRAC_PI_2);
                let e = dispersion(k, h, 0.6);
                assert!(((2.0 * p).cos() - (h - k.cos()) / (e / 2.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mode_table_sector_and_symmetry() {
        let spec = ChainSpec::finite(8, 1.0).unwrap();
        let t = build_mode_table(&spec, &QuenchSpec::new(0.5, 1.5).unwrap()).unwrap();
        assert_eq!(t.len(), 8);
        for i in 0..8 {
            let j = 7 - i;
            assert!((t.k[i] + t.k[j]).abs() < 1e-15);
            assert!((t.eps_b[i] - t.eps_b[j]).abs() < 1e-14);
            assert!((t.theta_a[i] + t.theta_a[j]).abs() < 1e-14);
            assert!(t.eps_a[i] > 0.0);
        }
        let s = build_mode_table(&spec, &QuenchSpec::fixed(0.3).unwrap()).unwrap();
        assert!(s.delta.iter().all(|d| *d == 0.0));
    }

    #[test]
    fn quench_angle_interpolates_monotonically() {
        // a = 0 to b = 2 on the Ising line: 2θ_k(0) = π - k, so cos 2Δ_k = -cos(k + 2θ_k(2)).
        let spec = ChainSpec::finite(16, 1.0).unwrap();
        let t = build_mode_table(&spec, &QuenchSpec::new(0.0, 2.0).unwrap()).unwrap();
        let mut pts: Vec<(f64, f64)> = (0..t.len()).filter(|&i| t.k[i] > 0.0).map(|i| (t.k[i], (2.0 * t.delta[i]).cos())).collect();
        pts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        for w in pts.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
        for i in 0..t.len() {
            let expect = -(t.k[i] + 2.0 * t.theta_b[i]).cos();
            assert!(((2.0 * t.delta[i]).cos() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn min_gap_closes_at_criticality() {
        let coarse = ChainSpec::thermodynamic_with_nodes(1.0, 512).unwrap();
        let fine = ChainSpec::thermodynamic_with_nodes(1.0, 4096).unwrap();
        let q = QuenchSpec::fixed(1.0).unwrap();
        let m1 = build_mode_table(&coarse, &q).unwrap().eps_a.iter().cloned().fold(f64::MAX, f64::min);
        let m2 = build_mode_table(&fine, &q).unwrap().eps_a.iter().cloned().fold(f64::MAX, f64::min);
        assert!(m2 < m1 && m2 < 1e-5);
    }

    #[test]
    fn magnetization_limits() {
        let spec = ChainSpec::thermodynamic(1.0).unwrap();
        let polar = magnetization_z_de(&spec, &QuenchSpec::new(50.0, 0.7).unwrap()).unwrap();
        // initial state polarised along z; the dephased average keeps cos 2θ_b weight
        assert!(polar > 0.0 && polar <= 1.0);
        let strong = magnetization_z_de(&spec, &QuenchSpec::fixed(50.0).unwrap()).unwrap();
        assert!((strong - 1.0).abs() < 1e-3);
    }
}
