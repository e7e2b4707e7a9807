//! Infinite-time averages of Wick functionals.
//!
//! After the quench the kernels are `G_l(t) = Ḡ_l + sum_g U_gl cos(ω_g t)` and
//! `S_l(t) = sum_g V_gl sin(ω_g t)`, one term per group of degenerate mode
//! energies. A correlator is a polynomial in these, so its time average
//! keeps every product whose frequencies cancel.
//!
//! * `G^z` is quadratic: cross terms between distinct groups dephase and the
//!   average is closed-form.
//! * `G^x`, `G^y` have degree `n`. Treating the phases `ω_g t` as independent
//!   angles, the average over the torus is exact on a product grid of
//!   `n + 1` points per angle. Integer relations `m·ω = 0` between group
//!   frequencies (resonances) make extra Fourier modes survive; those are
//!   picked up on a `2n + 1` grid. When the grid is too large the Pfaffian
//!   of the dephased kernels is returned and flagged inexact.

use rayon::prelude::*;

use super::wick::{correlator, transverse_toeplitz, Contractions};
use crate::fermion::KernelAmplitudes;
use crate::Alpha;

/// Upper bound on `grid points x (2n)^3` for the exact torus average.
const TORUS_BUDGET: f64 = 4e9;

/// Chunk size for deterministic parallel summation.
const CHUNK: usize = 512;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Average {
    pub value: f64,
    pub residual: f64,
    pub exact: bool,
}

pub(crate) fn dephased_average(alpha: Alpha, n: usize, amp: &KernelAmplitudes) -> Average {
    let mean = &amp.mean;
    match alpha {
        Alpha::Z => {
            let l = n as i64;
            let mut value = mean.g(0).powi(2) - mean.g(l) * mean.g(-l);
            for g in 0..amp.omegas.len() {
                value += 0.5 * (amp.u(g, 0).powi(2) - amp.u(g, l) * amp.u(g, -l) + amp.v(g, l).powi(2));
            }
            Average { value, residual: 0.0, exact: true }
        }
        _ if amp.is_dephased() => {
            Average { value: transverse_toeplitz(alpha, n, mean).value(), residual: 0.0, exact: true }
        }
        _ => match torus_average(alpha, n, amp) {
            Some(value) => Average { value, residual: 0.0, exact: true },
            None => Average {
                value: transverse_toeplitz(alpha, n, mean).value(),
                residual: oscillation_estimate(n, amp),
                exact: false,
            },
        },
    }
}

/// Rough size of what the dephased Pfaffian leaves out: oscillating
/// amplitudes enter at second order, up to `n` times.
fn oscillation_estimate(n: usize, amp: &KernelAmplitudes) -> f64 {
    let lag = n.min(amp.max_lag()) as i64;
    let mut total = 0.0;
    for g in 0..amp.omegas.len() {
        let peak = (-lag..=lag).map(|l| amp.u(g, l).abs().max(amp.v(g, l).abs())).fold(0.0, f64::max);
        total += peak * peak;
    }
    n as f64 * total
}

/// Nonzero integer vectors `m` (one representative per `±m`) with
/// `sum |m_g| <= order` and `|m·ω| ≈ 0`.
pub(crate) fn resonances(omegas: &[f64], order: usize) -> Vec<Vec<i32>> {
    let scale = omegas.iter().cloned().fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    let mut out = Vec::new();
    let mut m = vec![0i32; omegas.len()];
    fn walk(g: usize, budget: i32, m: &mut Vec<i32>, omegas: &[f64], tol: f64, out: &mut Vec<Vec<i32>>) {
        if g == m.len() {
            let first = m.iter().find(|&&x| x != 0);
            if matches!(first, Some(&x) if x > 0) {
                let w: f64 = m.iter().zip(omegas).map(|(&k, w)| k as f64 * w).sum();
                if w.abs() < tol {
                    out.push(m.clone());
                }
            }
            return;
        }
        for k in -budget..=budget {
            m[g] = k;
            walk(g + 1, budget - k.abs(), m, omegas, tol, out);
        }
        m[g] = 0;
    }
    walk(0, order as i32, &mut m, omegas, tol, &mut out);
    out
}

fn torus_average(alpha: Alpha, n: usize, amp: &KernelAmplitudes) -> Option<f64> {
    let groups = amp.omegas.len();
    // polynomial degree in each cos/sin pair, and Pfaffian size
    let (degree, dim) = match alpha {
        Alpha::Z => (2, 4),
        _ => (n, 2 * n),
    };
    let res = resonances(&amp.omegas, degree);
    let per_axis = if res.is_empty() { degree + 1 } else { 2 * degree + 1 };
    let points = (per_axis as f64).powi(groups as i32);
    if points * (dim as f64).powi(3) > TORUS_BUDGET {
        return None;
    }
    let points = points as usize;
    let step = 2.0 * std::f64::consts::PI / per_axis as f64;
    let eval = |index: usize| -> Vec<f64> {
        let mut rest = index;
        let digits: Vec<usize> = (0..groups)
            .map(|_| {
                let d = rest % per_axis;
                rest /= per_axis;
                d
            })
            .collect();
        let phases: Vec<f64> = digits.iter().map(|&d| d as f64 * step).collect();
        let f = correlator(alpha, 0, n, &amp.at_phases(&phases));
        let mut row = Vec::with_capacity(1 + res.len());
        row.push(f);
        for m in &res {
            let arg: f64 = m.iter().zip(&phases).map(|(&k, p)| k as f64 * p).sum();
            row.push(2.0 * f * arg.cos());
        }
        row
    };
    let chunks: Vec<Vec<f64>> = (0..points.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; 1 + res.len()];
            for i in c * CHUNK..((c + 1) * CHUNK).min(points) {
                for (a, v) in acc.iter_mut().zip(eval(i)) {
                    *a += v;
                }
            }
            acc
        })
        .collect();
    let total: f64 = chunks.iter().flat_map(|c| c.iter()).sum();
    Some(total / points as f64)
}

/// Time average of `f` on equally spaced samples, doubling the horizon
/// until the averages over `[0, T]` and `[0, 2T]` agree within `tol`.
/// Returns `(value, residual, horizon)`, or `Err` with the same triple
/// when `max_horizon` is reached first.
pub(crate) fn sampled_average<F>(f: F, dt: f64, initial_samples: usize, tol: f64, max_horizon: f64) -> Result<(f64, f64, f64), (f64, f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    let block = |from: usize, to: usize| -> f64 {
        let parts: Vec<f64> = (from..to)
            .step_by(CHUNK)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|s| (s..(s + CHUNK).min(to)).map(|i| f((i as f64 + 0.5) * dt)).sum::<f64>())
            .collect();
        parts.iter().sum()
    };
    let mut count = initial_samples.max(1);
    let mut sum = block(0, count);
    loop {
        let doubled = sum + block(count, 2 * count);
        let (short, long) = (sum / count as f64, doubled / (2 * count) as f64);
        let residual = (long - short).abs();
        let horizon = 2.0 * count as f64 * dt;
        if residual < tol {
            return Ok((long, residual, horizon));
        }
        if 4.0 * count as f64 * dt > max_horizon {
            return Err((long, residual, horizon));
        }
        sum = doubled;
        count *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::build_mode_table;
    use crate::{ChainSpec, QuenchSpec};

    fn amplitudes(n: usize, g: f64, a: f64, b: f64, lag: usize) -> KernelAmplitudes {
        let spec = ChainSpec::finite(n, g).unwrap();
        KernelAmplitudes::new(&build_mode_table(&spec, &QuenchSpec::new(a, b).unwrap()).unwrap(), lag)
    }

    #[test]
    fn closed_form_z_matches_torus() {
        let amp = amplitudes(10, 1.0, 0.5, 1.5, 3);
        for n in 1..4 {
            let closed = dephased_average(Alpha::Z, n, &amp).value;
            let torus = torus_average(Alpha::Z, n, &amp).unwrap();
            assert!((closed - torus).abs() < 1e-13, "{closed} vs {torus}");
        }
    }

    #[test]
    fn resonance_search() {
        assert!(resonances(&[1.0, 2.0_f64.sqrt()], 4).is_empty());
        assert_eq!(resonances(&[1.0, 2.0], 3), vec![vec![2, -1]]);
        assert!(resonances(&[1.0, 2.0, 3.0], 2).is_empty());
        assert_eq!(resonances(&[1.0, 2.0, 3.0], 3), vec![vec![1, 1, -1], vec![2, -1, 0]]);
    }

    #[test]
    fn sampled_average_of_a_cosine() {
        let (v, r, _) = sampled_average(|t| 0.3 + (1.7 * t).cos(), 0.1, 256, 1e-4, 1e6).unwrap();
        assert!((v - 0.3).abs() < 1e-3);
        assert!(r < 1e-4);
        assert!(sampled_average(|t| (1e-4 * t).cos(), 0.1, 16, 1e-12, 100.0).is_err());
    }
}
