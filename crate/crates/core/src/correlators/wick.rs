//! Spin correlators as Pfaffians of Majorana contractions.
//!
//! With `A_j = c_j† + c_j`, `B_j = c_j† - c_j` and the Jordan-Wigner strings
//! cancelling between the two sites,
//!
//! ```text
//! sz_0 sz_n = B_0 A_0 B_n A_n
//! sx_0 sx_n = B_0 A_1 B_1 A_2 ... B_{n-1} A_n
//! sy_0 sy_n = (-1)^n A_0 B_1 A_1 B_2 ... A_{n-1} B_n
//! ```
//!
//! (antiferromagnetic convention). Each is the Pfaffian of the real
//! antisymmetric matrix of pairwise contractions `R`, with
//!
//! ```text
//! R(B_i, A_j) =  G_{j-i}      R(A_i, B_j) = -G_{i-j}
//! R(A_i, A_j) = -S_{j-i}      R(B_i, B_j) =  S_{j-i}
//! ```
//!
//! where `G_l = <B_j A_{j+l}>` and `S_l` is the imaginary part of the
//! `AA`/`BB` kernels (the factors of `i` are absorbed by treating `B` as
//! `iB`). When `S` vanishes the transverse Pfaffians reduce to `n x n`
//! Toeplitz determinants.

use nalgebra::DMatrix;

use crate::fermion::MajoranaCorrelations;
use crate::linalg::{determinant, pfaffian, AntisymmetricMatrix, SignedLog};
use crate::Alpha;

/// Translation-invariant Majorana kernels.
pub(crate) trait Contractions {
    fn g(&self, l: i64) -> f64;
    fn s(&self, l: i64) -> f64;
}

impl Contractions for MajoranaCorrelations {
    fn g(&self, l: i64) -> f64 {
        self.f_ba(l)
    }

    fn s(&self, l: i64) -> f64 {
        MajoranaCorrelations::s(self, l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Majorana {
    A(i64),
    B(i64),
}

fn operator_sequence(alpha: Alpha, site: i64, n: usize) -> Vec<Majorana> {
    let n = n as i64;
    match alpha {
        Alpha::Z => vec![Majorana::B(site), Majorana::A(site), Majorana::B(site + n), Majorana::A(site + n)],
        Alpha::X => (0..n).flat_map(|i| [Majorana::B(site + i), Majorana::A(site + i + 1)]).collect(),
        Alpha::Y => (0..n).flat_map(|i| [Majorana::A(site + i), Majorana::B(site + i + 1)]).collect(),
    }
}

fn contraction<K: Contractions>(k: &K, p: Majorana, q: Majorana) -> f64 {
    match (p, q) {
        (Majorana::B(i), Majorana::A(j)) => k.g(j - i),
        (Majorana::A(i), Majorana::B(j)) => -k.g(i - j),
        (Majorana::A(i), Majorana::A(j)) => -k.s(j - i),
        (Majorana::B(i), Majorana::B(j)) => k.s(j - i),
    }
}

/// Contraction matrix of `<s^α_site s^α_{site+n}>`.
pub(crate) fn contraction_matrix<K: Contractions>(alpha: Alpha, site: i64, n: usize, k: &K) -> AntisymmetricMatrix {
    let ops = operator_sequence(alpha, site, n);
    let mut m = AntisymmetricMatrix::zeros(ops.len());
    for p in 0..ops.len() {
        for q in p + 1..ops.len() {
            m.set(p, q, contraction(k, ops[p], ops[q]));
        }
    }
    debug_assert!(m.is_antisymmetric());
    m
}

fn sequence_sign(alpha: Alpha, n: usize) -> f64 {
    if alpha == Alpha::Y && n % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `<s^α_site s^α_{site+n}>` in the antiferromagnetic convention, as sign and log-magnitude.
pub(crate) fn correlator_log<K: Contractions>(alpha: Alpha, site: i64, n: usize, k: &K) -> SignedLog {
    let mut pf = pfaffian(&contraction_matrix(alpha, site, n, k));
    pf.sign *= sequence_sign(alpha, n);
    pf
}

pub(crate) fn correlator<K: Contractions>(alpha: Alpha, site: i64, n: usize, k: &K) -> f64 {
    correlator_log(alpha, site, n, k).value()
}

/// Transverse correlator for kernels with `S ≡ 0`:
/// `G^x_n = det[G_{j+1-i}]`, `G^y_n = det[G_{i-j-1}]`, `i, j = 0..n`.
pub(crate) fn transverse_toeplitz<K: Contractions>(alpha: Alpha, n: usize, k: &K) -> SignedLog {
    let t = match alpha {
        Alpha::X => DMatrix::from_fn(n, n, |i, j| k.g(j as i64 + 1 - i as i64)),
        Alpha::Y => DMatrix::from_fn(n, n, |i, j| k.g(i as i64 - j as i64 - 1)),
        Alpha::Z => panic!("G^z is not a Toeplitz determinant"),
    };
    determinant(&t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::{build_mode_table, majorana_kernels, Evaluation};
    use crate::{ChainSpec, QuenchSpec};

    fn kernels(a: f64, b: f64, eval: Evaluation, lag: usize) -> MajoranaCorrelations {
        let spec = ChainSpec::finite(12, 0.6).unwrap();
        let t = build_mode_table(&spec, &QuenchSpec::new(a, b).unwrap()).unwrap();
        majorana_kernels(&t, eval, lag)
    }

    #[test]
    fn z_pfaffian_matches_two_by_two_wick() {
        let k = kernels(0.3, 1.4, Evaluation::Time(2.3), 5);
        for n in 1..5 {
            let want = k.g(0).powi(2) - k.g(n) * k.g(-n) + k.s(n).powi(2);
            assert!((correlator(Alpha::Z, 0, n as usize, &k) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn toeplitz_reduction_without_s() {
        let k = kernels(0.3, 1.4, Evaluation::InfiniteAverage, 8);
        for alpha in [Alpha::X, Alpha::Y] {
            for n in 1..8 {
                let pf = correlator(alpha, 0, n, &k);
                let det = transverse_toeplitz(alpha, n, &k).value();
                assert!((pf - det).abs() < 1e-13, "{alpha} n={n}: {pf} vs {det}");
            }
        }
    }

    #[test]
    fn site_offset_does_not_matter() {
        let k = kernels(0.3, 1.4, Evaluation::Time(0.9), 6);
        for alpha in Alpha::ALL {
            let base = correlator(alpha, 0, 4, &k);
            for site in [1, 5, -3] {
                assert!((correlator(alpha, site, 4, &k) - base).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        let k = kernels(0.3, 1.4, Evaluation::Time(5.0), 6);
        for alpha in Alpha::ALL {
            let m = contraction_matrix(alpha, 0, 6, &k);
            let pf = pfaffian(&m);
            let det = determinant(&m.to_dmatrix());
            assert!((2.0 * pf.log_abs - det.log_abs).abs() < 1e-8);
        }
    }
}
