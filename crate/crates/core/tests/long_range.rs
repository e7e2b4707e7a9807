//! Long-distance behaviour of G^x_n after a quench in the thermodynamic limit.

use xyquench::analysis::fit_decay;
use xyquench::correlators::{long_range_scan, transverse_magnetization_x, Method};
use xyquench::fermion::build_mode_table;
use xyquench::{Alpha, ChainSpec, QuenchSpec};

fn decay_constants(a: f64, b: f64) -> (f64, f64, f64) {
    let spec = ChainSpec::thermodynamic(1.0).unwrap();
    let q = QuenchSpec::new(a, b).unwrap();
    let pts: Vec<(f64, f64)> = long_range_scan(&spec, Alpha::X, &q, 150, Method::DeDephased)
        .unwrap()
        .into_iter()
        .map(|r| r.map(|c| (c.n as f64, c.value)).unwrap())
        .collect();
    fit_decay(&pts, (1.0, 150.0)).unwrap().decay_constants().unwrap()
}

/// Asymptotic decay rate `-(1/π) ∫_0^π ln|cos 2Δ_k| dk` of the dephased
/// Toeplitz determinant (Szegő).
fn szego_rate(a: f64, b: f64) -> f64 {
    let spec = ChainSpec::thermodynamic_with_nodes(1.0, 1 << 14).unwrap();
    let t = build_mode_table(&spec, &QuenchSpec::new(a, b).unwrap()).unwrap();
    -t.delta.iter().zip(&t.weight).map(|(d, w)| w * (2.0 * d).cos().abs().ln()).sum::<f64>()
}

#[test]
fn decay_rate_matches_the_szego_limit() {
    for (a, b) in [(0.4, 0.5), (0.45, 0.5)] {
        let (_, c1, c2) = decay_constants(a, b);
        let rate = szego_rate(a, b);
        assert!((c2 - rate).abs() <= 0.01 * rate, "({a},{b}): c2 {c2} vs {rate}");
        assert!(c1.abs() <= 1e-3, "c1 {c1}");
    }
}

#[test]
fn published_fit_constants_read_as_offset_and_rate_swapped() {
    // n^(-c1) e^(-A n - B) with (A, B) = (0.074916, 0.0031414) and (0.07259538, 0.00080686)
    for ((a, b), (slope, offset)) in [((0.4, 0.5), (0.074916, 0.0031414)), ((0.45, 0.5), (0.07259538, 0.00080686))] {
        let (c0, _, c2) = decay_constants(a, b);
        assert!((c2 - offset).abs() <= 0.01 * offset, "({a},{b}): rate {c2} vs {offset}");
        assert!((c0 - slope).abs() <= 0.1 * slope, "({a},{b}): offset {c0} vs {slope}");
    }
}

#[test]
fn quench_destroys_transverse_order() {
    let spec = ChainSpec::thermodynamic(1.0).unwrap();
    let ordered = transverse_magnetization_x(&spec, &QuenchSpec::fixed(0.5).unwrap(), 150).unwrap();
    assert!((ordered.value - 0.75f64.powf(0.125)).abs() < 1e-6, "{}", ordered.value);
    for (a, b) in [(0.0, 2.0), (0.5, 2.0), (0.2, 0.5)] {
        let m = transverse_magnetization_x(&spec, &QuenchSpec::new(a, b).unwrap(), 150).unwrap();
        assert_eq!(m.value, 0.0, "({a},{b})");
        assert!(m.conclusive);
    }
}
