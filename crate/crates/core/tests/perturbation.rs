//! Perturbative derivative formulas against finite differences of exact values.

use xyquench::ed::{
    diagonal_ensemble_expectation, pt_derivative_quench_final, pt_derivative_quench_initial, pt_derivative_static,
    static_expectation, ObservableSpec, QuenchOracle,
};
use xyquench::{Alpha, ChainSpec, QuenchSpec};

const H: f64 = 1e-4;

fn zz1() -> ObservableSpec {
    ObservableSpec::pair(Alpha::Z, 1)
}

fn central<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    (f(x + H) - f(x - H)) / (2.0 * H)
}

#[test]
fn static_formula() {
    let spec = ChainSpec::finite(8, 1.0).unwrap();
    let pt = pt_derivative_static(&spec, 0.5, &zz1()).unwrap();
    let fd = central(|a| static_expectation(&spec, a, &zz1()).unwrap(), 0.5);
    assert!((pt - fd).abs() <= 1e-6 * pt.abs(), "{pt} vs {fd}");
}

#[test]
fn static_derivative_grows_towards_criticality() {
    let spec = ChainSpec::finite(8, 1.0).unwrap();
    let far = ObservableSpec::pair(Alpha::X, 4);
    let d: Vec<f64> = [0.8, 0.9, 0.95].iter().map(|&a| pt_derivative_static(&spec, a, &far).unwrap().abs()).collect();
    assert!(d[0] < d[1] && d[1] < d[2], "{d:?}");
}

#[test]
fn initial_field_formula() {
    let spec = ChainSpec::finite(8, 1.0).unwrap();
    for obs in [zz1(), ObservableSpec::pair(Alpha::X, 2), ObservableSpec::MagnetizationZ] {
        let pt = pt_derivative_quench_initial(&spec, 0.5, 1.5, &obs).unwrap();
        let fd = central(|a| diagonal_ensemble_expectation(&spec, a, 1.5, &obs).unwrap(), 0.5);
        assert!((pt - fd).abs() <= 1e-5 * pt.abs().max(1e-3), "{obs:?}: {pt} vs {fd}");
    }
}

#[test]
fn initial_field_formula_at_the_critical_identity_quench() {
    let spec = ChainSpec::finite(8, 1.0).unwrap();
    let o = QuenchOracle::new(&spec, &QuenchSpec::fixed(1.0).unwrap()).unwrap();
    let d = o.derivative_initial(&zz1()).unwrap();
    // psi = phi: every overlap <phi_n|psi_m> with m != 0 vanishes against
    // the projected observable, so the sum is identically zero
    assert!(d.abs() < 1e-10, "{d}");
    let fd = central(|a| diagonal_ensemble_expectation(&spec, a, 1.0, &zz1()).unwrap(), 1.0);
    assert!(fd.abs() < 1e-6, "{fd}");
}

#[test]
fn initial_field_derivative_at_criticality_grows_with_size() {
    let d: Vec<f64> = [6, 8, 10]
        .iter()
        .map(|&n| pt_derivative_quench_initial(&ChainSpec::finite(n, 1.0).unwrap(), 1.0, 1.5, &zz1()).unwrap().abs())
        .collect();
    assert!(d[0] < d[1] && d[1] < d[2], "{d:?}");
}

#[test]
fn final_field_formula() {
    let spec = ChainSpec::finite(8, 0.6).unwrap();
    let pt = pt_derivative_quench_final(&spec, 0.5, 0.7, &zz1()).unwrap();
    assert!(!pt.warning, "degenerate weight {}", pt.degenerate_pair_weight);
    let fd = central(|b| diagonal_ensemble_expectation(&spec, 0.5, b, &zz1()).unwrap(), 0.7);
    assert!((pt.value - fd).abs() <= 1e-4 * pt.value.abs(), "{} vs {fd}", pt.value);
}

#[test]
fn final_field_formula_collapses_to_static_at_criticality() {
    let spec = ChainSpec::finite(8, 0.6).unwrap();
    let o = QuenchOracle::new(&spec, &QuenchSpec::fixed(1.0).unwrap()).unwrap();
    let collapse = o.derivative_final(&zz1()).unwrap().value;
    let static_slope = o.derivative_static(&zz1()).unwrap();
    assert!((collapse - static_slope).abs() < 1e-10, "{collapse} vs {static_slope}");
}

#[test]
fn final_field_peak_grows_with_size() {
    let peak = |n: usize| {
        let spec = ChainSpec::finite(n, 0.6).unwrap();
        pt_derivative_quench_final(&spec, 1.0, 1.0, &zz1()).unwrap().value.abs()
    };
    let d = [peak(6), peak(8), peak(10)];
    assert!(d[0] < d[1] && d[1] < d[2], "{d:?}");
}

#[test]
fn direct_time_average_matches_diagonal_ensemble() {
    let spec = ChainSpec::finite(10, 1.0).unwrap();
    let o = QuenchOracle::new(&spec, &QuenchSpec::new(0.5, 1.5).unwrap()).unwrap();
    let ts = o.time_series(&zz1()).unwrap();
    let de = o.diagonal_ensemble(&zz1()).unwrap();
    let sampled = ts.sampled_average(1e4, 100_000);
    assert!((sampled - de).abs() < 1e-3, "{sampled} vs {de}");
    // horizon rule: slowest beat resolved
    let spacing = o.minimal_spacing().unwrap();
    let horizon = 100.0 / spacing;
    assert!((ts.running_average(horizon) - de).abs() < 1e-2);
    let errs: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&t| (ts.running_average(t) - ts.running_average(2.0 * t)).abs()).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}
