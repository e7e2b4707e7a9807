//! First-order derivative formulas on an 8-site ring against central
//! differences of exact expectation values.

use xyquench::analysis::richardson;
use xyquench::ed::{
    diagonal_ensemble_expectation, pt_derivative_quench_final, pt_derivative_quench_initial, pt_derivative_static,
    static_expectation, ObservableSpec,
};
use xyquench::{Alpha, ChainSpec};

fn main() -> xyquench::Result<()> {
    let spec = ChainSpec::finite(8, 1.0)?;
    let obs = ObservableSpec::pair(Alpha::Z, 1);
    let (a, b) = (0.5, 1.5);

    let pt = pt_derivative_static(&spec, a, &obs)?;
    let (fd, _) = richardson(|x| static_expectation(&spec, x, &obs), a, 1e-3)?;
    println!("d<A>/dh static at h = {a}:   formula {pt:+.10}  difference {fd:+.10}");

    let pt = pt_derivative_quench_initial(&spec, a, b, &obs)?;
    let (fd, _) = richardson(|x| diagonal_ensemble_expectation(&spec, x, b, &obs), a, 1e-3)?;
    println!("d<A(a,b)>/da at ({a},{b}):   formula {pt:+.10}  difference {fd:+.10}");

    let pt = pt_derivative_quench_final(&spec, a, b, &obs)?;
    let (fd, _) = richardson(|x| diagonal_ensemble_expectation(&spec, a, x, &obs), b, 1e-3)?;
    println!("d<A(a,b)>/db at ({a},{b}):   formula {:+.10}  difference {fd:+.10}", pt.value);

    for n in [6, 8, 10, 12] {
        let s = ChainSpec::finite(n, 1.0)?;
        let fin = pt_derivative_quench_final(&s, 1.0, 1.0, &obs)?.value;
        let st = pt_derivative_static(&s, 1.0, &obs)?;
        println!("N={n:<2} d<A(1,b)>/db at b = 1: {fin:+.8}  static d<A>/dh: {st:+.8}");
    }
    Ok(())
}
