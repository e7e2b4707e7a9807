//! dG^z_1/da and dG^x_1/da near a = 1 for several final fields, fitted to
//! |a - 1|^(-mu) and s ln|a - 1| + f on each side.

use xyquench::analysis::{correlator_derivative_scan, fit_log_linear, fit_power_law, log_spaced, Field, DEFAULT_STEP};
use xyquench::{Alpha, ChainSpec};

fn main() -> xyquench::Result<()> {
    let spec = ChainSpec::thermodynamic(1.0)?;
    let window = (1e-3, 1e-1);
    for b in [None, Some(0.0), Some(0.5), Some(1.5)] {
        for (side, sign) in [("a<1", -1.0), ("a>1", 1.0)] {
            let grid = log_spaced(1.0, sign, window.0, window.1, 20);
            let z = correlator_derivative_scan(&spec, Alpha::Z, 1, Field::Initial, b, &grid, DEFAULT_STEP)?;
            let x = correlator_derivative_scan(&spec, Alpha::X, 1, Field::Initial, b, &grid, DEFAULT_STEP)?;
            let zabs: Vec<(f64, f64)> = z.values().into_iter().map(|(a, v)| (a, v.abs())).collect();
            let mu = fit_power_law(&zabs, 1.0, window)?;
            let log = fit_log_linear(&x.values(), 1.0, window)?;
            let label = b.map(|b| format!("b={b}")).unwrap_or_else(|| "static".into());
            println!(
                "{label:<7} {side}: mu = {:.4} (rms {:.3}), s = {:.4} (1/pi = {:.4}), f = {:+.4}",
                mu.mu().unwrap(),
                mu.residual,
                log.slope().unwrap(),
                std::f64::consts::FRAC_1_PI,
                log.intercept().unwrap()
            );
        }
    }
    Ok(())
}
