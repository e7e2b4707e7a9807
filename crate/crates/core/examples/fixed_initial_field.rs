//! dG^z_1/db at gamma = 0.6 approaching b = 1 for fixed initial fields,
//! classified as a jump or a divergence.

use xyquench::analysis::{correlator_derivative_scan, detect_discontinuity, log_spaced, Field, DEFAULT_STEP};
use xyquench::{Alpha, ChainSpec};

fn main() -> xyquench::Result<()> {
    let spec = ChainSpec::thermodynamic(0.6)?;
    let mut grid = log_spaced(1.0, -1.0, 1e-5, 1e-1, 1);
    grid.extend(log_spaced(1.0, 1.0, 1e-5, 1e-1, 1));
    for a in [0.0, 0.5, 1.0, 2.0] {
        let s = correlator_derivative_scan(&spec, Alpha::Z, 1, Field::Final, Some(a), &grid, DEFAULT_STEP)?;
        let d = detect_discontinuity(&s, 1.0);
        let values: Vec<String> = s.values().iter().map(|(b, v)| format!("{b:.5}:{v:+.4}")).collect();
        println!("a={a}: {:?}, left {:+.4}, right {:+.4}", d.class, d.left, d.right);
        println!("    {}", values.join(" "));
    }
    Ok(())
}
