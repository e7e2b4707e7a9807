//! Single-particle dispersion and Bogoliubov angles on a ring of 8 sites.

use xyquench::fermion::build_mode_table;
use xyquench::{ChainSpec, QuenchSpec};

fn main() -> xyquench::Result<()> {
    let spec = ChainSpec::finite(8, 1.0)?;
    let quench = QuenchSpec::new(0.5, 1.5)?;
    let t = build_mode_table(&spec, &quench)?;
    println!("{:>10} {:>10} {:>10} {:>10} {:>10} {:>10}", "k", "eps_a", "eps_b", "theta_a", "theta_b", "delta");
    for i in 0..t.len() {
        println!(
            "{:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            t.k[i], t.eps_a[i], t.eps_b[i], t.theta_a[i], t.theta_b[i], t.delta[i]
        );
    }
    Ok(())
}
