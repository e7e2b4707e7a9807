//! Ground-state correlators in the thermodynamic limit, and the square
//! root of G^x_n at large n against (1 - h^2)^(1/8).

use xyquench::correlators::{static_correlator, transverse_magnetization_x};
use xyquench::{Alpha, ChainSpec, QuenchSpec};

fn main() -> xyquench::Result<()> {
    let spec = ChainSpec::thermodynamic(1.0)?;
    for h in [0.3, 0.7, 1.0, 1.5] {
        let row: Vec<String> = Alpha::ALL
            .iter()
            .flat_map(|&alpha| [1, 4].map(move |n| (alpha, n)))
            .map(|(alpha, n)| {
                let c = static_correlator(alpha, n, h, &spec).unwrap();
                format!("G{alpha}_{n}={:+.6}", c.value)
            })
            .collect();
        println!("h={h:<4} {}", row.join("  "));
    }
    for h in [0.2, 0.5, 0.8] {
        let m = transverse_magnetization_x(&spec, &QuenchSpec::fixed(h)?, 100)?;
        println!("h={h}: sqrt|G^x_100| = {:.8}, (1-h^2)^(1/8) = {:.8}", m.value, (1.0 - h * h).powf(0.125));
    }
    Ok(())
}
