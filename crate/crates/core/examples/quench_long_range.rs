//! G^x_n up to n = 150 after quenches to b = 0.5 and b = 2, with a decay
//! fit n^(-c1) exp(-c2 n - c0) for the nearly static quench a = 0.4.

use xyquench::analysis::fit_decay;
use xyquench::correlators::{long_range_scan, Method};
use xyquench::{Alpha, ChainSpec, QuenchSpec};

fn main() -> xyquench::Result<()> {
    let spec = ChainSpec::thermodynamic(1.0)?;
    let cases = [(0.5, 0.5), (0.4, 0.5), (0.0, 0.5), (0.0, 2.0), (2.0, 0.5)];
    let mut scans = Vec::new();
    for (a, b) in cases {
        let q = QuenchSpec::new(a, b)?;
        let method = if q.is_static() { Method::Static } else { Method::DeDephased };
        let values: Vec<f64> = long_range_scan(&spec, Alpha::X, &q, 150, method)?
            .into_iter()
            .map(|r| r.map(|c| c.value))
            .collect::<xyquench::Result<_>>()?;
        scans.push(values);
    }
    print!("{:>5}", "n");
    for (a, b) in cases {
        print!(" {:>14}", format!("({a},{b})"));
    }
    println!();
    for n in [1, 2, 5, 10, 20, 50, 100, 150] {
        print!("{n:>5}");
        for s in &scans {
            print!(" {:>14.6e}", s[n - 1]);
        }
        println!();
    }
    let pts: Vec<(f64, f64)> = scans[1].iter().enumerate().map(|(i, g)| ((i + 1) as f64, *g)).collect();
    let fit = fit_decay(&pts, (1.0, 150.0))?;
    let (c0, c1, c2) = fit.decay_constants().unwrap();
    println!("(0.4,0.5): c0 = {c0:.6}, c1 = {c1:.3e}, c2 = {c2:.7}, rms {:.2e}", fit.residual);
    Ok(())
}
