//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so that every line is printed whether
//! or not the criterion holds. Red criteria are reported, not fatal, so
//! that later test targets still run; set `XYQUENCH_ACCEPTANCE_STRICT=1`
//! to exit nonzero when any criterion fails.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xyquench::analysis::{
    correlator_derivative_scan, detect_discontinuity, fit_decay, fit_log_linear, fit_power_law, Classification,
    DerivativeSeries, Field, FitResult, DEFAULT_STEP,
};
use xyquench::cli::{decade_axis, scaling_axis, DEFAULT_SCALING_WINDOW};
use xyquench::correlators::{long_range_scan, quench_correlator, CorrelatorRequest, Method, TimeControls};
use xyquench::ed::{
    diagonal_ensemble_expectation, pt_derivative_quench_final, pt_derivative_quench_initial, pt_derivative_static,
    static_expectation, ObservableSpec, QuenchOracle,
};
use xyquench::linalg::{determinant, pfaffian, AntisymmetricMatrix};
use xyquench::{Alpha, ChainSpec, Gauge, QuenchSpec, Result};

const SIDES: [(&str, f64); 2] = [("left", -1.0), ("right", 1.0)];
const QUENCH_FINAL_FIELDS: [f64; 3] = [0.0, 0.5, 1.5];

struct Verdict {
    pass: bool,
    detail: String,
}

fn report(id: usize, title: &str, outcome: Result<Verdict>) -> bool {
    let (pass, detail) = match outcome {
        Ok(v) => (v.pass, v.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!("AC{id} {}: {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn tl(gamma: f64) -> ChainSpec {
    ChainSpec::thermodynamic(gamma).unwrap()
}

fn one_side(series: &DerivativeSeries, sign: f64) -> Vec<(f64, f64)> {
    series.values().into_iter().filter(|(x, _)| (x - 1.0) * sign > 0.0).collect()
}

fn scan(alpha: Alpha, b: f64) -> Result<DerivativeSeries> {
    correlator_derivative_scan(&tl(1.0), alpha, 1, Field::Initial, Some(b), &scaling_axis(), DEFAULT_STEP)
}

fn max_pairwise(v: &[f64]) -> f64 {
    let mut m = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            m = m.max((v[i] - v[j]).abs());
        }
    }
    m
}

fn ac1() -> Result<Verdict> {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut by_side: Vec<Vec<f64>> = vec![Vec::new(), Vec::new()];
    for b in QUENCH_FINAL_FIELDS {
        let series = scan(Alpha::Z, b)?;
        for (i, (name, sign)) in SIDES.iter().enumerate() {
            let pts: Vec<(f64, f64)> = one_side(&series, *sign).into_iter().map(|(x, y)| (x, y.abs())).collect();
            let mu = fit_power_law(&pts, 1.0, DEFAULT_SCALING_WINDOW)?.mu().unwrap();
            pass &= (mu - 0.25).abs() <= 0.03;
            by_side[i].push(mu);
            parts.push(format!("b={b} {name} mu={mu:.4}"));
        }
    }
    let spread = by_side.iter().map(|v| max_pairwise(v)).fold(0.0, f64::max);
    pass &= spread <= 0.01;
    Ok(Verdict { pass, detail: format!("{}; max pairwise spread {spread:.4} (need mu = 0.25 ± 0.03, spread <= 0.01)", parts.join(", ")) })
}

fn ac2() -> Result<Verdict> {
    let target = std::f64::consts::FRAC_1_PI;
    let mut pass = true;
    let mut parts = Vec::new();
    let mut intercepts: Vec<Vec<f64>> = vec![Vec::new(), Vec::new()];
    for b in QUENCH_FINAL_FIELDS {
        let series = scan(Alpha::X, b)?;
        for (i, (name, sign)) in SIDES.iter().enumerate() {
            let fit: FitResult = fit_log_linear(&one_side(&series, *sign), 1.0, DEFAULT_SCALING_WINDOW)?;
            let s = fit.slope().unwrap();
            pass &= (s - target).abs() <= 0.02;
            intercepts[i].push(fit.intercept().unwrap());
            parts.push(format!("b={b} {name} s={s:.4}"));
        }
    }
    // f(b) must actually depend on b
    let distinct = intercepts.iter().all(|f| {
        (0..f.len()).all(|i| (i + 1..f.len()).all(|j| (f[i] - f[j]).abs() > 1e-3))
    });
    pass &= distinct;
    Ok(Verdict {
        pass,
        detail: format!("{}; intercepts distinct: {distinct} (need s = 1/π ± 0.02)", parts.join(", ")),
    })
}

/// Largest growth factor of `max|v|` as the grid gains one decade closer to `x = 1`.
fn worst_growth(series: &DerivativeSeries, sign: f64) -> f64 {
    let mut pts = one_side(series, sign);
    pts.sort_by(|p, q| (q.0 - 1.0).abs().total_cmp(&(p.0 - 1.0).abs()));
    let mut running = 0.0f64;
    let maxima: Vec<f64> = pts.iter().map(|(_, v)| {
        running = running.max(v.abs());
        running
    }).collect();
    maxima.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
}

fn ac3() -> Result<Verdict> {
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [Alpha::Z, Alpha::X] {
        let series = correlator_derivative_scan(&tl(1.0), alpha, 1, Field::Initial, Some(1.0), &decade_axis(), DEFAULT_STEP)?;
        if series.flagged() > 0 {
            pass = false;
        }
        for (name, sign) in SIDES {
            let g = worst_growth(&series, sign);
            pass &= g < 1.1;
            parts.push(format!("G{alpha} {name} growth {g:.4}"));
        }
    }
    Ok(Verdict { pass, detail: format!("{} (need < 1.1 per refinement)", parts.join(", ")) })
}

fn ac4() -> Result<Verdict> {
    let mut pass = true;
    let mut parts = Vec::new();
    for ((a, b), expected) in [((0.4, 0.5), 0.074916), ((0.45, 0.5), 0.0725954)] {
        let q = QuenchSpec::new(a, b)?;
        let pts: Vec<(f64, f64)> = long_range_scan(&tl(1.0), Alpha::X, &q, 150, Method::DeDephased)?
            .into_iter()
            .map(|r| r.map(|c| (c.n as f64, c.value)))
            .collect::<Result<_>>()?;
        let (_, c1, c2) = fit_decay(&pts, (1.0, 150.0))?.decay_constants().unwrap();
        let ok = (c2 - expected).abs() <= 0.1 * expected && c1 <= 1e-3;
        pass &= ok;
        parts.push(format!("({a},{b}) c2={c2:.6} (target {expected} ± 10%) c1={c1:.2e}"));
    }
    Ok(Verdict { pass, detail: parts.join(", ") })
}

fn gx(a: f64, b: f64) -> Result<Vec<f64>> {
    let q = QuenchSpec::new(a, b)?;
    let method = if q.is_static() { Method::Static } else { Method::DeDephased };
    long_range_scan(&tl(1.0), Alpha::X, &q, 150, method)?.into_iter().map(|r| r.map(|c| c.value)).collect()
}

fn first_below(g: &[f64], level: f64) -> usize {
    g.iter().position(|v| v.abs() < level).map(|i| i + 1).unwrap_or(usize::MAX)
}

fn ac5() -> Result<Verdict> {
    let mut pass = true;
    let mut parts = Vec::new();
    let st = gx(0.5, 0.5)?;
    let plateau = st[149].abs() > 0.1 && (st[149] - st[74]).abs() <= 1e-3 * st[149].abs();
    pass &= plateau;
    parts.push(format!("static(0.5) G150={:.4} plateau {plateau}", st[149]));
    for (a, b) in [(0.4, 0.5), (0.0, 2.0), (0.5, 2.0)] {
        let g = gx(a, b)?[149];
        let ok = g.abs() < 1e-4;
        pass &= ok;
        parts.push(format!("({a},{b}) |G150|={:.3e}{}", g.abs(), if ok { "" } else { " (need < 1e-4)" }));
    }
    let slow = first_below(&gx(0.0, 0.5)?, 1e-3);
    let fast = first_below(&gx(0.0, 2.0)?, 1e-3);
    let slower = slow > fast;
    pass &= slower;
    parts.push(format!("first n below 1e-3: (0,0.5) {slow} vs (0,2) {fast}"));
    let osc = gx(2.0, 0.5)?;
    let flips = osc.windows(2).filter(|w| w[0].abs() > 1e-300 && w[0].signum() != w[1].signum()).count();
    pass &= flips >= 2;
    parts.push(format!("(2,0.5) sign changes {flips}"));
    Ok(Verdict { pass, detail: parts.join(", ") })
}

fn ac6() -> Result<Verdict> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (a, expected) in [
        (1.0, Classification::Divergent),
        (0.0, Classification::Jump),
        (0.5, Classification::Jump),
        (2.0, Classification::Jump),
    ] {
        let s = correlator_derivative_scan(&tl(0.6), Alpha::Z, 1, Field::Final, Some(a), &decade_axis(), DEFAULT_STEP)?;
        let d = detect_discontinuity(&s, 1.0);
        pass &= d.class == expected;
        parts.push(format!("a={a} {:?}", d.class));
    }
    Ok(Verdict { pass, detail: parts.join(", ") })
}

const ORACLE_PAIRS: [(f64, f64); 5] = [(0.5, 1.5), (0.2, 0.8), (1.3, 0.4), (0.9, 1.1), (1.8, 0.6)];

fn ac7() -> Result<Verdict> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for sites in [8, 10] {
        for gamma in [0.6, 1.0] {
            let spec = ChainSpec::finite(sites, gamma)?;
            for (a, b) in ORACLE_PAIRS {
                let q = QuenchSpec::new(a, b)?;
                let oracle = QuenchOracle::new(&spec, &q)?;
                for alpha in Alpha::ALL {
                    for n in 1..=3 {
                        let ed = oracle.diagonal_ensemble(&ObservableSpec::pair(alpha, n))?;
                        let req = CorrelatorRequest::new(alpha, n, q, Method::DeDephased).with_gauge(Gauge::Antiferromagnetic);
                        worst = worst.max((quench_correlator(&spec, &req)?.value - ed).abs());
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Verdict {
        pass: worst <= 1e-6 && secs < 120.0,
        detail: format!("max |FF - ED| = {worst:.2e} (need <= 1e-6), {secs:.1} s (need < 120 s)"),
    })
}

fn central<F: Fn(f64) -> Result<f64>>(f: F, x: f64) -> Result<f64> {
    let h = 1e-4;
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

fn ac8() -> Result<Verdict> {
    let spec = ChainSpec::finite(8, 1.0)?;
    let observables = [ObservableSpec::pair(Alpha::Z, 1), ObservableSpec::pair(Alpha::X, 2), ObservableSpec::MagnetizationZ];
    let rel = |pt: f64, fd: f64| (pt - fd).abs() / pt.abs();
    let (mut d_static, mut d_initial, mut d_final) = (0.0f64, 0.0f64, 0.0f64);
    for (a, b) in [(0.5, 1.5), (0.2, 0.8), (1.3, 0.4)] {
        for obs in &observables {
            d_static = d_static.max(rel(pt_derivative_static(&spec, a, obs)?, central(|x| static_expectation(&spec, x, obs), a)?));
            d_initial = d_initial.max(rel(
                pt_derivative_quench_initial(&spec, a, b, obs)?,
                central(|x| diagonal_ensemble_expectation(&spec, x, b, obs), a)?,
            ));
            d_final = d_final.max(rel(
                pt_derivative_quench_final(&spec, a, b, obs)?.value,
                central(|x| diagonal_ensemble_expectation(&spec, a, x, obs), b)?,
            ));
        }
    }
    let mut collapse = 0.0f64;
    for obs in &observables {
        collapse = collapse.max((pt_derivative_quench_final(&spec, 1.0, 1.0, obs)?.value - pt_derivative_static(&spec, 1.0, obs)?).abs());
    }
    let pass = d_static <= 1e-4 && d_initial <= 1e-4 && d_final <= 1e-4 && collapse <= 1e-10;
    Ok(Verdict {
        pass,
        detail: format!("relative static {d_static:.2e}, initial {d_initial:.2e}, final {d_final:.2e} (need <= 1e-4); collapse {collapse:.2e} (need <= 1e-10)"),
    })
}

fn ac9() -> Result<Verdict> {
    let mut parts = Vec::new();
    let mut pass = true;

    let mut identity = 0.0f64;
    for spec in [ChainSpec::finite(10, 0.6)?, tl(1.0)] {
        for h in [0.3, 0.9, 1.4] {
            let q = QuenchSpec::fixed(h)?;
            for alpha in Alpha::ALL {
                for n in 1..=4 {
                    let s = quench_correlator(&spec, &CorrelatorRequest::new(alpha, n, q, Method::Static))?.value;
                    let d = quench_correlator(&spec, &CorrelatorRequest::new(alpha, n, q, Method::DeDephased))?.value;
                    identity = identity.max((s - d).abs());
                }
            }
        }
    }
    pass &= identity <= 1e-12;
    parts.push(format!("identity quench {identity:.1e}"));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pf = 0.0f64;
    for dim in [2, 4, 6, 8, 10, 12] {
        for _ in 0..20 {
            let mut m = AntisymmetricMatrix::zeros(dim);
            for i in 0..dim {
                for j in i + 1..dim {
                    m.set(i, j, rng.random_range(-1.0..1.0));
                }
            }
            let p = pfaffian(&m).value();
            let d = determinant(&m.to_dmatrix()).value();
            pf = pf.max((p * p - d).abs() / d.abs().max(1.0));
        }
    }
    pass &= pf <= 1e-8;
    parts.push(format!("Pf^2 = det {pf:.1e}"));

    let spec = ChainSpec::finite(8, 1.0)?;
    let mut conserved = 0.0f64;
    for (a, b) in [(0.5, 1.5), (1.3, 0.4)] {
        let o = QuenchOracle::new(&spec, &QuenchSpec::new(a, b)?)?;
        let h = ObservableSpec::Hamiltonian { field: b };
        conserved = conserved.max((o.diagonal_ensemble(&h)? - o.static_expectation(&h)?).abs());
    }
    pass &= conserved <= 1e-10;
    parts.push(format!("conserved shortcut {conserved:.1e}"));

    let q = QuenchSpec::new(0.5, 1.5)?;
    let controls = TimeControls { tol: 1e-4, max_horizon: 1e6, initial_samples: 4096 };
    let mut agree = true;
    for alpha in Alpha::ALL {
        let de = quench_correlator(&spec, &CorrelatorRequest::new(alpha, 2, q, Method::DeDephased))?;
        let ts = quench_correlator(&spec, &CorrelatorRequest::new(alpha, 2, q, Method::TimeSampled).with_time_controls(controls))?;
        agree &= (de.value - ts.value).abs() <= de.residual + ts.residual;
    }
    pass &= agree;
    parts.push(format!("time-average methods within residuals {agree}"));

    let dir = std::env::temp_dir().join(format!("xyquench-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut identical = true;
    for args in [
        &["correlator", "--a", "0.4", "--b", "0.5", "--alpha", "x", "--n-max", "60"][..],
        &["derivative", "--grid", "1e-3:1e-1:11:log", "--around", "1", "--b", "0.5", "--fit", "power"],
    ] {
        let outputs: Vec<Vec<u8>> = ["1", "2", "5"]
            .iter()
            .map(|w| {
                let path = dir.join(format!("w{w}.csv"));
                let status = Command::new(env!("CARGO_BIN_EXE_xyquench"))
                    .args(args)
                    .args(["--workers", w, "--out", path.to_str().unwrap()])
                    .status()?;
                assert!(status.success());
                Ok(std::fs::read(&path)?)
            })
            .collect::<Result<_>>()?;
        identical &= outputs.windows(2).all(|w| w[0] == w[1]);
    }
    std::fs::remove_dir_all(&dir)?;
    pass &= identical;
    parts.push(format!("CLI output identical across 1/2/5 workers {identical}"));

    Ok(Verdict { pass, detail: parts.join(", ") })
}

fn main() {
    let criteria: [(&str, fn() -> Result<Verdict>); 9] = [
        ("universal exponent of dG^z_1/da", ac1),
        ("log slope of dG^x_1/da", ac2),
        ("bounded derivatives for the critical quench b = 1", ac3),
        ("decay-fit constants at b = 0.5", ac4),
        ("long-range G^x phenomenology", ac5),
        ("fixed-initial-field classification of dG^z_1/db", ac6),
        ("free-fermion vs ED diagonal ensemble", ac7),
        ("perturbation formulas vs finite differences", ac8),
        ("property suites", ac9),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        if !report(i + 1, title, f()) {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass, {failed} FAIL", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("XYQUENCH_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
