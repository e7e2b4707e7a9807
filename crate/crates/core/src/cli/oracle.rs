use serde::Serialize;

use super::config::{RunConfig, SizeChoice};
use crate::analysis::richardson;
use crate::correlators::{quench_correlator, CorrelatorRequest, Method};
use crate::ed::{
    diagonal_ensemble_expectation, pt_derivative_quench_final, pt_derivative_quench_initial, pt_derivative_static,
    static_expectation, ObservableSpec, QuenchOracle,
};
use crate::fermion::magnetization_z_de;
use crate::{Alpha, ChainSpec, Error, Gauge, QuenchSpec, Result};

pub const DEFAULT_ORACLE_TOLERANCE: f64 = 1e-5;
pub const DEFAULT_ORACLE_SITES: usize = 8;

/// Gapped `(a, b)` pairs used when no fields are given.
pub const DEFAULT_PAIRS: [(f64, f64); 3] = [(0.5, 1.5), (0.2, 0.8), (1.3, 0.4)];

/// Finite-difference step for the perturbation-formula checks.
const FD_STEP: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub evaluations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub sites: usize,
    pub gamma: f64,
    pub pairs: Vec<(f64, f64)>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl OracleReport {
    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

struct Accumulator {
    tol: f64,
    checks: Vec<Check>,
}

impl Accumulator {
    fn record(&mut self, name: &str, deviations: Vec<f64>) {
        let max = deviations.iter().cloned().fold(0.0, f64::max);
        let bad = deviations.iter().any(|d| !d.is_finite());
        let max_deviation = if bad { f64::INFINITY } else { max };
        self.checks.push(Check {
            name: name.into(),
            max_deviation,
            tolerance: self.tol,
            pass: max_deviation < self.tol,
            evaluations: deviations.len(),
        });
    }
}

/// `|x - y|` scaled by `max(|x|, 1)`.
fn scaled(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(1.0)
}

fn fermion_de(spec: &ChainSpec, alpha: Alpha, n: usize, q: QuenchSpec) -> Result<f64> {
    let method = if q.is_static() { Method::Static } else { Method::DeDephased };
    let req = CorrelatorRequest::new(alpha, n, q, method).with_gauge(Gauge::Antiferromagnetic);
    Ok(quench_correlator(spec, &req)?.value)
}

/// Runs every check on one ring and reports the largest deviation of each.
pub fn run_checks(spec: &ChainSpec, pairs: &[(f64, f64)], tol: f64) -> Result<OracleReport> {
    let sites = spec.sites().ok_or_else(|| Error::Config("the oracle needs a finite ring".into()))?;
    let offsets: Vec<usize> = (1..=3).filter(|&n| n < sites).collect();
    let quenches: Vec<QuenchSpec> = pairs.iter().map(|&(a, b)| QuenchSpec::new(a, b)).collect::<Result<_>>()?;
    let mut acc = Accumulator { tol, checks: Vec::new() };

    let mut de = Vec::new();
    let mut st = Vec::new();
    let mut identity = Vec::new();
    let mut mz = Vec::new();
    for q in &quenches {
        let oracle = QuenchOracle::new(spec, q)?;
        let initial = QuenchOracle::new(spec, &QuenchSpec::fixed(q.initial)?)?;
        for alpha in Alpha::ALL {
            for &n in &offsets {
                let obs = ObservableSpec::pair(alpha, n);
                de.push((oracle.diagonal_ensemble(&obs)? - fermion_de(spec, alpha, n, *q)?).abs());
                let ed_static = initial.static_expectation(&obs)?;
                st.push((ed_static - fermion_de(spec, alpha, n, QuenchSpec::fixed(q.initial)?)?).abs());
                identity.push((initial.diagonal_ensemble(&obs)? - ed_static).abs());
            }
        }
        let ed_mz = oracle.diagonal_ensemble(&ObservableSpec::SigmaZ { site: 0 })?;
        mz.push((ed_mz - magnetization_z_de(spec, q)?).abs());
    }
    acc.record("diagonal_ensemble_correlators", de);
    acc.record("static_correlators", st);
    acc.record("identity_quench", identity);
    acc.record("magnetization_z", mz);

    let observables = [
        ObservableSpec::pair(Alpha::Z, 1),
        ObservableSpec::pair(Alpha::X, *offsets.last().unwrap()),
        ObservableSpec::MagnetizationZ,
    ];
    let mut d_static = Vec::new();
    let mut d_initial = Vec::new();
    let mut d_final = Vec::new();
    for q in &quenches {
        let (a, b) = (q.initial, q.final_field);
        for obs in &observables {
            let (fd, _) = richardson(|x| static_expectation(spec, x, obs), a, FD_STEP)?;
            d_static.push(scaled(pt_derivative_static(spec, a, obs)?, fd));
            let (fd, _) = richardson(|x| diagonal_ensemble_expectation(spec, x, b, obs), a, FD_STEP)?;
            d_initial.push(scaled(pt_derivative_quench_initial(spec, a, b, obs)?, fd));
            let (fd, _) = richardson(|x| diagonal_ensemble_expectation(spec, a, x, obs), b, FD_STEP)?;
            d_final.push(scaled(pt_derivative_quench_final(spec, a, b, obs)?.value, fd));
        }
    }
    acc.record("static_derivative_formula", d_static);
    acc.record("initial_field_derivative_formula", d_initial);
    acc.record("final_field_derivative_formula", d_final);

    let c = crate::chain::CRITICAL_FIELD;
    let collapse = observables
        .iter()
        .map(|obs| Ok((pt_derivative_quench_final(spec, c, c, obs)?.value - pt_derivative_static(spec, c, obs)?).abs()))
        .collect::<Result<Vec<f64>>>()?;
    acc.record("critical_collapse", collapse);

    let pass = acc.checks.iter().all(|c| c.pass);
    Ok(OracleReport { sites, gamma: spec.gamma(), pairs: pairs.to_vec(), checks: acc.checks, pass })
}

pub fn oracle(cfg: &RunConfig) -> Result<OracleReport> {
    let spec = cfg.chain(SizeChoice::Finite(DEFAULT_ORACLE_SITES))?;
    if spec.is_thermodynamic() {
        return Err(Error::Config("the oracle needs a finite ring (--size N)".into()));
    }
    let pairs = match (cfg.a, cfg.b) {
        (None, None) => DEFAULT_PAIRS.to_vec(),
        (Some(a), b) => vec![(a, b.unwrap_or(a))],
        (None, Some(_)) => return Err(Error::Config("--b needs --a".into())),
    };
    run_checks(&spec, &pairs, cfg.tol.unwrap_or(DEFAULT_ORACLE_TOLERANCE))
}
