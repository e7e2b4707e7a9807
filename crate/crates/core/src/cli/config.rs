use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::analysis::{Field, DEFAULT_STEP};
use crate::chain::DEFAULT_QUADRATURE_NODES;
use crate::correlators::Method;
use crate::{Alpha, ChainSpec, Error, Result};

/// Keys accepted in a config file and as `--key` flags.
pub const KEYS: &[&str] = &[
    "gamma", "a", "b", "size", "nodes", "alpha", "n", "n_max", "grid", "which", "around", "side", "method", "tol", "step",
    "fit", "window", "format", "out", "workers",
];

/// Keys left out of the header echo: they choose where and how fast a run
/// happens, not what it computes.
const NOT_ECHOED: &[&str] = &["out", "workers"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}, expected csv or json"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeChoice {
    Finite(usize),
    Thermodynamic,
}

impl FromStr for SizeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "tl" || s == "inf" {
            return Ok(SizeChoice::Thermodynamic);
        }
        s.parse().map(SizeChoice::Finite).map_err(|_| Error::Config(format!("size must be an even integer or tl, got {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "both" => Ok(Side::Both),
            _ => Err(Error::Config(format!("unknown side {s:?}, expected left, right or both"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitKind {
    Power,
    Log,
    Decay,
    Discontinuity,
}

impl FromStr for FitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(FitKind::Power),
            "log" => Ok(FitKind::Log),
            "decay" => Ok(FitKind::Decay),
            "discontinuity" => Ok(FitKind::Discontinuity),
            _ => Err(Error::Config(format!("unknown fit {s:?}, expected power, log, decay or discontinuity"))),
        }
    }
}

/// `start:stop:count` (linear) or `start:stop:count:log`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("grid must be start:stop:count[:log], got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 && !(parts.len() == 4 && parts[3] == "log") {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let log = parts.len() == 4;
        if !start.is_finite() || !stop.is_finite() || count == 0 {
            return Err(Error::Config(format!("grid {s:?} must be finite and nonempty")));
        }
        if count > 1 && start == stop {
            return Err(Error::Config(format!("grid {s:?} repeats one point")));
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(Error::Config(format!("log grid {s:?} needs positive bounds")));
        }
        Ok(Grid { start, stop, count, log })
    }
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let m = (self.count - 1) as f64;
        let mut xs: Vec<f64> = (0..self.count)
            .map(|i| {
                let t = i as f64 / m;
                if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        xs
    }
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Config(format!("window must be lo:hi with 0 < lo < hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Reads a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {raw:?}", i + 1)))?;
        let key = normalise_key(k.trim());
        if key == "strict" {
            map.insert(key, v.trim().to_string());
            continue;
        }
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key {:?}", i + 1, k.trim())));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

pub fn normalise_key(k: &str) -> String {
    k.replace('-', "_")
}

/// Fully resolved settings of one run; everything a command reads.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub gamma: f64,
    pub size: Option<SizeChoice>,
    pub nodes: usize,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub alpha: Alpha,
    pub n: usize,
    pub n_max: Option<usize>,
    pub grid: Option<Grid>,
    pub which: Field,
    pub around: Option<f64>,
    pub side: Side,
    pub method: Option<Method>,
    pub tol: Option<f64>,
    pub step: f64,
    pub fit: Option<FitKind>,
    pub window: Option<(f64, f64)>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub workers: Option<usize>,
    raw: BTreeMap<String, String>,
}

fn field<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("invalid value {v:?} for {key}"))),
    }
}

fn enum_field<T: FromStr<Err = Error>>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key).map(|v| v.parse()).transpose()
}

fn positive(key: &str, v: Option<f64>) -> Result<Option<f64>> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(Error::Config(format!("{key} must be positive, got {x}"))),
        _ => Ok(v),
    }
}

fn finite(key: &str, v: Option<f64>) -> Result<Option<f64>> {
    match v {
        Some(x) if !x.is_finite() => Err(Error::Config(format!("{key} must be finite, got {x}"))),
        _ => Ok(v),
    }
}

impl RunConfig {
    pub fn from_map(command: &str, map: BTreeMap<String, String>) -> Result<Self> {
        let strict = match map.get("strict").map(String::as_str) {
            None | Some("false") | Some("0") => false,
            Some("true") | Some("1") => true,
            Some(v) => return Err(Error::Config(format!("strict must be true or false, got {v:?}"))),
        };
        let gamma = finite("gamma", field(&map, "gamma")?)?.unwrap_or(1.0);
        if !(0.0..=1.0).contains(&gamma) || gamma == 0.0 {
            return Err(Error::Config(format!("gamma must lie in (0, 1], got {gamma}")));
        }
        let workers: Option<usize> = field(&map, "workers")?;
        if workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        let n: usize = field(&map, "n")?.unwrap_or(1);
        if n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        let n_max: Option<usize> = field(&map, "n_max")?;
        if n_max == Some(0) {
            return Err(Error::Config("n_max must be at least 1".into()));
        }
        let nodes: usize = field(&map, "nodes")?.unwrap_or(DEFAULT_QUADRATURE_NODES);
        if nodes == 0 {
            return Err(Error::Config("nodes must be positive".into()));
        }
        Ok(RunConfig {
            command: command.to_string(),
            gamma,
            size: enum_field(&map, "size")?,
            nodes,
            a: finite("a", field(&map, "a")?)?,
            b: finite("b", field(&map, "b")?)?,
            alpha: enum_field(&map, "alpha")?.unwrap_or(Alpha::Z),
            n,
            n_max,
            grid: enum_field(&map, "grid")?,
            which: enum_field(&map, "which")?.unwrap_or(Field::Initial),
            around: finite("around", field(&map, "around")?)?,
            side: enum_field(&map, "side")?.unwrap_or(Side::Both),
            method: enum_field(&map, "method")?,
            tol: positive("tol", field(&map, "tol")?).or_else(|e| {
                // a zero tolerance is a legal negative control for the oracle
                if command == "oracle" && map.get("tol").and_then(|v| v.parse::<f64>().ok()) == Some(0.0) {
                    Ok(Some(0.0))
                } else {
                    Err(e)
                }
            })?,
            step: positive("step", field(&map, "step")?)?.unwrap_or(DEFAULT_STEP),
            fit: enum_field(&map, "fit")?,
            window: map.get("window").map(|w| parse_window(w)).transpose()?,
            format: enum_field(&map, "format")?.unwrap_or(Format::Csv),
            out: map.get("out").map(PathBuf::from),
            strict,
            workers,
            raw: map,
        })
    }

    /// Chain spec for the chosen size, thermodynamic unless told otherwise.
    pub fn chain(&self, default: SizeChoice) -> Result<ChainSpec> {
        match self.size.unwrap_or(default) {
            SizeChoice::Finite(n) => ChainSpec::finite(n, self.gamma),
            SizeChoice::Thermodynamic => ChainSpec::thermodynamic_with_nodes(self.gamma, self.nodes),
        }
    }

    /// Explicitly set keys, minus those that must not affect output bytes.
    pub fn echo(&self) -> String {
        let mut parts = vec![format!("command={}", self.command)];
        parts.extend(
            self.raw
                .iter()
                .filter(|(k, _)| !NOT_ECHOED.contains(&k.as_str()))
                .map(|(k, v)| format!("{k}={v}")),
        );
        parts.join(" ")
    }

    /// Sorted grid points; with `around` set the grid holds distances from
    /// that point, placed on the requested side(s).
    pub fn axis(&self) -> Result<Option<Vec<f64>>> {
        let Some(grid) = self.grid else { return Ok(None) };
        let pts = grid.points();
        let Some(c) = self.around else { return Ok(Some(pts)) };
        if pts.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::Config("distances from --around must be positive".into()));
        }
        let mut xs = Vec::new();
        if self.side != Side::Right {
            xs.extend(pts.iter().map(|d| c - d));
        }
        if self.side != Side::Left {
            xs.extend(pts.iter().map(|d| c + d));
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        Ok(Some(xs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(pairs: &[(&str, &str)]) -> Result<RunConfig> {
        RunConfig::from_map("correlator", pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
    }

    #[test]
    fn grids() {
        let g: Grid = "0:1:5".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g: Grid = "1e-3:1e-1:3:log".parse().unwrap();
        let p = g.points();
        assert!((p[1] - 1e-2).abs() < 1e-15);
        assert!("1:2".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1:3:log".parse::<Grid>().is_err());
        assert!("0:nan:3".parse::<Grid>().is_err());
    }

    #[test]
    fn around_places_distances_on_both_sides() {
        let c = cfg(&[("grid", "0.1:0.2:2"), ("around", "1")]).unwrap();
        assert_eq!(c.axis().unwrap().unwrap(), vec![0.8, 0.9, 1.1, 1.2]);
        let c = cfg(&[("grid", "0.1:0.2:2"), ("around", "1"), ("side", "left")]).unwrap();
        assert_eq!(c.axis().unwrap().unwrap(), vec![0.8, 0.9]);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(cfg(&[("gamma", "1.5")]).is_err());
        assert!(cfg(&[("tol", "0")]).is_err());
        assert!(cfg(&[("format", "xml")]).is_err());
        assert!(cfg(&[("alpha", "w")]).is_err());
        assert!(cfg(&[("workers", "0")]).is_err());
        assert!(cfg(&[("a", "x")]).is_err());
        assert!(RunConfig::from_map("oracle", [("tol".to_string(), "0".to_string())].into()).is_ok());
    }

    #[test]
    fn config_text() {
        let m = parse_config_text("# run\ngamma = 0.6\nn-max=150 # far\n\n").unwrap();
        assert_eq!(m["gamma"], "0.6");
        assert_eq!(m["n_max"], "150");
        assert!(parse_config_text("colour = red").is_err());
        assert!(parse_config_text("gamma 0.6").is_err());
    }

    #[test]
    fn echo_skips_workers_and_out() {
        let c = cfg(&[("gamma", "0.6"), ("workers", "3"), ("out", "x.csv")]).unwrap();
        assert_eq!(c.echo(), "command=correlator gamma=0.6");
    }
}
