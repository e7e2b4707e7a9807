//! Command-line driver: sweeps, figure presets and the ED oracle report.
//!
//! Settings come from an optional flat `key = value` file (`--config`),
//! overridden by flags. Tables are written as CSV with `#` header lines
//! (tool version, config echo, column schema) or as JSON. Rows are always
//! emitted in grid order, so output bytes do not depend on `--workers`.

mod commands;
mod config;
mod oracle;
mod presets;
mod table;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::DEFAULT_SCALING_WINDOW;
pub use config::{parse_config_text, read_config_file, FitKind, Format, Grid, RunConfig, Side, SizeChoice};
pub use oracle::{run_checks, Check, OracleReport, DEFAULT_ORACLE_SITES, DEFAULT_ORACLE_TOLERANCE, DEFAULT_PAIRS};
pub use presets::{decade_axis, scaling_axis, Preset, DECAY_QUENCHES, FIXED_INITIAL_FIELDS, SCALING_FINAL_FIELDS};
pub use table::{format_float, Cell, Table};

use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ORACLE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "xyquench", version, about = "Static and quench correlations of the transverse-field XY chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dispersion and Bogoliubov angles of both fields.
    Modes,
    /// G^α_n at one point, along a field grid, or for n = 1..n_max.
    Correlator,
    /// ∂G^α_n with respect to a or b along a grid, with optional fits.
    Derivative,
    /// Cross-checks of the free-fermion solver and the perturbation formulas against ED.
    Oracle,
    /// Data behind one of the figures.
    Reproduce {
        #[arg(value_enum)]
        preset: Preset,
    },
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Modes => "modes".into(),
            Command::Correlator => "correlator".into(),
            Command::Derivative => "derivative".into(),
            Command::Oracle => "oracle".into(),
            Command::Reproduce { preset } => format!("reproduce {preset}"),
        }
    }
}

#[derive(Args, Debug, Default)]
pub struct Options {
    /// Flat key = value file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Anisotropy γ in (0, 1].
    #[arg(long, global = true)]
    pub gamma: Option<String>,
    /// Initial field.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Final field.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Even ring size N, or `tl` for the thermodynamic limit.
    #[arg(long, global = true)]
    pub size: Option<String>,
    /// Initial Gauss-Legendre nodes in the thermodynamic limit.
    #[arg(long, global = true)]
    pub nodes: Option<String>,
    /// Spin component x, y or z.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Separation n.
    #[arg(long, global = true)]
    pub n: Option<String>,
    /// Scan separations 1..=n_max.
    #[arg(long, global = true)]
    pub n_max: Option<String>,
    /// start:stop:count or start:stop:count:log.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Field varied along the grid: a or b.
    #[arg(long, global = true)]
    pub which: Option<String>,
    /// Treat the grid as distances from this point.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub around: Option<String>,
    /// left, right or both.
    #[arg(long, global = true)]
    pub side: Option<String>,
    /// static, de_dephased or time_sampled.
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// Quadrature/time-average tolerance, or the oracle's pass threshold.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Finite-difference step.
    #[arg(long, global = true)]
    pub step: Option<String>,
    /// power, log, decay or discontinuity.
    #[arg(long, global = true)]
    pub fit: Option<String>,
    /// Fit window lo:hi in |x - x_c| (or n for decay fits).
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub workers: Option<String>,
    /// Exit 3 when any point fails to converge.
    #[arg(long, global = true)]
    pub strict: bool,
}

impl Options {
    fn overrides(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("gamma", &self.gamma),
            ("a", &self.a),
            ("b", &self.b),
            ("size", &self.size),
            ("nodes", &self.nodes),
            ("alpha", &self.alpha),
            ("n", &self.n),
            ("n_max", &self.n_max),
            ("grid", &self.grid),
            ("which", &self.which),
            ("around", &self.around),
            ("side", &self.side),
            ("method", &self.method),
            ("tol", &self.tol),
            ("step", &self.step),
            ("fit", &self.fit),
            ("window", &self.window),
            ("format", &self.format),
            ("out", &self.out),
            ("workers", &self.workers),
        ];
        let mut map: BTreeMap<String, String> =
            pairs.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        if self.strict {
            map.insert("strict".into(), "true".into());
        }
        map
    }
}

/// What a command produced.
pub enum Body {
    Table(Table),
    Report(OracleReport),
}

pub struct Outcome {
    pub body: Body,
    /// Points that could not be evaluated.
    pub failed: usize,
    /// Failed points plus results flagged as approximate.
    pub warnings: usize,
}

impl Outcome {
    pub(crate) fn table(t: Table) -> Self {
        Outcome { body: Body::Table(t), failed: 0, warnings: 0 }
    }

    pub(crate) fn counted(t: Table, failed: usize, warnings: usize) -> Self {
        Outcome { body: Body::Table(t), failed, warnings }
    }

    pub(crate) fn rows(t: Table, rows: &[Result<crate::correlators::CorrelatorResult>]) -> Self {
        let failed = rows.iter().filter(|r| r.is_err()).count();
        let approximate = rows.iter().filter(|r| matches!(r, Ok(c) if !c.exact)).count();
        Outcome { body: Body::Table(t), failed, warnings: failed + approximate }
    }
}

/// Merges the config file (if any) with flag overrides.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut map = match &cli.options.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    map.extend(cli.options.overrides());
    RunConfig::from_map(&cli.command.name(), map)
}

/// Runs a resolved command inside a pool of `cfg.workers` threads.
pub fn execute(cli: &Cli, cfg: &RunConfig) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Modes => commands::modes(cfg),
        Command::Correlator => commands::correlator(cfg),
        Command::Derivative => commands::derivative(cfg),
        Command::Oracle => oracle::oracle(cfg).map(|r| Outcome { body: Body::Report(r), failed: 0, warnings: 0 }),
        Command::Reproduce { preset } => presets::reproduce(cfg, *preset),
    })
}

fn header(cfg: &RunConfig) -> Vec<String> {
    vec![format!("xyquench {}", env!("CARGO_PKG_VERSION")), format!("config: {}", cfg.echo())]
}

/// Serialised output of a finished command.
pub fn render(cfg: &RunConfig, outcome: &Outcome) -> String {
    match &outcome.body {
        Body::Table(t) => {
            let mut t = t.clone();
            t.header = header(cfg);
            t.render(cfg.format)
        }
        Body::Report(r) => {
            let v = serde_json::json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": cfg.echo(),
                "report": r,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("report serialises");
            s.push('\n');
            s
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. } => EXIT_CONVERGENCE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args`, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("xyquench: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match execute(&cli, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("xyquench: {e}");
            return exit_code_for(&e);
        }
    };
    let text = render(&cfg, &outcome);
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("xyquench: cannot write output: {e}");
        return EXIT_USAGE;
    }
    if let Body::Report(r) = &outcome.body {
        if !r.pass {
            eprintln!("xyquench: oracle checks failed: {}", r.failing().join(", "));
            return EXIT_ORACLE;
        }
    }
    if outcome.warnings > 0 {
        eprintln!("xyquench: {} warning(s), {} failed point(s)", outcome.warnings, outcome.failed);
    }
    if cfg.strict && outcome.failed > 0 {
        return EXIT_CONVERGENCE;
    }
    EXIT_OK
}
