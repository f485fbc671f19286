//! Command-line front end: `analytic`, `simulate`, `sweep` and `validate`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical or validation
//! failure, 4 inconclusive Monte Carlo search.

pub mod checks;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::analytic::{analytic_densities, scaling_exponent, DensityMethod, DensityResult};
use crate::error::{Error, Result};
use crate::mc::{estimate_outage_with, find_max_density_with, run_sweep, SweepMode};
use crate::scheme::Scheme;
use config::{DpcRows, ExperimentConfig, Format};
use output::{
    to_csv, CheckRow, CheckStatus, DensityRow, LinkColumns, OutageRow, CHECK_COLUMNS, DENSITY_COLUMNS, OUTAGE_COLUMNS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Domain(_) | Error::Precondition(_) | Error::Unsupported(_) => EXIT_CONFIG,
        Error::Numerical(_) => EXIT_NUMERICAL,
        Error::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    }
}

#[derive(Debug, Parser)]
#[command(name = "sdma-capacity", version, about = "Transmission capacity of SDMA in Poisson ad hoc networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form densities, area spectral efficiency and scaling exponents.
    Analytic(CommonArgs),
    /// Monte Carlo outage at a fixed density (`--lambda`) or maximum density.
    Simulate(CommonArgs),
    /// Densities over an antenna grid with fitted log-log slopes.
    Sweep(CommonArgs),
    /// Identity, distribution and oracle self-checks.
    Validate(ValidateArgs),
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Scheme names, comma separated or repeated.
    #[arg(long = "scheme", value_delimiter = ',', value_parser = parse_scheme)]
    pub schemes: Vec<Scheme>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Link distance D in meters.
    #[arg(long)]
    pub distance: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Sets the noise power to `rho / 10^(snr/10)`.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// Fixed density per m² for `simulate`.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Diagonal sweep sizes `M = N = K`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<u32>,
    /// Relative tolerance of the density bisection.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub max_trials: Option<u64>,
    /// Which dirty-paper density rows to report.
    #[arg(long, value_enum)]
    pub method: Option<DpcRows>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Analytic,
    Mc,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Evaluate the reference side of the identity and oracle checks at
    /// this pathloss exponent instead of the true one. Exists to show the
    /// harness catches a broken fixture.
    #[arg(long)]
    pub fixture_alpha: Option<f64>,
}

impl CommonArgs {
    /// File values (or defaults) overridden by the flags given.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if !self.schemes.is_empty() {
            c.schemes = self.schemes.clone();
        }
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = self.$field { c.$field = v; } )* };
        }
        take!(m, n, k, alpha, beta, epsilon, distance, rho, eta, trials, seed, tolerance, max_trials);
        if let Some(snr) = self.snr_db {
            c.eta = c.rho / 10f64.powf(snr / 10.0);
        }
        if self.lambda.is_some() {
            c.lambda = self.lambda;
        }
        if let Some(mode) = self.mode {
            c.mode = match mode {
                ModeArg::Analytic => SweepMode::Analytic,
                ModeArg::Mc => SweepMode::Mc,
                ModeArg::Both => SweepMode::Both,
            };
        }
        if !self.grid.is_empty() {
            c.grid = self.grid.clone();
            c.grid_points.clear();
        }
        if let Some(m) = self.method {
            c.dpc_method = m;
        }
        if let Some(out) = &self.out {
            c.out = Some(out.display().to_string());
        }
        if let Some(f) = self.format {
            c.format = f;
        }
        c.initial_trials = c.initial_trials.min(c.max_trials);
        c.validate()?;
        Ok(c)
    }
}

/// What a command produced: the JSON document, its CSV rendering, a human
/// summary for stderr, and the exit code.
struct Emitted {
    json: serde_json::Value,
    csv: String,
    summary: Vec<String>,
    code: i32,
}

fn density_row(
    scheme: Scheme,
    params: &crate::NetworkParams,
    r: &DensityResult,
    trials: Option<u64>,
    seed: Option<u64>,
) -> DensityRow {
    DensityRow {
        link: LinkColumns::new(scheme, params),
        lambda_eps: r.lambda_eps,
        ase: r.ase,
        method: r.method.name().into(),
        ci_low: r.bracket.map(|b| b.0),
        ci_high: r.bracket.map(|b| b.1),
        trials,
        seed,
    }
}

#[derive(Serialize)]
struct Failure {
    scheme: Scheme,
    error: String,
    exit_code: i32,
}

fn failure(scheme: Scheme, e: &Error) -> Failure {
    Failure { scheme, error: e.to_string(), exit_code: exit_code(e) }
}

/// Exit code when some rows may have failed: success if any row came out,
/// else the first failure's code. Inconclusive searches always surface.
fn combined_code(rows: usize, failures: &[Failure]) -> i32 {
    if failures.iter().any(|f| f.exit_code == EXIT_INCONCLUSIVE) {
        EXIT_INCONCLUSIVE
    } else if rows > 0 || failures.is_empty() {
        EXIT_OK
    } else {
        failures[0].exit_code
    }
}

fn wants(rows: DpcRows, method: DensityMethod) -> bool {
    match rows {
        DpcRows::All => true,
        DpcRows::SmallEps => method == DensityMethod::SmallEps,
        DpcRows::UpperBound => method == DensityMethod::UpperBound,
        DpcRows::Sandwich => matches!(method, DensityMethod::LowerBound | DensityMethod::SandwichUpper),
    }
}

fn cmd_analytic(c: &ExperimentConfig) -> Result<Emitted> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut exponents = Vec::new();
    let mut summary = Vec::new();
    for &scheme in &c.schemes {
        let p = c.network_for(scheme);
        match analytic_densities(scheme, &p) {
            Ok(results) => rows.extend(
                results
                    .iter()
                    .filter(|r| scheme != Scheme::DpcMimoUb || wants(c.dpc_method, r.method))
                    .map(|r| density_row(scheme, &p, r, None, None)),
            ),
            Err(e) => failures.push(failure(scheme, &e)),
        }
        let e = scaling_exponent(scheme, p.alpha)?;
        summary.push(format!("{scheme}: ASE grows as antennas^{e:.4}"));
        exponents.push(json!({ "scheme": scheme, "ase_exponent": e }));
    }
    Ok(Emitted {
        csv: to_csv(&DENSITY_COLUMNS, &rows)?,
        code: combined_code(rows.len(), &failures),
        json: json!({ "command": "analytic", "columns": DENSITY_COLUMNS, "rows": rows, "exponents": exponents, "failures": failures }),
        summary,
    })
}

fn cmd_simulate(c: &ExperimentConfig) -> Result<Emitted> {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    if let Some(lambda) = c.lambda {
        let mut rows = Vec::new();
        for &scheme in &c.schemes {
            let p = crate::NetworkParams { lambda, ..c.network_for(scheme) };
            match estimate_outage_with(scheme, &p, &c.options, c.trials, c.seed) {
                Ok(est) => rows.push(OutageRow {
                    link: LinkColumns::new(scheme, &p),
                    lambda,
                    p_out: est.p_hat,
                    ci_low: est.ci_low,
                    ci_high: est.ci_high,
                    trials: est.trials,
                    seed: est.seed,
                }),
                Err(e) => failures.push(failure(scheme, &e)),
            }
        }
        return Ok(Emitted {
            csv: to_csv(&OUTAGE_COLUMNS, &rows)?,
            code: combined_code(rows.len(), &failures),
            json: json!({ "command": "simulate", "columns": OUTAGE_COLUMNS, "rows": rows, "failures": failures }),
            summary,
        });
    }
    let mut rows = Vec::new();
    let bisection = c.bisection();
    for &scheme in &c.schemes {
        let p = c.network_for(scheme);
        match find_max_density_with(scheme, &p, &bisection, c.seed) {
            Ok(d) => {
                if d.resolution_limited {
                    summary.push(format!("{scheme}: bracket limited by Monte Carlo resolution at {} trials", d.trials));
                }
                rows.push(density_row(scheme, &p, &d.result, Some(d.trials), Some(c.seed)));
            }
            Err(e) => {
                summary.push(format!("{scheme}: {e}"));
                failures.push(failure(scheme, &e));
            }
        }
    }
    Ok(Emitted {
        csv: to_csv(&DENSITY_COLUMNS, &rows)?,
        code: combined_code(rows.len(), &failures),
        json: json!({ "command": "simulate", "columns": DENSITY_COLUMNS, "rows": rows, "failures": failures }),
        summary,
    })
}

fn cmd_sweep(c: &ExperimentConfig) -> Result<Emitted> {
    let grid = c.grid_points();
    if grid.len() < 2 {
        return Err(Error::Config(format!("sweep needs a grid of at least 2 points, got {}", grid.len())));
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut slopes = Vec::new();
    let mut summary = Vec::new();
    for &scheme in &c.schemes {
        let table = run_sweep(&[scheme], &grid, &c.network_for(scheme), c.mode, c.seed, &c.bisection())?;
        for r in &table.rows {
            match (&r.result, &r.error) {
                (Some(res), _) if scheme != Scheme::DpcMimoUb || wants(c.dpc_method, res.method) => {
                    rows.push(density_row(scheme, &r.params, res, r.trials, r.seed))
                }
                (Some(_), _) => {}
                (None, err) => {
                    let err = err.clone().unwrap_or_else(|| Error::Numerical("row produced no result".into()));
                    failures.push(Failure {
                        scheme,
                        error: format!("M = {}, N = {}, K = {}: {err}", r.params.m, r.params.n, r.params.k),
                        exit_code: exit_code(&err),
                    })
                }
            }
        }
        for s in table.slopes {
            summary.push(match s.slope {
                Some(v) => format!("{} {}: slope {v:.4} over {} points", s.scheme, s.method.name(), s.points),
                None => format!("{} {}: slope undefined ({} points)", s.scheme, s.method.name(), s.points),
            });
            slopes.push(json!({ "scheme": s.scheme, "method": s.method.name(), "points": s.points, "slope": s.slope }));
        }
    }
    let code = if rows.is_empty() { failures.first().map_or(EXIT_NUMERICAL, |f| f.exit_code) } else { EXIT_OK };
    Ok(Emitted {
        csv: to_csv(&DENSITY_COLUMNS, &rows)?,
        code,
        json: json!({ "command": "sweep", "columns": DENSITY_COLUMNS, "rows": rows, "slopes": slopes, "failures": failures }),
        summary,
    })
}

fn cmd_validate(c: &ExperimentConfig, fixture_alpha: Option<f64>) -> Result<Emitted> {
    let reference = |a: f64| fixture_alpha.unwrap_or(a);
    let mut rows: Vec<CheckRow> = checks::identity_checks(reference)?;
    let samples = usize::try_from(c.trials).unwrap_or(usize::MAX);
    rows.extend(checks::distribution_checks(samples, c.seed)?);
    let siso = crate::NetworkParams { lambda: c.lambda.unwrap_or(1e-4), ..c.network() };
    rows.push(checks::siso_oracle(&siso, reference(siso.alpha), c.trials, c.seed)?);
    rows.extend(checks::informational_checks(samples.min(100_000), c.seed)?);
    let passed = rows.iter().all(|r| r.status != CheckStatus::Fail);
    let summary = rows
        .iter()
        .map(|r| {
            format!(
                "{:>4} {} residual {:.3e} (tolerance {:.3e})",
                format!("{:?}", r.status).to_lowercase(),
                r.check,
                r.residual,
                r.tolerance
            )
        })
        .collect();
    Ok(Emitted {
        csv: to_csv(&CHECK_COLUMNS, &rows)?,
        code: if passed { EXIT_OK } else { EXIT_NUMERICAL },
        json: json!({ "command": "validate", "passed": passed, "columns": CHECK_COLUMNS, "checks": rows }),
        summary,
    })
}

fn emit(c: &ExperimentConfig, e: &Emitted) -> Result<()> {
    let text = match c.format {
        Format::Csv => e.csv.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&e.json).map_err(|err| Error::Numerical(err.to_string()))?;
            s.push('\n');
            s
        }
    };
    match &c.out {
        Some(path) => std::fs::write(path, text).map_err(|err| Error::Config(format!("cannot write {path}: {err}")))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|err| Error::Config(format!("cannot write output: {err}")))?,
    }
    let mut stderr = std::io::stderr();
    for line in &e.summary {
        let _ = writeln!(stderr, "{line}");
    }
    Ok(())
}

/// Runs a parsed command and returns the process exit code. Errors are
/// printed to stderr.
pub fn run(cli: Cli) -> i32 {
    let result = (|| -> Result<i32> {
        let (args, fixture) = match &cli.command {
            Command::Analytic(a) | Command::Simulate(a) | Command::Sweep(a) => (a, None),
            Command::Validate(v) => (&v.common, v.fixture_alpha),
        };
        let config = args.resolve()?;
        let pool = crate::mc::worker_pool(None)?;
        let emitted = pool.install(|| match &cli.command {
            Command::Analytic(_) => cmd_analytic(&config),
            Command::Simulate(_) => cmd_simulate(&config),
            Command::Sweep(_) => cmd_sweep(&config),
            Command::Validate(_) => cmd_validate(&config, fixture),
        })?;
        emit(&config, &emitted)?;
        Ok(emitted.code)
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
