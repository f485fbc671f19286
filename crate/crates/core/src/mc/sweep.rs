use serde::{Deserialize, Serialize};

use super::bisection::{find_max_density_with, BisectionConfig};
use super::stats::log_log_slope;
use crate::analytic::{analytic_densities, DensityMethod, DensityResult};
use crate::error::{domain, Error, Result};
use crate::params::NetworkParams;
use crate::scheme::Scheme;

/// Points needed before a log-log slope is fitted.
pub const MIN_SLOPE_POINTS: usize = 4;

/// One antenna configuration of a sweep, before per-scheme adaptation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub m: u32,
    pub n: u32,
    pub k: u32,
}

impl GridPoint {
    /// `M = N = K = size`, the diagonal used for the antenna-scaling plots.
    pub fn diagonal(size: u32) -> Self {
        Self { m: size, n: size, k: size }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Analytic,
    Mc,
    Both,
}

impl SweepMode {
    fn analytic(self) -> bool {
        matches!(self, SweepMode::Analytic | SweepMode::Both)
    }

    fn mc(self) -> bool {
        matches!(self, SweepMode::Mc | SweepMode::Both)
    }
}

/// One density result, or the reason it could not be produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    /// Parameters after adapting the grid point to the scheme.
    pub params: NetworkParams,
    pub method: Option<DensityMethod>,
    pub result: Option<DensityResult>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub error: Option<Error>,
}

impl SweepRow {
    fn ok(scheme: Scheme, params: NetworkParams, result: DensityResult) -> Self {
        Self {
            scheme,
            params,
            method: Some(result.method),
            result: Some(result),
            trials: None,
            seed: None,
            error: None,
        }
    }

    fn failed(scheme: Scheme, params: NetworkParams, method: Option<DensityMethod>, err: Error) -> Self {
        Self { scheme, params, method, result: None, trials: None, seed: None, error: Some(err) }
    }

    pub fn antenna_axis(&self) -> u32 {
        self.scheme.antenna_axis(&self.params)
    }
}

/// Fitted `d log ASE / d log antennas` for one scheme and method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeSummary {
    pub scheme: Scheme,
    pub method: DensityMethod,
    pub points: usize,
    /// `None` with fewer than [`MIN_SLOPE_POINTS`] positive points.
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub slopes: Vec<SlopeSummary>,
}

impl SweepTable {
    pub fn slope(&self, scheme: Scheme, method: DensityMethod) -> Option<f64> {
        self.slopes.iter().find(|s| s.scheme == scheme && s.method == method).and_then(|s| s.slope)
    }

    pub fn succeeded(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_some()).count()
    }
}

/// Densities for every scheme at every grid point. Each grid point is moved
/// onto the scheme's native shape ([`Scheme::native_config`]); failures are
/// kept as rows carrying the error.
pub fn run_sweep(
    schemes: &[Scheme],
    grid: &[GridPoint],
    params: &NetworkParams,
    mode: SweepMode,
    seed: u64,
    config: &BisectionConfig,
) -> Result<SweepTable> {
    if schemes.is_empty() {
        return Err(domain("sweep needs at least one scheme"));
    }
    if grid.is_empty() {
        return Err(domain("sweep needs at least one grid point"));
    }
    let mut rows = Vec::new();
    for &scheme in schemes {
        for g in grid {
            let p = scheme.native_config(&params.with_antennas(g.m, g.n, g.k));
            if mode.analytic() {
                match analytic_densities(scheme, &p) {
                    Ok(results) => rows.extend(results.into_iter().map(|r| SweepRow::ok(scheme, p, r))),
                    Err(e) => rows.push(SweepRow::failed(scheme, p, None, e)),
                }
            }
            if mode.mc() {
                rows.push(match find_max_density_with(scheme, &p, config, seed) {
                    Ok(d) => SweepRow { trials: Some(d.trials), seed: Some(seed), ..SweepRow::ok(scheme, p, d.result) },
                    Err(e) => {
                        SweepRow { seed: Some(seed), ..SweepRow::failed(scheme, p, Some(DensityMethod::MonteCarlo), e) }
                    }
                });
            }
        }
    }
    rows.sort_by_key(|r| (Scheme::ALL.iter().position(|s| *s == r.scheme), r.antenna_axis()));
    let mut slopes = Vec::new();
    for &scheme in schemes {
        let mut methods: Vec<DensityMethod> =
            rows.iter().filter(|r| r.scheme == scheme).filter_map(|r| r.result.map(|x| x.method)).collect();
        methods.sort();
        methods.dedup();
        for method in methods {
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.scheme == scheme)
                .filter_map(|r| {
                    r.result.filter(|x| x.method == method && x.ase > 0.0).map(|x| (r.antenna_axis() as f64, x.ase))
                })
                .unzip();
            slopes.push(SlopeSummary {
                scheme,
                method,
                points: xs.len(),
                slope: log_log_slope(&xs, &ys, MIN_SLOPE_POINTS),
            });
        }
    }
    Ok(SweepTable { rows, slopes })
}
