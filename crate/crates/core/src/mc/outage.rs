use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::trial_rng;
use super::stats::{wilson_interval, Z_95};
use crate::channel::{outage_sample, SimOptions};
use crate::error::{domain, Result};
use crate::params::NetworkParams;
use crate::scheme::Scheme;

const CHUNK: u64 = 1024;

/// Simulated outage probability with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub scheme: Scheme,
    pub params: NetworkParams,
    pub options: SimOptions,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub outages: u64,
    pub trials: u64,
    pub seed: u64,
}

impl OutageEstimate {
    pub(crate) fn from_counts(
        scheme: Scheme,
        params: &NetworkParams,
        options: &SimOptions,
        outages: u64,
        trials: u64,
        seed: u64,
    ) -> Self {
        let (ci_low, ci_high) = wilson_interval(outages, trials, Z_95);
        Self {
            scheme,
            params: *params,
            options: *options,
            p_hat: outages as f64 / trials as f64,
            ci_low,
            ci_high,
            outages,
            trials,
            seed,
        }
    }
}

/// Outages among trials `range` of the run keyed by `seed`, evaluated on the
/// current rayon pool.
pub fn count_outages(
    scheme: Scheme,
    params: &NetworkParams,
    options: &SimOptions,
    seed: u64,
    range: Range<u64>,
) -> Result<u64> {
    params.validate_link()?;
    scheme.check_feasible(params)?;
    let chunks = (range.end.saturating_sub(range.start)).div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = range.start + c * CHUNK;
            let hi = (lo + CHUNK).min(range.end);
            let mut hits = 0u64;
            for i in lo..hi {
                let mut rng = trial_rng(seed, i);
                hits += outage_sample(scheme, params, options, &mut rng)? as u64;
            }
            Ok(hits)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Fraction of `trials` realizations with `SINR < β`, default options.
pub fn estimate_outage(scheme: Scheme, params: &NetworkParams, trials: u64, seed: u64) -> Result<OutageEstimate> {
    estimate_outage_with(scheme, params, &SimOptions::default(), trials, seed)
}

pub fn estimate_outage_with(
    scheme: Scheme,
    params: &NetworkParams,
    options: &SimOptions,
    trials: u64,
    seed: u64,
) -> Result<OutageEstimate> {
    if trials == 0 {
        return Err(domain("trials must be at least 1"));
    }
    let outages = count_outages(scheme, params, options, seed, 0..trials)?;
    Ok(OutageEstimate::from_counts(scheme, params, options, outages, trials, seed))
}
