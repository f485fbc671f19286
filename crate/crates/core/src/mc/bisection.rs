use serde::{Deserialize, Serialize};

use super::outage::count_outages;
use super::stats::{wilson_interval, Z_95};
use crate::analytic::{DensityMethod, DensityResult};
use crate::channel::SimOptions;
use crate::error::{domain, Error, Result};
use crate::params::NetworkParams;
use crate::scheme::Scheme;

/// Where the outage at a probed density sits relative to the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Below,
    Above,
    /// The target could not be separated from the estimate within budget;
    /// `leaning_above` says on which side the point estimate fell.
    Unresolved {
        leaning_above: bool,
    },
}

impl Verdict {
    fn above(self) -> bool {
        matches!(self, Verdict::Above | Verdict::Unresolved { leaning_above: true })
    }

    fn resolved(self) -> bool {
        !matches!(self, Verdict::Unresolved { .. })
    }
}

/// Something that can say whether `P_out(λ)` is below or above `ε`.
pub trait OutageProbe {
    fn classify(&mut self, lambda: f64, epsilon: f64) -> Result<Verdict>;
}

/// Noiseless probe around an exact outage function.
pub struct FnProbe<F>(pub F);

impl<F: FnMut(f64) -> Result<f64>> OutageProbe for FnProbe<F> {
    fn classify(&mut self, lambda: f64, epsilon: f64) -> Result<Verdict> {
        let p = (self.0)(lambda)?;
        Ok(if p < epsilon {
            Verdict::Below
        } else if p > epsilon {
            Verdict::Above
        } else {
            Verdict::Unresolved { leaning_above: false }
        })
    }
}

/// Stochastic bisection settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectionConfig {
    /// Stop when bracket width over midpoint falls to this.
    pub tolerance: f64,
    pub initial_trials: u64,
    /// Per-probe trial cap.
    pub max_trials: u64,
    pub options: SimOptions,
}

impl Default for BisectionConfig {
    fn default() -> Self {
        Self { tolerance: 0.02, initial_trials: 10_000, max_trials: 1_000_000, options: SimOptions::default() }
    }
}

/// Monte Carlo probe. Every probe reuses trial streams `0, 1, …` of the same
/// seed, so neighbouring densities see common random numbers, and doubles
/// its trial count until the Wilson interval excludes `ε` or the cap is hit.
pub struct McProbe<'a> {
    pub scheme: Scheme,
    pub params: NetworkParams,
    pub config: &'a BisectionConfig,
    pub seed: u64,
    /// Trials spent by the most recent probe.
    pub last_trials: u64,
    pub total_trials: u64,
}

impl<'a> McProbe<'a> {
    pub fn new(scheme: Scheme, params: &NetworkParams, config: &'a BisectionConfig, seed: u64) -> Self {
        Self { scheme, params: *params, config, seed, last_trials: 0, total_trials: 0 }
    }
}

impl OutageProbe for McProbe<'_> {
    fn classify(&mut self, lambda: f64, epsilon: f64) -> Result<Verdict> {
        let p = NetworkParams { lambda, ..self.params };
        let mut trials = 0;
        let mut outages = 0;
        let mut next = self.config.initial_trials.max(1);
        loop {
            outages += count_outages(self.scheme, &p, &self.config.options, self.seed, trials..next)?;
            self.total_trials += next - trials;
            trials = next;
            self.last_trials = trials;
            let (lo, hi) = wilson_interval(outages, trials, Z_95);
            if hi < epsilon {
                return Ok(Verdict::Below);
            }
            if lo > epsilon {
                return Ok(Verdict::Above);
            }
            if trials >= self.config.max_trials {
                return Ok(Verdict::Unresolved { leaning_above: outages as f64 > epsilon * trials as f64 });
            }
            next = (trials * 2).min(self.config.max_trials);
        }
    }
}

/// Result of [`bisect_density`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionOutcome {
    pub lambda: f64,
    pub low: f64,
    pub high: f64,
    /// Noise alone already violates the target.
    pub noise_limited: bool,
    /// Some bracket move rested on a point estimate because the probe's
    /// interval still contained `ε` at the trial cap. The bracket then holds
    /// the root only up to Monte Carlo resolution.
    pub resolution_limited: bool,
    pub probes: usize,
}

const MAX_EXPANSIONS: usize = 64;

/// Bisection on λ for `P_out(λ) = ε` with an increasing outage curve.
///
/// Bracket ends move on confident verdicts where the budget allows and on
/// the point estimate otherwise. Stops when the bracket width is within
/// `tolerance` of its midpoint. An unresolved noise floor, or a bracket that
/// cannot be grown, is reported as [`Error::Inconclusive`].
pub fn bisect_density<P: OutageProbe>(
    probe: &mut P,
    epsilon: f64,
    guess: f64,
    tolerance: f64,
) -> Result<BisectionOutcome> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(tolerance > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let mut probes = 0;
    let mut resolution_limited = false;
    let mut ask = |lambda: f64, limited: &mut bool| -> Result<bool> {
        probes += 1;
        let v = probe.classify(lambda, epsilon)?;
        *limited |= !v.resolved();
        Ok(v.above())
    };
    let mut floor_limited = false;
    let floor_above = ask(0.0, &mut floor_limited)?;
    if floor_limited {
        return Err(Error::Inconclusive {
            low: 0.0,
            high: 0.0,
            reason: "outage without interferers is indistinguishable from epsilon".into(),
        });
    }
    if floor_above {
        return Ok(BisectionOutcome {
            lambda: 0.0,
            low: 0.0,
            high: 0.0,
            noise_limited: true,
            resolution_limited: false,
            probes,
        });
    }
    let guess = if guess > 0.0 && guess.is_finite() { guess } else { 1e-4 };
    let (mut lo, mut hi);
    if ask(guess, &mut resolution_limited)? {
        hi = guess;
        lo = 0.5 * guess;
        let mut steps = 0;
        while ask(lo, &mut resolution_limited)? {
            hi = lo;
            lo *= 0.5;
            steps += 1;
            if steps >= MAX_EXPANSIONS {
                return Err(Error::Inconclusive {
                    low: 0.0,
                    high: hi,
                    reason: "outage stayed above epsilon while shrinking the density".into(),
                });
            }
        }
    } else {
        lo = guess;
        hi = 2.0 * guess;
        let mut steps = 0;
        while !ask(hi, &mut resolution_limited)? {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps >= MAX_EXPANSIONS || !hi.is_finite() {
                return Err(Error::Inconclusive { low: lo, high: hi, reason: "outage never exceeded epsilon".into() });
            }
        }
    }
    while hi - lo > tolerance * 0.5 * (lo + hi) {
        let mid = 0.5 * (lo + hi);
        if ask(mid, &mut resolution_limited)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(BisectionOutcome {
        lambda: 0.5 * (lo + hi),
        low: lo,
        high: hi,
        noise_limited: false,
        resolution_limited,
        probes,
    })
}

/// Simulated maximum density with the bookkeeping behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McDensity {
    pub result: DensityResult,
    pub seed: u64,
    /// Trials spent at the final probe.
    pub trials: u64,
    pub total_trials: u64,
    pub probes: usize,
    pub resolution_limited: bool,
}

/// Model-free start: one interferer per thousand link areas `D²`.
fn starting_guess(params: &NetworkParams) -> f64 {
    1.0 / (params.distance * params.distance * 1e3)
}

/// Maximum density meeting the outage target, by stochastic bisection with
/// default trial budgets and options.
pub fn find_max_density(scheme: Scheme, params: &NetworkParams, tolerance: f64, seed: u64) -> Result<DensityResult> {
    let config = BisectionConfig { tolerance, ..BisectionConfig::default() };
    Ok(find_max_density_with(scheme, params, &config, seed)?.result)
}

pub fn find_max_density_with(
    scheme: Scheme,
    params: &NetworkParams,
    config: &BisectionConfig,
    seed: u64,
) -> Result<McDensity> {
    params.validate()?;
    scheme.check_feasible(params)?;
    let mut probe = McProbe::new(scheme, params, config, seed);
    let out = bisect_density(&mut probe, params.epsilon, starting_guess(params), config.tolerance)?;
    let result = if out.noise_limited {
        DensityResult::noise_limited(scheme, params, DensityMethod::MonteCarlo)
    } else {
        DensityResult::new(scheme, params, out.lambda, DensityMethod::MonteCarlo).with_bracket(out.low, out.high)
    };
    Ok(McDensity {
        result,
        seed,
        trials: probe.last_trials,
        total_trials: probe.total_trials,
        probes: out.probes,
        resolution_limited: out.resolution_limited,
    })
}
